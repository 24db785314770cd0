"""Penalty encoding of an assignment problem into a diagonal Ising model.

The extended objective is the negated gain plus, for every equality
constraint, the squared residual scaled by the penalty weight A. Substituting
x = (1 - z)/2 turns it into a polynomial in spin variables z in {+1, -1};
coefficients are collected exactly with Fractions. ``IsingModel`` stores the
expanded polynomial directly:

    E(z) = constant + sum_i linear[i] * z_i + sum_{i<j} pairwise[(i,j)] * z_i z_j

For every bitstring that satisfies all constraints E equals minus the gain;
any violated equality contributes at least A, so infeasible strings sit at
energy >= 1 above every feasible one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .problem import AssignmentProblem, VariableLayout, parse_bits

Term = tuple[tuple[int, ...], Fraction]


@dataclass(frozen=True, eq=True)
class IsingModel:
    qubit_count: int
    constant: Fraction
    linear: tuple[Fraction, ...]
    pairwise: dict[tuple[int, int], Fraction]
    penalty: Fraction

    def __post_init__(self):
        if len(self.linear) != self.qubit_count:
            raise ValueError("linear coefficient vector has wrong length")
        for i, j in self.pairwise:
            if not 0 <= i < j < self.qubit_count:
                raise ValueError(f"pairwise key ({i}, {j}) is not upper-triangular")


def penalty_weight(problem: AssignmentProblem) -> Fraction:
    """A = 1 + total gain, so one violated constraint outweighs all gains."""
    return Fraction(1) + sum(
        (v for proc in problem.processes for v in proc.values), Fraction(0)
    )


class _Polynomial:
    """Accumulator for constant/linear/pairwise terms over spin variables."""

    def __init__(self, qubit_count: int):
        self.constant = Fraction(0)
        self.linear = [Fraction(0)] * qubit_count
        self.pairwise: dict[tuple[int, int], Fraction] = {}

    def add_affine_square(self, scale: Fraction, constant: Fraction, coeffs: dict[int, Fraction]):
        """Add scale * (constant + sum coeffs[q] * z_q)^2, using z_q^2 = 1."""
        self.constant += scale * constant * constant
        items = sorted(coeffs.items())
        for q, a in items:
            self.constant += scale * a * a
            self.linear[q] += scale * 2 * constant * a
        for idx, (q1, a1) in enumerate(items):
            for q2, a2 in items[idx + 1 :]:
                key = (q1, q2)
                self.pairwise[key] = self.pairwise.get(key, Fraction(0)) + scale * 2 * a1 * a2


def encode(problem: AssignmentProblem, layout: VariableLayout) -> IsingModel:
    """Expand the penalized objective into an IsingModel."""
    a = penalty_weight(problem)
    half = Fraction(1, 2)
    poly = _Polynomial(layout.qubit_count)

    # Gain term: -v * x = -v/2 + (v/2) z for each assignment variable.
    for i, proc in enumerate(problem.processes):
        for j, v in enumerate(proc.values):
            if v:
                poly.constant -= v * half
                poly.linear[layout.assign_qubit(i, j)] += v * half

    # Process one-hot penalties: A * (1 - sum of block variables)^2.
    for i in range(problem.num_processes):
        block = layout.process_block(i)
        constant = Fraction(1) - Fraction(len(block), 2)
        poly.add_affine_square(a, constant, {q: half for q in block})

    # Node capacity penalties: A * (B_j - load_j - slack_j)^2 with slack bit
    # k carrying weight 2^k; high-load registers are sized by the usable
    # capacity but the equality keeps the full capacity on the right side.
    for j, node in enumerate(problem.nodes):
        coeffs: dict[int, Fraction] = {}
        total = Fraction(0)
        for i in range(problem.num_processes):
            w = Fraction(problem.processes[i].weight)
            coeffs[layout.assign_qubit(i, j)] = w * half
            total += w
        for k, q in enumerate(layout.slack_qubits(j)):
            weight = Fraction(1 << k)
            coeffs[q] = weight * half
            total += weight
        constant = Fraction(node.capacity) - total * half
        poly.add_affine_square(a, constant, coeffs)

    pairwise = {key: c for key, c in sorted(poly.pairwise.items()) if c}
    return IsingModel(
        qubit_count=layout.qubit_count,
        constant=poly.constant,
        linear=tuple(poly.linear),
        pairwise=pairwise,
        penalty=a,
    )


def energy(model: IsingModel, bits: str) -> Fraction:
    """Exact energy of a bitstring; bit 0 maps to z = +1, bit 1 to z = -1."""
    values = parse_bits(bits, model.qubit_count)
    z = [1 - 2 * b for b in values]
    total = model.constant
    for i, c in enumerate(model.linear):
        if c:
            total += c * z[i]
    for (i, j), c in model.pairwise.items():
        total += c * z[i] * z[j]
    return total


def to_terms(model: IsingModel) -> list[Term]:
    """Constant, singleton and pair terms, suitable for cost-layer circuits."""
    terms: list[Term] = [((), model.constant)]
    for i, c in enumerate(model.linear):
        if c:
            terms.append(((i,), c))
    for key, c in sorted(model.pairwise.items()):
        terms.append((key, c))
    return terms


def from_terms(qubit_count: int, terms: list[Term], penalty: Fraction) -> IsingModel:
    """Inverse of to_terms."""
    constant = Fraction(0)
    linear = [Fraction(0)] * qubit_count
    pairwise: dict[tuple[int, int], Fraction] = {}
    for qubits, coeff in terms:
        coeff = Fraction(coeff)
        if len(qubits) == 0:
            constant += coeff
        elif len(qubits) == 1:
            linear[qubits[0]] += coeff
        elif len(qubits) == 2:
            i, j = sorted(qubits)
            pairwise[(i, j)] = pairwise.get((i, j), Fraction(0)) + coeff
        else:
            raise ValueError("only constant, singleton and pair terms are supported")
    pairwise = {k: c for k, c in sorted(pairwise.items()) if c}
    return IsingModel(qubit_count, constant, tuple(linear), pairwise, Fraction(penalty))


def format_fraction(x: Fraction) -> str:
    """Exact text form: integer, finite decimal, or p/q."""
    if x.denominator == 1:
        return str(x.numerator)
    rest = x.denominator
    twos = fives = 0
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    text = f"{scaled:0{digits + 1}d}"
    sign = "-" if x < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def model_to_text(model: IsingModel) -> str:
    """Plain-text term list, one term per line (0-based qubit indices)."""
    lines = [
        "qvarsched-v1 ising",
        f"qubits {model.qubit_count}",
        f"penalty {format_fraction(model.penalty)}",
        f"constant {format_fraction(model.constant)}",
    ]
    for qubits, coeff in to_terms(model):
        if qubits:
            lines.append(" ".join(str(q) for q in qubits) + f" {format_fraction(coeff)}")
    return "\n".join(lines) + "\n"


def model_from_text(text: str) -> IsingModel:
    """Parse the model_to_text format back into an identical IsingModel."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [(n + 1, ln) for n, ln in enumerate(lines) if ln and not ln.startswith("#")]
    if not lines or lines[0][1].split() != ["qvarsched-v1", "ising"]:
        raise ParseError("missing 'qvarsched-v1 ising' header", lines[0][0] if lines else 1)
    qubits: int | None = None
    penalty = Fraction(0)
    terms: list[Term] = []
    for number, line in lines[1:]:
        fields = line.split()
        try:
            if fields[0] == "qubits":
                qubits = int(fields[1])
            elif fields[0] == "penalty":
                penalty = Fraction(fields[1])
            elif fields[0] == "constant":
                terms.append(((), Fraction(fields[1])))
            else:
                terms.append((tuple(int(f) for f in fields[:-1]), Fraction(fields[-1])))
        except (ValueError, IndexError, ZeroDivisionError) as exc:
            raise ParseError(f"bad term line {line!r}: {exc}", number)
    if qubits is None:
        raise ParseError("missing 'qubits' line")
    return from_terms(qubits, terms, penalty)
