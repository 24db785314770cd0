"""Edge/Cloud assignment problem model.

Four problem variants are supported, named by two flags: whether processes
may be placed on the Cloud in addition to the edge nodes (``cloud_allowed``)
and whether each node must carry at least a minimum load (``high_load``).
Weights and capacities are integers; per-node gains are exact rationals so
that the penalty encoding downstream stays exact.

Bitstring convention used everywhere in the package: qubit 0 is the leftmost
character of a bitstring.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import MalformedBitstringError

#: Sentinel target meaning "process runs on the Cloud".
CLOUD = -1


@dataclass(frozen=True)
class ProblemVariant:
    cloud_allowed: bool
    high_load: bool

    @property
    def name(self) -> str:
        return ("EC" if self.cloud_allowed else "EO") + ("HL" if self.high_load else "FL")

    @classmethod
    def from_name(cls, name: str) -> "ProblemVariant":
        try:
            return VARIANTS[name.upper()]
        except KeyError:
            raise ValueError(f"unknown variant {name!r}, expected one of {sorted(VARIANTS)}")


ECFL = ProblemVariant(cloud_allowed=True, high_load=False)
EOFL = ProblemVariant(cloud_allowed=False, high_load=False)
ECHL = ProblemVariant(cloud_allowed=True, high_load=True)
EOHL = ProblemVariant(cloud_allowed=False, high_load=True)
VARIANTS = {"ECFL": ECFL, "EOFL": EOFL, "ECHL": ECHL, "EOHL": EOHL}


def as_fraction(value) -> Fraction:
    """Exact conversion; decimal strings like "0.5" parse exactly."""
    if isinstance(value, float):
        # Floats are accepted but converted through their shortest repr so
        # that 0.1 means 1/10, not its binary approximation.
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class ProcessSpec:
    """One process: integer resource demand and per-node gains."""

    weight: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))
        if self.weight < 1:
            raise ValueError(f"process weight must be >= 1, got {self.weight}")
        if any(v < 0 for v in self.values):
            raise ValueError("process values must be non-negative")


@dataclass(frozen=True)
class NodeSpec:
    """One edge node: capacity and (for high-load variants) minimum load."""

    capacity: int
    threshold: int = 0

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"node capacity must be >= 1, got {self.capacity}")
        if self.threshold < 0:
            raise ValueError(f"node threshold must be >= 0, got {self.threshold}")

    @property
    def usable_capacity(self) -> int:
        """Capacity left above the mandatory minimum load."""
        return self.capacity - self.threshold


@dataclass(frozen=True)
class AssignmentProblem:
    variant: ProblemVariant
    processes: tuple[ProcessSpec, ...]
    nodes: tuple[NodeSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "processes", tuple(self.processes))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.processes:
            raise ValueError("at least one process is required")
        if not self.nodes:
            raise ValueError("at least one node is required")
        n = len(self.nodes)
        for i, proc in enumerate(self.processes):
            if len(proc.values) != n:
                raise ValueError(
                    f"process {i}: expected {n} values, got {len(proc.values)}"
                )
        for j, node in enumerate(self.nodes):
            if self.variant.high_load:
                if not 0 <= node.threshold < node.capacity:
                    raise ValueError(
                        f"node {j}: threshold must satisfy 0 <= T < capacity under high load"
                    )
            elif node.threshold != 0:
                raise ValueError(f"node {j}: threshold must be 0 for free-load variants")

    @property
    def num_processes(self) -> int:
        return len(self.processes)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)


def slack_bit_count(node: NodeSpec, variant: ProblemVariant) -> int:
    """Number of slack bits for a node's capacity equality.

    The residual capacity ranges over [0, B^] with B^ = capacity - threshold
    (threshold is 0 for free-load variants), so ceil(log2(B^ + 1)) bits.
    """
    usable = node.usable_capacity if variant.high_load else node.capacity
    return usable.bit_length()


def qubit_count(problem: AssignmentProblem) -> int:
    """Total binary variables: assignment bits, cloud bits, slack bits."""
    p, n = problem.num_processes, problem.num_nodes
    per_process = n + (1 if problem.variant.cloud_allowed else 0)
    slack = sum(slack_bit_count(node, problem.variant) for node in problem.nodes)
    return p * per_process + slack


@dataclass(frozen=True)
class VarRef:
    """One binary variable and the qubit it occupies.

    kind is "assign" (x_ij), "cloud" (p_i) or "slack" (b_jk); ``bit`` is the
    0-based slack bit position, weight 2**bit.
    """

    kind: str
    qubit: int
    process: int | None = None
    node: int | None = None
    bit: int | None = None


@dataclass(frozen=True, eq=False)
class VariableLayout:
    """Canonical variable-to-qubit mapping for a problem.

    Ordering: per-process blocks first (x_i1..x_iN, then p_i when the Cloud
    is allowed), followed by the per-node slack registers, least significant
    bit first.
    """

    problem: AssignmentProblem
    qubit_count: int
    variables: tuple[VarRef, ...]
    _assign: tuple[tuple[int, ...], ...]
    _cloud: tuple[int, ...]
    _slack: tuple[tuple[int, ...], ...]

    def assign_qubit(self, process: int, node: int) -> int:
        return self._assign[process][node]

    def cloud_qubit(self, process: int) -> int:
        if not self.problem.variant.cloud_allowed:
            raise ValueError("variant has no cloud slack variables")
        return self._cloud[process]

    def slack_qubits(self, node: int) -> tuple[int, ...]:
        """Slack register of a node, least significant bit first."""
        return self._slack[node]

    def process_block(self, process: int) -> tuple[int, ...]:
        """Qubits of one process's one-hot block (x_i1..x_iN, then p_i)."""
        block = self._assign[process]
        if self.problem.variant.cloud_allowed:
            block = block + (self._cloud[process],)
        return block


def build_layout(problem: AssignmentProblem) -> VariableLayout:
    """Deterministic layout; every qubit index in [0, Q) used exactly once."""
    cloud = problem.variant.cloud_allowed
    variables: list[VarRef] = []
    assign: list[tuple[int, ...]] = []
    cloud_qubits: list[int] = []
    q = 0
    for i in range(problem.num_processes):
        row = []
        for j in range(problem.num_nodes):
            variables.append(VarRef("assign", q, process=i, node=j))
            row.append(q)
            q += 1
        assign.append(tuple(row))
        if cloud:
            variables.append(VarRef("cloud", q, process=i))
            cloud_qubits.append(q)
            q += 1
    slack: list[tuple[int, ...]] = []
    for j, node in enumerate(problem.nodes):
        reg = []
        for k in range(slack_bit_count(node, problem.variant)):
            variables.append(VarRef("slack", q, node=j, bit=k))
            reg.append(q)
            q += 1
        slack.append(tuple(reg))
    return VariableLayout(
        problem=problem,
        qubit_count=q,
        variables=tuple(variables),
        _assign=tuple(assign),
        _cloud=tuple(cloud_qubits),
        _slack=tuple(slack),
    )


def parse_bits(bits: str, expected_length: int) -> tuple[int, ...]:
    """Validate a bitstring and return it as a tuple of ints."""
    if len(bits) != expected_length:
        raise MalformedBitstringError(
            f"expected {expected_length} bits, got {len(bits)}"
        )
    if set(bits) - {"0", "1"}:
        raise MalformedBitstringError(f"bitstring contains non-binary characters: {bits!r}")
    return tuple(int(b) for b in bits)


@dataclass(frozen=True)
class Assignment:
    """Decoded placement: per-process target, node loads, residual capacities.

    targets[i] is a node index, CLOUD, or None when the process's one-hot
    equality is violated (structurally inconsistent string).
    """

    targets: tuple[int | None, ...]
    loads: tuple[int, ...]
    residuals: tuple[int, ...]

    @property
    def consistent(self) -> bool:
        return None not in self.targets


def decode(layout: VariableLayout, bits: str) -> Assignment:
    """Decode a bitstring into an Assignment; feasibility is not required."""
    problem = layout.problem
    values = parse_bits(bits, layout.qubit_count)
    targets: list[int | None] = []
    for i in range(problem.num_processes):
        chosen = [j for j in range(problem.num_nodes) if values[layout.assign_qubit(i, j)]]
        on_cloud = problem.variant.cloud_allowed and values[layout.cloud_qubit(i)]
        if len(chosen) == 1 and not on_cloud:
            targets.append(chosen[0])
        elif not chosen and on_cloud:
            targets.append(CLOUD)
        else:
            targets.append(None)
    loads = [0] * problem.num_nodes
    for i, target in enumerate(targets):
        if target is not None and target != CLOUD:
            loads[target] += problem.processes[i].weight
    residuals = [node.capacity - load for node, load in zip(problem.nodes, loads)]
    return Assignment(tuple(targets), tuple(loads), tuple(residuals))


def assignment_bits(layout: VariableLayout, assignment: Assignment) -> str:
    """Bitstring for a structurally consistent assignment.

    Slack registers are set to the residual capacity modulo the register
    size, which is the unique value satisfying the node equality whenever one
    exists.
    """
    problem = layout.problem
    if not assignment.consistent:
        raise ValueError("assignment is structurally inconsistent")
    bits = [0] * layout.qubit_count
    for i, target in enumerate(assignment.targets):
        if target == CLOUD:
            bits[layout.cloud_qubit(i)] = 1
        else:
            bits[layout.assign_qubit(i, target)] = 1
    for j, node in enumerate(problem.nodes):
        reg = layout.slack_qubits(j)
        residual = (node.capacity - assignment.loads[j]) % (1 << len(reg))
        for k, q in enumerate(reg):
            bits[q] = (residual >> k) & 1
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class Violation:
    kind: str  # "process" or "node"
    index: int
    message: str


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple[Violation, ...]


def check_feasible(
    problem: AssignmentProblem, layout: VariableLayout, bits: str
) -> FeasibilityReport:
    """Check every per-process one-hot equality and per-node load equality."""
    values = parse_bits(bits, layout.qubit_count)
    violations: list[Violation] = []
    for i in range(problem.num_processes):
        total = sum(values[q] for q in layout.process_block(i))
        if total != 1:
            violations.append(
                Violation("process", i, f"process {i}: one-hot sum is {total}, want 1")
            )
    for j, node in enumerate(problem.nodes):
        load = sum(
            problem.processes[i].weight * values[layout.assign_qubit(i, j)]
            for i in range(problem.num_processes)
        )
        slack = sum(values[q] << k for k, q in enumerate(layout.slack_qubits(j)))
        if load + slack != node.capacity:
            violations.append(
                Violation(
                    "node",
                    j,
                    f"node {j}: load {load} + slack {slack} != capacity {node.capacity}",
                )
            )
    return FeasibilityReport(not violations, tuple(violations))


def gain(problem: AssignmentProblem, assignment: Assignment) -> Fraction:
    """Total gain of the edge-assigned processes; the Cloud contributes 0."""
    total = Fraction(0)
    for i, target in enumerate(assignment.targets):
        if target is not None and target != CLOUD:
            total += problem.processes[i].values[target]
    return total


def make_problem(
    variant: ProblemVariant | str,
    weights: Iterable[int],
    values: Iterable[Iterable],
    capacities: Iterable[int],
    thresholds: Iterable[int] | None = None,
) -> AssignmentProblem:
    """Convenience constructor from plain sequences."""
    if isinstance(variant, str):
        variant = ProblemVariant.from_name(variant)
    capacities = tuple(capacities)
    thresholds = tuple(thresholds) if thresholds is not None else (0,) * len(capacities)
    processes = tuple(
        ProcessSpec(w, tuple(as_fraction(v) for v in row))
        for w, row in zip(weights, values, strict=True)
    )
    nodes = tuple(
        NodeSpec(b, t) for b, t in zip(capacities, thresholds, strict=True)
    )
    return AssignmentProblem(variant, processes, nodes)
