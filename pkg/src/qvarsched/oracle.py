"""Classical ground truth: exhaustive enumeration and dense-matrix circuits.

enumerate_solutions scans all 2^Q bitstrings (vectorised, chunked) for the
same equalities check_feasible tests; enumerate_assignments is an
independent structured shortcut that walks the (N + c)^P target tuples and
derives each slack register. dense_state rebuilds every gate as an explicit
2^n x 2^n matrix, sharing no kernel code with the fast simulator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import cos, lcm, sin

import numpy as np

from .errors import QubitCountExceededError
from .problem import (
    CLOUD,
    Assignment,
    AssignmentProblem,
    VariableLayout,
    assignment_bits,
    gain,
)
from .simulator import Circuit, Gate, Param, _bind, index_to_bits

_CHUNK_BITS = 20
DENSE_MAX_QUBITS = 6


@dataclass(frozen=True)
class OracleReport:
    optimal_gain: Fraction | None
    optimal_bitstrings: frozenset[str]
    best_count: int
    feasible_count: int
    total: int
    infeasible_instance: bool


def _bit_column(index: np.ndarray, qubit_count: int, qubit: int) -> np.ndarray:
    return ((index >> (qubit_count - 1 - qubit)) & 1).astype(np.int64)


def _scan_chunk(
    problem: AssignmentProblem,
    layout: VariableLayout,
    lo: int,
    hi: int,
    scaled_values: list[list[int]],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(index, feasible mask, scaled gains) over one index range."""
    q = layout.qubit_count
    index = np.arange(lo, hi, dtype=np.int64)
    feasible = np.ones(hi - lo, dtype=bool)
    for i in range(problem.num_processes):
        total = np.zeros(hi - lo, dtype=np.int64)
        for qubit in layout.process_block(i):
            total += _bit_column(index, q, qubit)
        feasible &= total == 1
    for j, node in enumerate(problem.nodes):
        total = np.zeros(hi - lo, dtype=np.int64)
        for i in range(problem.num_processes):
            total += problem.processes[i].weight * _bit_column(
                index, q, layout.assign_qubit(i, j)
            )
        for k, qubit in enumerate(layout.slack_qubits(j)):
            total += (1 << k) * _bit_column(index, q, qubit)
        feasible &= total == node.capacity
    gains = np.zeros(hi - lo, dtype=np.int64)
    for i in range(problem.num_processes):
        for j in range(problem.num_nodes):
            v = scaled_values[i][j]
            if v:
                gains += v * _bit_column(index, q, layout.assign_qubit(i, j))
    return index, feasible, gains


def _scaled_values(problem: AssignmentProblem) -> tuple[list[list[int]], int]:
    denom = lcm(*(v.denominator for p in problem.processes for v in p.values))
    scaled = [[int(v * denom) for v in p.values] for p in problem.processes]
    return scaled, denom


def feasible_mask(problem: AssignmentProblem, layout: VariableLayout) -> np.ndarray:
    """Boolean feasibility of every bitstring, ordered by basis index."""
    if layout.qubit_count > _CHUNK_BITS:
        raise QubitCountExceededError(
            f"feasible_mask supports up to {_CHUNK_BITS} qubits, got {layout.qubit_count}"
        )
    scaled, _ = _scaled_values(problem)
    _, mask, _ = _scan_chunk(problem, layout, 0, 1 << layout.qubit_count, scaled)
    return mask


def enumerate_solutions(
    problem: AssignmentProblem,
    layout: VariableLayout,
    *,
    max_qubits: int = 24,
) -> OracleReport:
    """Exhaustive scan of the full 2^Q solution space."""
    q = layout.qubit_count
    if q > max_qubits:
        raise QubitCountExceededError(f"{q} qubits exceeds the maximum of {max_qubits}")
    scaled, denom = _scaled_values(problem)
    feasible_count = 0
    best_scaled: int | None = None
    best_indices: list[int] = []
    step = 1 << min(q, _CHUNK_BITS)
    for lo in range(0, 1 << q, step):
        index, mask, gains = _scan_chunk(problem, layout, lo, lo + step, scaled)
        hits = index[mask]
        if hits.size == 0:
            continue
        feasible_count += int(hits.size)
        chunk_gains = gains[mask]
        top = int(chunk_gains.max())
        if best_scaled is None or top > best_scaled:
            best_scaled = top
            best_indices = []
        if top == best_scaled:
            best_indices.extend(int(i) for i in hits[chunk_gains == best_scaled])
    optimal = frozenset(index_to_bits(i, q) for i in best_indices)
    return OracleReport(
        optimal_gain=None if best_scaled is None else Fraction(best_scaled, denom),
        optimal_bitstrings=optimal,
        best_count=len(optimal),
        feasible_count=feasible_count,
        total=1 << q,
        infeasible_instance=feasible_count == 0,
    )


def enumerate_assignments(
    problem: AssignmentProblem, layout: VariableLayout
) -> OracleReport:
    """Structured shortcut: iterate target tuples and derive slack registers.

    A target tuple is feasible exactly when every residual capacity fits its
    slack register, in which case the register value is unique, so the
    counts agree with the full bitstring scan.
    """
    options = list(range(problem.num_nodes))
    if problem.variant.cloud_allowed:
        options.append(CLOUD)
    register_sizes = [1 << len(layout.slack_qubits(j)) for j in range(problem.num_nodes)]
    feasible_count = 0
    best: Fraction | None = None
    best_bits: list[str] = []
    for targets in product(options, repeat=problem.num_processes):
        loads = [0] * problem.num_nodes
        for i, target in enumerate(targets):
            if target != CLOUD:
                loads[target] += problem.processes[i].weight
        residuals = [node.capacity - load for node, load in zip(problem.nodes, loads)]
        if any(not 0 <= r < size for r, size in zip(residuals, register_sizes)):
            continue
        feasible_count += 1
        assignment = Assignment(tuple(targets), tuple(loads), tuple(residuals))
        value = gain(problem, assignment)
        if best is None or value > best:
            best = value
            best_bits = []
        if value == best:
            best_bits.append(assignment_bits(layout, assignment))
    return OracleReport(
        optimal_gain=best,
        optimal_bitstrings=frozenset(best_bits),
        best_count=len(best_bits),
        feasible_count=feasible_count,
        total=1 << layout.qubit_count,
        infeasible_instance=feasible_count == 0,
    )


def gate_unitary(gate: Gate, qubit_count: int, angle: float | None = None) -> np.ndarray:
    """Explicit 2^n x 2^n matrix for one gate, built by basis-state mapping."""
    n = qubit_count
    dim = 1 << n
    if gate.angle is not None and angle is None:
        angle = float(gate.angle)

    def bit(state: int, qubit: int) -> int:
        return (state >> (n - 1 - qubit)) & 1

    def flipped(state: int, qubit: int) -> int:
        return state ^ (1 << (n - 1 - qubit))

    matrix = np.zeros((dim, dim), dtype=np.complex128)
    name = gate.name
    if name in ("x", "h", "rx", "ry", "rz"):
        q = gate.qubits[0]
        if name == "x":
            local = np.array([[0, 1], [1, 0]], dtype=np.complex128)
        elif name == "h":
            local = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
        elif name == "rx":
            c, s = cos(angle / 2), sin(angle / 2)
            local = np.array([[c, -1j * s], [-1j * s, c]])
        elif name == "ry":
            c, s = cos(angle / 2), sin(angle / 2)
            local = np.array([[c, -s], [s, c]])
        else:
            local = np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
        for col in range(dim):
            b = bit(col, q)
            matrix[col if b == 0 else flipped(col, q), col] += local[0, b]
            matrix[col if b == 1 else flipped(col, q), col] += local[1, b]
    elif name == "cx":
        control, target = gate.qubits
        for col in range(dim):
            row = flipped(col, target) if bit(col, control) else col
            matrix[row, col] = 1.0
    elif name == "mcx":
        *controls, target = gate.qubits
        for col in range(dim):
            row = flipped(col, target) if all(bit(col, c) for c in controls) else col
            matrix[row, col] = 1.0
    elif name == "cry":
        control, target = gate.qubits
        c, s = cos(angle / 2), sin(angle / 2)
        for col in range(dim):
            if not bit(col, control):
                matrix[col, col] = 1.0
            elif bit(col, target) == 0:
                matrix[col, col] += c
                matrix[flipped(col, target), col] += s
            else:
                matrix[col, col] += c
                matrix[flipped(col, target), col] += -s
    elif name == "rzz":
        qa, qb = gate.qubits
        for col in range(dim):
            phase = -0.5j if bit(col, qa) == bit(col, qb) else 0.5j
            matrix[col, col] = np.exp(phase * angle)
    elif name == "csub":
        control, *register = gate.qubits
        size = 1 << len(register)
        shift = gate.constant % size
        for col in range(dim):
            if not bit(col, control):
                matrix[col, col] = 1.0
                continue
            value = sum(bit(col, q) << k for k, q in enumerate(register))
            target_value = (value - shift) % size
            row = col
            for k, q in enumerate(register):
                if bit(row, q) != (target_value >> k) & 1:
                    row = flipped(row, q)
            matrix[row, col] = 1.0
    else:
        raise ValueError(f"unknown gate {name!r}")
    return matrix


def dense_state(
    circuit: Circuit, params=None, *, max_qubits: int = DENSE_MAX_QUBITS
) -> np.ndarray:
    """Final state by explicit matrix products; verification-grade only."""
    n = circuit.qubit_count
    if n > max_qubits:
        raise QubitCountExceededError(f"{n} qubits exceeds the dense maximum of {max_qubits}")
    binding = _bind(circuit, params)
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    for gate in circuit.gates:
        angle = None
        if isinstance(gate.angle, Param):
            angle = gate.angle.scale * binding[gate.angle.name]
        elif gate.angle is not None:
            angle = float(gate.angle)
        state = gate_unitary(gate, n, angle) @ state
    return state
