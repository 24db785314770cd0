"""Shared instances and independent evaluation oracles for the tests.

direct_objective evaluates the penalized objective straight from the binary
variables (gain plus squared equality residuals); it never touches the
encoder's polynomial expansion, so it serves as the independent route when
checking IsingModel energies.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from qvarsched import (
    AssignmentProblem,
    VariableLayout,
    make_problem,
)
from qvarsched.encoder import penalty_weight
from qvarsched.problem import parse_bits

REFERENCE_WEIGHTS = (2, 1, 1)
REFERENCE_VALUES = ((2, 1), (3, 1), (2, 1))


def reference_problem(variant: str) -> AssignmentProblem:
    """The 3-process, 2-node instance used throughout the experiments."""
    thresholds = (2, 1) if variant.upper().endswith("HL") else (0, 0)
    return make_problem(variant, REFERENCE_WEIGHTS, REFERENCE_VALUES, (3, 2), thresholds)


# Printed golden Hamiltonian of the EOHL reference instance (1-based labels).
GOLDEN_CONSTANT = Fraction("55.5")
GOLDEN_LINEAR = tuple(
    Fraction(s) for s in ("12", "-10.5", "7", "-5", "6.5", "-5", "5.5", "-5.5")
)
GOLDEN_PAIRS_1BASED = {
    (1, 2): Fraction("5.5"),
    (1, 3): Fraction(11),
    (1, 5): Fraction(11),
    (1, 7): Fraction(11),
    (2, 4): Fraction(11),
    (2, 6): Fraction(11),
    (2, 8): Fraction(11),
    (3, 4): Fraction("5.5"),
    (3, 5): Fraction("5.5"),
    (3, 7): Fraction("5.5"),
    (4, 6): Fraction("5.5"),
    (4, 8): Fraction("5.5"),
    (5, 6): Fraction("5.5"),
    (5, 7): Fraction("5.5"),
    (6, 8): Fraction("5.5"),
}
GOLDEN_PAIRS = {(i - 1, j - 1): c for (i, j), c in GOLDEN_PAIRS_1BASED.items()}

# Ground truth (Q, best, feasible, total) for the four reference instances.
REFERENCE_COUNTS = {
    "EOHL": (8, 2, 4, 256),
    "EOFL": (10, 2, 4, 1024),
    "ECHL": (11, 2, 6, 2048),
    "ECFL": (13, 2, 21, 8192),
}


def direct_objective(problem: AssignmentProblem, layout: VariableLayout, bits: str) -> Fraction:
    """Penalized objective evaluated directly on the binary variables."""
    values = parse_bits(bits, layout.qubit_count)
    a = penalty_weight(problem)
    total = Fraction(0)
    for i, proc in enumerate(problem.processes):
        for j, v in enumerate(proc.values):
            total -= v * values[layout.assign_qubit(i, j)]
    for i in range(problem.num_processes):
        residual = 1 - sum(values[q] for q in layout.process_block(i))
        total += a * residual * residual
    for j, node in enumerate(problem.nodes):
        load = sum(
            problem.processes[i].weight * values[layout.assign_qubit(i, j)]
            for i in range(problem.num_processes)
        )
        slack = sum(values[q] << k for k, q in enumerate(layout.slack_qubits(j)))
        residual = node.capacity - load - slack
        total += a * residual * residual
    return total


def direct_objective_vector(problem: AssignmentProblem, layout: VariableLayout) -> np.ndarray:
    """direct_objective for every bitstring, vectorised (exact in float64)."""
    q = layout.qubit_count
    index = np.arange(1 << q, dtype=np.int64)

    def bit(qubit: int) -> np.ndarray:
        return ((index >> (q - 1 - qubit)) & 1).astype(np.float64)

    a = float(penalty_weight(problem))
    total = np.zeros(1 << q)
    for i, proc in enumerate(problem.processes):
        for j, v in enumerate(proc.values):
            total -= float(v) * bit(layout.assign_qubit(i, j))
    for i in range(problem.num_processes):
        residual = 1.0 - sum(bit(qb) for qb in layout.process_block(i))
        total += a * residual * residual
    for j, node in enumerate(problem.nodes):
        load = sum(
            problem.processes[i].weight * bit(layout.assign_qubit(i, j))
            for i in range(problem.num_processes)
        )
        slack = sum(
            float(1 << k) * bit(qb) for k, qb in enumerate(layout.slack_qubits(j))
        )
        residual = node.capacity - load - slack
        total += a * residual * residual
    return total


def random_problem(
    rng: np.random.Generator,
    max_qubits: int = 14,
    pow2_slack: bool = False,
    variants=("ECFL", "EOFL", "ECHL", "EOHL"),
) -> AssignmentProblem:
    """Random valid instance with at most max_qubits binary variables.

    With pow2_slack the usable capacity is drawn from {1, 3, 7} so the slack
    register range matches the residual interval exactly.
    """
    from qvarsched import qubit_count

    while True:
        variant = str(rng.choice(list(variants)))
        p = int(rng.integers(1, 5))
        n = int(rng.integers(1, 4))
        weights = [int(rng.integers(1, 4)) for _ in range(p)]
        choices = (0, 1, 2, 3, Fraction(1, 2), Fraction(3, 2))
        values = [
            [choices[int(rng.integers(len(choices)))] for _ in range(n)] for _ in range(p)
        ]
        high_load = variant.endswith("HL")
        capacities, thresholds = [], []
        for _ in range(n):
            if high_load:
                usable = int(rng.choice([1, 3, 7])) if pow2_slack else int(rng.integers(1, 7))
                threshold = int(rng.integers(0, 4))
                capacities.append(usable + threshold)
                thresholds.append(threshold)
            else:
                capacities.append(int(rng.choice([1, 3, 7])) if pow2_slack else int(rng.integers(1, 8)))
                thresholds.append(0)
        problem = make_problem(variant, weights, values, capacities, thresholds)
        if qubit_count(problem) <= max_qubits:
            return problem
