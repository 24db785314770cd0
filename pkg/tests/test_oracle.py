from math import pi

import numpy as np
import pytest

from qvarsched import (
    build_layout,
    build_qaoa,
    check_feasible,
    encode,
    make_problem,
    run,
)
from qvarsched.encoder import IsingModel
from qvarsched.errors import QubitCountExceededError
from qvarsched.oracle import (
    dense_state,
    enumerate_assignments,
    enumerate_solutions,
    feasible_mask,
)
from qvarsched.simulator import Circuit, Gate, bits_to_index, diagonal_energies

from helpers import REFERENCE_COUNTS, random_problem, reference_problem


@pytest.mark.parametrize("variant", sorted(REFERENCE_COUNTS))
def test_reference_counts(variant):
    problem = reference_problem(variant)
    layout = build_layout(problem)
    report = enumerate_solutions(problem, layout)
    q, best, feasible, total = REFERENCE_COUNTS[variant]
    assert layout.qubit_count == q
    assert (report.best_count, report.feasible_count, report.total) == (best, feasible, total)
    assert report.optimal_gain == 6
    assert not report.infeasible_instance


def test_reference_optima_strings():
    problem = reference_problem("EOHL")
    layout = build_layout(problem)
    report = enumerate_solutions(problem, layout)
    assert report.optimal_bitstrings == frozenset({"10100101", "01101010"})


def test_infeasible_instance():
    problem = make_problem("EOHL", [2], [(1,)], (1,), (0,))
    layout = build_layout(problem)
    report = enumerate_solutions(problem, layout)
    assert report.infeasible_instance
    assert report.feasible_count == 0 and report.best_count == 0
    assert report.optimal_gain is None
    assert enumerate_assignments(problem, layout) == report


def test_structured_enumeration_agrees_with_full_scan():
    rng = np.random.default_rng(41)
    for _ in range(30):
        problem = random_problem(rng)
        layout = build_layout(problem)
        assert enumerate_assignments(problem, layout) == enumerate_solutions(problem, layout)


def test_feasible_mask_matches_check_feasible():
    rng = np.random.default_rng(53)
    for _ in range(8):
        problem = random_problem(rng, max_qubits=9)
        layout = build_layout(problem)
        mask = feasible_mask(problem, layout)
        for index in range(1 << layout.qubit_count):
            bits = format(index, f"0{layout.qubit_count}b")
            assert mask[index] == check_feasible(problem, layout, bits).feasible


def test_optimum_matches_energy_argmin():
    rng = np.random.default_rng(67)
    for _ in range(10):
        problem = random_problem(rng)
        layout = build_layout(problem)
        report = enumerate_solutions(problem, layout)
        if report.infeasible_instance:
            continue
        energies = diagonal_energies(encode(problem, layout))
        optima = {int(bits, 2) for bits in report.optimal_bitstrings}
        assert set(np.nonzero(energies == energies.min())[0].tolist()) == optima
        assert abs(energies.min() + float(report.optimal_gain)) < 1e-9


def test_qubit_cap():
    problem = reference_problem("ECFL")
    layout = build_layout(problem)
    with pytest.raises(QubitCountExceededError):
        enumerate_solutions(problem, layout, max_qubits=10)


def test_dense_single_gates_match_simulator():
    rng = np.random.default_rng(2)
    for gate in (
        Gate("x", (1,)),
        Gate("h", (0,)),
        Gate("ry", (2,), 1.1),
        Gate("rz", (1,), 0.4),
        Gate("cx", (0, 2)),
        Gate("cry", (2, 0), 2.2),
        Gate("rzz", (0, 1), 0.9),
        Gate("mcx", (0, 1, 2)),
        Gate("csub", (0, 1, 2), constant=1),
    ):
        prep = tuple(Gate("ry", (q,), float(rng.uniform(0, pi))) for q in range(3))
        circuit = Circuit(3, prep + (gate,), ())
        assert np.max(np.abs(dense_state(circuit) - run(circuit).amplitudes)) < 1e-12


def test_dense_qaoa_matches_simulator():
    from fractions import Fraction

    model = IsingModel(
        3,
        Fraction(0),
        (Fraction(1), Fraction(0), Fraction(2)),
        {(0, 1): Fraction(-4), (1, 2): Fraction(-2)},
        Fraction(1),
    )
    circuit = build_qaoa(model, 1)
    rng = np.random.default_rng(29)
    for _ in range(5):
        binding = {"g0": float(rng.uniform(0, 2 * pi)), "b0": float(rng.uniform(0, 2 * pi))}
        dense = dense_state(circuit, binding)
        fast = run(circuit, binding).amplitudes
        assert np.max(np.abs(dense - fast)) < 1e-9


def test_dense_a1_block_closed_form():
    theta1, theta2 = 1.3, 0.8
    circuit = Circuit(
        3,
        (
            Gate("x", (0,)),
            Gate("cry", (0, 1), theta1),
            Gate("cry", (1, 2), theta2),
            Gate("cx", (1, 0)),
            Gate("cx", (2, 1)),
        ),
        (),
    )
    amps = dense_state(circuit)
    assert abs(amps[bits_to_index("100")] - np.cos(theta1 / 2)) < 1e-12
    assert abs(amps[bits_to_index("010")] - np.sin(theta1 / 2) * np.cos(theta2 / 2)) < 1e-12
    assert abs(amps[bits_to_index("001")] - np.sin(theta1 / 2) * np.sin(theta2 / 2)) < 1e-12


def test_dense_qubit_cap():
    with pytest.raises(QubitCountExceededError):
        dense_state(Circuit(7, (), ()))
