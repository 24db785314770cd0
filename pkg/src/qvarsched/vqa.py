"""Hybrid optimization loop: bind, evaluate, minimize, sample.

The derivative-free minimizer is scipy's COBYLA (initial trust radius 1.0,
the configured tolerance as the final one), with Nelder-Mead as a selectable
fallback. Initial points are drawn uniformly from [0, pi) per seed and every
source of randomness — restart initial points, sampled-mode measurement
seeds, the final 4096-shot measurement — derives from the config seed, so
exact-mode runs are bit-reproducible.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace
from math import isfinite, pi

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .circuits import build_ansatz, build_qaoa
from .encoder import IsingModel, encode
from .errors import NonFiniteObjectiveError
from .problem import AssignmentProblem, build_layout
from .simulator import (
    DEFAULT_MAX_QUBITS,
    Circuit,
    Counts,
    bits_to_index,
    diagonal_energies,
    run,
    sample,
)

_SEED_RANGE = 2**31


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "cobyla"  # or "nelder-mead"
    max_iterations: int = 1000
    tolerance: float = 1e-4
    seed: int = 0
    restarts: int = 10
    initial_point: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.method.lower() not in ("cobyla", "nelder-mead"):
            raise ValueError(f"unknown optimizer method {self.method!r}")


@dataclass(frozen=True)
class MinimizeResult:
    parameters: tuple[float, ...]
    value: float
    trace: tuple[float, ...]


@dataclass(frozen=True)
class VqaResult:
    parameters: tuple[float, ...]
    value: float
    trace: tuple[float, ...]
    iterations: int
    counts: Counts
    wall_time: float


def minimize(objective, dim: int, config: OptimizerConfig) -> MinimizeResult:
    """Minimize a function of dim variables; returns the best evaluated point."""
    if config.initial_point is not None:
        x0 = np.asarray(config.initial_point, dtype=float)
        if x0.shape != (dim,):
            raise ValueError(f"initial point has shape {x0.shape}, expected ({dim},)")
    else:
        x0 = np.random.default_rng(config.seed).uniform(0.0, pi, dim)
    if dim == 0:
        value = float(objective(np.zeros(0)))
        return MinimizeResult((), value, (value,))

    trace: list[float] = []
    points: list[np.ndarray] = []

    def wrapped(x: np.ndarray) -> float:
        value = float(objective(np.asarray(x, dtype=float)))
        if not isfinite(value):
            raise NonFiniteObjectiveError(f"objective returned {value} at {x!r}")
        trace.append(value)
        points.append(np.array(x, dtype=float))
        return value

    if config.method.lower() == "cobyla":
        scipy_minimize(
            wrapped,
            x0,
            method="COBYLA",
            tol=config.tolerance,
            options={"maxiter": config.max_iterations, "rhobeg": 1.0},
        )
    else:
        scipy_minimize(
            wrapped,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": config.max_iterations,
                "maxfev": config.max_iterations,
                "xatol": config.tolerance,
                "fatol": config.tolerance,
            },
        )
    best = int(np.argmin(trace))
    return MinimizeResult(tuple(points[best]), trace[best], tuple(trace))


def _counts_energy(counts: Counts, energies: np.ndarray) -> float:
    total = sum(
        count * energies[bits_to_index(bits)] for bits, count in counts.counts.items()
    )
    return float(total) / counts.shots


def _optimize_circuit(
    circuit: Circuit,
    model: IsingModel,
    config: OptimizerConfig,
    mode: str,
    shots: int,
    max_qubits: int,
) -> VqaResult:
    if mode not in ("exact", "sampled"):
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    started = time.perf_counter()
    energies = diagonal_energies(model)
    dim = len(circuit.parameters)
    master = np.random.default_rng(config.seed)
    final_seed = int(master.integers(_SEED_RANGE))
    restart_seeds = [int(s) for s in master.integers(_SEED_RANGE, size=config.restarts)]

    best: MinimizeResult | None = None
    for restart_seed in restart_seeds:
        rng = np.random.default_rng(restart_seed)

        if mode == "exact":

            def objective(theta: np.ndarray) -> float:
                state = run(circuit, theta, max_qubits=max_qubits)
                return float(state.probabilities() @ energies)

        else:

            def objective(theta: np.ndarray) -> float:
                state = run(circuit, theta, max_qubits=max_qubits)
                counts = sample(state, shots, int(rng.integers(_SEED_RANGE)))
                return _counts_energy(counts, energies)

        result = minimize(objective, dim, replace(config, seed=restart_seed))
        if best is None or result.value < best.value:
            best = result

    final_state = run(circuit, best.parameters, max_qubits=max_qubits)
    counts = sample(final_state, shots, final_seed)
    return VqaResult(
        parameters=best.parameters,
        value=best.value,
        trace=best.trace,
        iterations=len(best.trace),
        counts=counts,
        wall_time=time.perf_counter() - started,
    )


def run_vqe(
    problem: AssignmentProblem,
    ansatz: str,
    config: OptimizerConfig,
    mode: str = "exact",
    shots: int = 4096,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> VqaResult:
    """Minimize the problem Hamiltonian over one of the a1..a4 ansatzes."""
    layout = build_layout(problem)
    model = encode(problem, layout)
    circuit = build_ansatz(ansatz, problem, layout)
    return _optimize_circuit(circuit, model, config, mode, shots, max_qubits)


def run_qaoa(
    problem: AssignmentProblem,
    reps: int,
    config: OptimizerConfig,
    mode: str = "exact",
    shots: int = 4096,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> VqaResult:
    """Minimize over the 2*reps QAOA angles."""
    layout = build_layout(problem)
    model = encode(problem, layout)
    circuit = build_qaoa(model, reps)
    return _optimize_circuit(circuit, model, config, mode, shots, max_qubits)
