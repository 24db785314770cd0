"""Performance indices and experiment orchestration.

P_best / P_feas are the shot fractions landing on optimal / feasible
bitstrings; C_best / C_feas divide them by the random-guess probability
N_x / 2^Q, so a uniform sampler scores C = 1. Experiments run R independent
seeded repetitions of one algorithm on one instance and aggregate with mean
and sample standard deviation. Timing columns are wall-clock and are the
only non-reproducible output fields.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, replace
from statistics import mean, stdev

import numpy as np

from .circuits import build_ansatz, build_qaoa
from .encoder import encode
from .errors import InstanceMismatchError
from .oracle import OracleReport, enumerate_solutions
from .problem import (
    ECHL,
    AssignmentProblem,
    ProblemVariant,
    VariableLayout,
    build_layout,
    check_feasible,
    make_problem,
)
from .simulator import Counts, diagonal_energies, run
from .vqa import OptimizerConfig, run_qaoa, run_vqe

CSV_COLUMNS = (
    "instance",
    "algorithm",
    "seed",
    "p_best",
    "p_feas",
    "c_best",
    "c_feas",
    "iterations",
    "wall_ms",
)


@dataclass(frozen=True)
class Metrics:
    p_best: float
    p_feas: float
    c_best: float
    c_feas: float
    iterations: int = 0
    wall_time: float = 0.0


def score(
    counts: Counts,
    report: OracleReport,
    problem: AssignmentProblem,
    layout: VariableLayout,
) -> Metrics:
    """Score a measured distribution against the oracle ground truth."""
    q = layout.qubit_count
    if report.total != 1 << q:
        raise InstanceMismatchError(
            f"oracle report covers {report.total} strings, layout implies {1 << q}"
        )
    best_hits = 0
    feasible_hits = 0
    for bits, count in counts.counts.items():
        if len(bits) != q:
            raise InstanceMismatchError(
                f"counts contain {len(bits)}-bit strings, instance has {q} qubits"
            )
        if check_feasible(problem, layout, bits).feasible:
            feasible_hits += count
            if bits in report.optimal_bitstrings:
                best_hits += count
    p_best = best_hits / counts.shots
    p_feas = feasible_hits / counts.shots
    c_best = p_best * report.total / report.best_count if report.best_count else 0.0
    c_feas = p_feas * report.total / report.feasible_count if report.feasible_count else 0.0
    return Metrics(p_best, p_feas, c_best, c_feas)


@dataclass(frozen=True)
class ExperimentConfig:
    problem: AssignmentProblem
    algorithm: str  # "a1".."a4" or "qaoa"
    optimizer: OptimizerConfig
    reps: int = 1
    mode: str = "exact"
    shots: int = 4096
    runs: int = 1
    seed: int = 0
    label: str = ""

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")

    @property
    def algorithm_label(self) -> str:
        if self.algorithm == "qaoa":
            return f"qaoa-{self.reps}"
        return self.algorithm


@dataclass(frozen=True)
class RunRecord:
    seed: int
    metrics: Metrics
    parameters: tuple[float, ...]


@dataclass(frozen=True)
class ExperimentReport:
    label: str
    algorithm: str
    qubit_count: int
    oracle: OracleReport
    runs: tuple[RunRecord, ...]
    mean: dict[str, float]
    std: dict[str, float]


_AGGREGATE_FIELDS = ("p_best", "p_feas", "c_best", "c_feas", "iterations", "wall_time")


def _aggregate(records: tuple[RunRecord, ...]) -> tuple[dict[str, float], dict[str, float]]:
    means, stds = {}, {}
    for field in _AGGREGATE_FIELDS:
        values = [float(getattr(r.metrics, field)) for r in records]
        means[field] = mean(values)
        stds[field] = stdev(values) if len(values) > 1 else 0.0
    return means, stds


def run_experiment(config: ExperimentConfig, max_qubits: int = 24) -> ExperimentReport:
    """Execute R seeded runs, score each at the configured shot count."""
    problem = config.problem
    layout = build_layout(problem)
    report = enumerate_solutions(problem, layout, max_qubits=max_qubits)
    run_seeds = np.random.default_rng(config.seed).integers(2**31, size=config.runs)
    records: list[RunRecord] = []
    for raw_seed in run_seeds:
        seed = int(raw_seed)
        optimizer = replace(config.optimizer, seed=seed)
        if config.algorithm == "qaoa":
            result = run_qaoa(
                problem, config.reps, optimizer, config.mode, config.shots, max_qubits
            )
        else:
            result = run_vqe(
                problem, config.algorithm, optimizer, config.mode, config.shots, max_qubits
            )
        metrics = score(result.counts, report, problem, layout)
        metrics = replace(
            metrics, iterations=result.iterations, wall_time=result.wall_time
        )
        records.append(RunRecord(seed, metrics, result.parameters))
    means, stds = _aggregate(tuple(records))
    return ExperimentReport(
        label=config.label or problem.variant.name.lower(),
        algorithm=config.algorithm_label,
        qubit_count=layout.qubit_count,
        oracle=report,
        runs=tuple(records),
        mean=means,
        std=stds,
    )


def report_csv(reports: list[ExperimentReport] | ExperimentReport) -> str:
    """One CSV row per run; columns are fixed (see CSV_COLUMNS)."""
    if isinstance(reports, ExperimentReport):
        reports = [reports]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        for record in report.runs:
            m = record.metrics
            writer.writerow(
                [
                    report.label,
                    report.algorithm,
                    record.seed,
                    f"{m.p_best:.6f}",
                    f"{m.p_feas:.6f}",
                    f"{m.c_best:.6f}",
                    f"{m.c_feas:.6f}",
                    m.iterations,
                    f"{m.wall_time * 1e3:.3f}",
                ]
            )
    return buffer.getvalue()


_WEIGHT_CYCLE = (2, 1, 1)
_VALUE_CYCLE = ((2, 1), (3, 1), (2, 1))


def scaling_instance(processes: int, variant: ProblemVariant = ECHL) -> AssignmentProblem:
    """Synthetic two-node family extending the 3-process reference instance.

    Weights cycle (2, 1, 1) and per-node value pairs cycle
    ((2, 1), (3, 1), (2, 1)); capacities are (3, 2) with thresholds (2, 1)
    under high load.
    """
    weights = [_WEIGHT_CYCLE[i % 3] for i in range(processes)]
    values = [_VALUE_CYCLE[i % 3] for i in range(processes)]
    thresholds = (2, 1) if variant.high_load else (0, 0)
    return make_problem(variant, weights, values, (3, 2), thresholds)


@dataclass(frozen=True)
class SweepPoint:
    processes: int
    qubit_count: int
    sim_seconds: float
    report: ExperimentReport


def _time_statevector(problem: AssignmentProblem, algorithm: str, max_qubits: int) -> float:
    """Best-of-3 wall time of one circuit execution plus one expectation."""
    layout = build_layout(problem)
    model = encode(problem, layout)
    if algorithm == "qaoa":
        circuit = build_qaoa(model, 1)
    else:
        circuit = build_ansatz(algorithm, problem, layout)
    theta = np.full(len(circuit.parameters), 1.0)
    energies = diagonal_energies(model)
    best = float("inf")
    for _ in range(3):
        started = time.perf_counter()
        state = run(circuit, theta, max_qubits=max_qubits)
        float(state.probabilities() @ energies)
        best = min(best, time.perf_counter() - started)
    return best


def scaling_sweep(
    process_counts,
    *,
    variant: ProblemVariant = ECHL,
    algorithm: str = "a4",
    optimizer: OptimizerConfig | None = None,
    mode: str = "exact",
    shots: int = 4096,
    runs: int = 1,
    seed: int = 0,
    max_qubits: int = 24,
) -> list[SweepPoint]:
    """One experiment per process count over the synthetic family."""
    optimizer = optimizer or OptimizerConfig(max_iterations=20, restarts=1)
    points: list[SweepPoint] = []
    for processes in process_counts:
        problem = scaling_instance(processes, variant)
        config = ExperimentConfig(
            problem=problem,
            algorithm=algorithm,
            optimizer=optimizer,
            mode=mode,
            shots=shots,
            runs=runs,
            seed=seed,
            label=f"{variant.name.lower()}-p{processes}",
        )
        report = run_experiment(config, max_qubits=max_qubits)
        sim_seconds = _time_statevector(problem, algorithm, max_qubits)
        points.append(SweepPoint(processes, report.qubit_count, sim_seconds, report))
    return points


def sweep_csv(points: list[SweepPoint]) -> str:
    """CSV for scaling plots: one row per process count."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ("processes", "qubits", "sim_seconds", "mean_p_best", "mean_p_feas",
         "mean_c_best", "mean_c_feas", "mean_iterations", "mean_wall_ms")
    )
    for point in points:
        writer.writerow(
            [
                point.processes,
                point.qubit_count,
                f"{point.sim_seconds:.6f}",
                f"{point.report.mean['p_best']:.6f}",
                f"{point.report.mean['p_feas']:.6f}",
                f"{point.report.mean['c_best']:.6f}",
                f"{point.report.mean['c_feas']:.6f}",
                f"{point.report.mean['iterations']:.1f}",
                f"{point.report.mean['wall_time'] * 1e3:.3f}",
            ]
        )
    return buffer.getvalue()
