"""Command-line entry point.

Commands:
  encode   print the Ising term list for a problem file
  oracle   print exact optima and feasibility counts
  solve    run an experiment spec, write results CSV and a summary
  sweep    run the synthetic scaling family and write its CSV

Exit codes: 0 success, 2 parse error, 3 capability exceeded, 4 runtime
failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .encoder import encode, format_fraction, model_to_text
from .errors import ParseError, QubitCountExceededError, QvarschedError
from .files import parse_experiment, parse_problem
from .oracle import enumerate_solutions
from .problem import ProblemVariant, build_layout
from .vqa import OptimizerConfig


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def _write_output(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_encode(args: argparse.Namespace) -> int:
    problem = parse_problem(_read(args.problem))
    layout = build_layout(problem)
    model = encode(problem, layout)
    _write_output(model_to_text(model), args.out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    problem = parse_problem(_read(args.problem))
    layout = build_layout(problem)
    report = enumerate_solutions(problem, layout, max_qubits=args.max_qubits)
    lines = [
        f"variant {problem.variant.name}",
        f"qubits {layout.qubit_count}",
        f"total {report.total}",
        f"feasible {report.feasible_count}",
        f"best {report.best_count}",
        f"infeasible_instance {'yes' if report.infeasible_instance else 'no'}",
    ]
    if report.optimal_gain is not None:
        lines.append(f"optimal_gain {format_fraction(report.optimal_gain)}")
        for bits in sorted(report.optimal_bitstrings):
            lines.append(f"optimum {bits}")
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def _summary_text(report: bench.ExperimentReport, spec_mode: str, shots: int) -> str:
    lines = [
        "qvarsched-v1 summary",
        f"instance {report.label}",
        f"algorithm {report.algorithm}",
        f"qubits {report.qubit_count}",
        f"mode {spec_mode}",
        f"shots {shots}",
        f"runs {len(report.runs)}",
        f"oracle_best {report.oracle.best_count}",
        f"oracle_feasible {report.oracle.feasible_count}",
    ]
    for field in ("p_best", "p_feas", "c_best", "c_feas", "iterations"):
        lines.append(
            f"mean_{field} {report.mean[field]:.6f} std {report.std[field]:.6f}"
        )
    lines.append(f"mean_wall_ms {report.mean['wall_time'] * 1e3:.3f}")
    best = max(report.runs, key=lambda r: r.metrics.p_best)
    lines.append(f"best_run_seed {best.seed}")
    lines.append(f"best_run_p_best {best.metrics.p_best:.6f}")
    lines.append(
        "best_run_parameters "
        + " ".join(f"{value:.10g}" for value in best.parameters)
    )
    return "\n".join(lines) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    spec_path = Path(args.spec)
    spec = parse_experiment(_read(args.spec), spec_path.parent)
    problem = parse_problem(_read(str(spec.problem_path)))
    optimizer = spec.optimizer
    config = bench.ExperimentConfig(
        problem=problem,
        algorithm=spec.algorithm,
        optimizer=optimizer,
        reps=spec.reps,
        mode=args.mode or spec.mode,
        shots=args.shots or spec.shots,
        runs=args.runs or spec.runs,
        seed=spec.seed if args.seed is None else args.seed,
        label=spec.problem_path.stem,
    )
    report = bench.run_experiment(config, max_qubits=args.max_qubits)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    csv_path = out.with_suffix(".csv")
    summary_path = out.with_suffix(".txt")
    csv_path.write_text(bench.report_csv(report))
    summary_path.write_text(_summary_text(report, config.mode, config.shots))
    print(f"wrote {csv_path} and {summary_path}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    variant = ProblemVariant.from_name(args.variant)
    optimizer = OptimizerConfig(
        max_iterations=args.max_iterations, restarts=args.restarts
    )
    points = bench.scaling_sweep(
        range(args.pmin, args.pmax + 1),
        variant=variant,
        algorithm=args.algorithm,
        optimizer=optimizer,
        mode=args.mode or "exact",
        shots=args.shots or 4096,
        runs=args.runs or 1,
        seed=args.seed or 0,
        max_qubits=args.max_qubits,
    )
    _write_output(bench.sweep_csv(points), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvarsched",
        description="Variational quantum solver for Edge/Cloud process assignment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    encode_p = sub.add_parser("encode", help="dump the Ising model of a problem file")
    encode_p.add_argument("problem")
    encode_p.add_argument("--out")
    encode_p.set_defaults(func=cmd_encode)

    oracle_p = sub.add_parser("oracle", help="exact optima and feasibility counts")
    oracle_p.add_argument("problem")
    oracle_p.add_argument("--out")
    oracle_p.add_argument("--max-qubits", type=int, default=24)
    oracle_p.set_defaults(func=cmd_oracle)

    solve_p = sub.add_parser("solve", help="run an experiment spec file")
    solve_p.add_argument("spec")
    solve_p.add_argument("--out", default="results")
    solve_p.add_argument("--seed", type=int)
    solve_p.add_argument("--runs", type=int)
    solve_p.add_argument("--shots", type=int)
    solve_p.add_argument("--mode", choices=("exact", "sampled"))
    solve_p.add_argument("--max-qubits", type=int, default=24)
    solve_p.set_defaults(func=cmd_solve)

    sweep_p = sub.add_parser("sweep", help="scaling sweep over the synthetic family")
    sweep_p.add_argument("--variant", default="ECHL", choices=("ECFL", "EOFL", "ECHL", "EOHL"))
    sweep_p.add_argument("--algorithm", default="a4")
    sweep_p.add_argument("--pmin", type=int, default=3)
    sweep_p.add_argument("--pmax", type=int, default=7)
    sweep_p.add_argument("--max-iterations", type=int, default=20)
    sweep_p.add_argument("--restarts", type=int, default=1)
    sweep_p.add_argument("--seed", type=int)
    sweep_p.add_argument("--runs", type=int)
    sweep_p.add_argument("--shots", type=int)
    sweep_p.add_argument("--mode", choices=("exact", "sampled"))
    sweep_p.add_argument("--max-qubits", type=int, default=24)
    sweep_p.add_argument("--out")
    sweep_p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QubitCountExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QvarschedError, OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
