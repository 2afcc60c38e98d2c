"""Command line: ``bdhroute generate|solve|verify|bench``.

Exit status is 0 on success, 1 when a solution fails verification and 2
on usage or input errors.  ``BDHROUTE_THREADS`` sets the default worker
count for ``solve`` and ``bench``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io as bio
from .bench import ALGORITHMS, AlgorithmSpec, emit_report, format_trials_csv, run_algorithm, run_trials
from .errors import RoutingError
from .generator import GeneratorConfig, generate_instance
from .model import verify_solution
from .solver import SolverConfig

THREADS_ENV = "BDHROUTE_THREADS"


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise SystemExit(f"{THREADS_ENV} must be an integer, got {raw!r}")


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", "-n", type=int, default=500)
    p.add_argument("--edges", "-m", type=int, default=2000)
    p.add_argument("--demands", "-k", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--side", type=float, default=100.0)
    p.add_argument("--radius", type=float, default=80.0)
    p.add_argument("--chosen-fraction", type=float, default=0.80)
    p.add_argument("--capacity-factor", type=float, default=1.25)


def _generator_config(args) -> GeneratorConfig:
    return GeneratorConfig(
        n=args.nodes, m=args.edges, k=args.demands, seed=args.seed, side=args.side,
        connect_radius=args.radius, chosen_fraction=args.chosen_fraction,
        capacity_factor=args.capacity_factor,
    )


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", default="all", choices=["rule1", "rule2", "rule3", "rule4", "none", "all"])
    p.add_argument("--k-paths", type=int, default=128)
    p.add_argument("--selection", default="weight", choices=["weight", "min-hop", "min-delay", "random"])
    p.add_argument("--threads", type=int, default=None)


def _solver_config(args) -> SolverConfig:
    threads = args.threads if args.threads is not None else _default_threads()
    return SolverConfig(
        k_paths=args.k_paths, rule=args.rule, selection=args.selection,
        workers=threads, seed=getattr(args, "solver_seed", 0) or 0,
    )


def cmd_generate(args) -> int:
    inst = generate_instance(_generator_config(args))
    bio.write_instance(args.out, inst.network, inst.demands)
    bio.write_text(bio.sidecar_path(args.out), bio.format_sidecar(inst.planted, inst.chosen))
    print(f"wrote {args.out} ({inst.network.node_count} nodes, {inst.network.edge_count} edges, "
          f"{len(inst.demands)} demands)")
    return 0


def cmd_solve(args) -> int:
    network, demands = bio.read_instance(args.instance)
    args.solver_seed = args.seed
    res = run_algorithm(AlgorithmSpec.parse(args.algorithm), network, demands, _solver_config(args))
    report = verify_solution(network, demands, res.solution)
    total = sum(d.band for d in demands)
    pct = 100.0 * res.solution.throughput / total if total else 0.0
    print(f"algorithm={args.algorithm} throughput={res.solution.throughput} ({pct:.2f}%) "
          f"satisfied={len(res.solution.assignment)}/{len(demands)} time={res.total_s:.2f}s")
    if args.solution_out:
        bio.write_solution(args.solution_out, res.solution)
    if not report.valid:
        print(f"verification FAILED: {report.summary()}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    network, demands = bio.read_instance(args.instance)
    solution = bio.read_solution(args.solution, network, demands)
    report = verify_solution(network, demands, solution)
    if report.valid:
        print(f"valid: throughput={solution.throughput} satisfied={len(solution.assignment)}")
        return 0
    print(f"INVALID: {report.summary()}")
    return 1


def cmd_bench(args) -> int:
    gen = _generator_config(args)
    args.solver_seed = 0
    specs = [AlgorithmSpec.parse(a) for a in args.algorithms.split(";") if a.strip()]

    def progress(rec):
        print(f"seed={rec.seed} {rec.algorithm}: {rec.throughput_pct:.2f}% "
              f"{rec.total_s:.2f}s {rec.status}", file=sys.stderr)

    stats, records = run_trials(gen, args.trials, specs, _solver_config(args), progress)
    report = emit_report(stats, args.format)
    if args.out:
        bio.write_text(args.out, report)
        bio.write_text(args.out + ".trials.csv", format_trials_csv(records))
    else:
        sys.stdout.write(report)
    failed = [r for r in records if r.status != "ok"]
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdhroute", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a planted instance and its sidecar")
    _add_generator_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", default="main",
                   help=f"one of {', '.join(ALGORITHMS)}, optionally with :key=value options")
    _solver_flags(p)
    p.add_argument("--seed", type=int, default=0, help="seed for random selection")
    p.add_argument("--solution-out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run seeded trial batches and summarize")
    _add_generator_flags(p)
    _solver_flags(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--algorithms", default="main;mda;wsp;swp",
                   help="';'-separated algorithm specs, e.g. 'main;main:rule=none;kspa-delay:k=32'")
    p.add_argument("--format", default="text", choices=["csv", "json", "text"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (RoutingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
