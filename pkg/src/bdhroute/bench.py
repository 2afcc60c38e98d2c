"""Trial batches and summary statistics.

An algorithm is named by a spec string ``name[:key=value,...]``:

=============  ==========================================================
main           the three-phase heuristic (keys: rule, selection, k, seed,
               prune)
kspa-delay     main heuristic with k-shortest candidates by delay (keys:
kspa-hop       k, rule)
mda, wsp, swp  sequential single-path baselines
=============  ==========================================================

e.g. ``main:rule=none`` or ``kspa-delay:k=32``.

Statistics use the population standard deviation (divide by N).  The
report schema has the columns ``class, algorithm, metric, n, avg, sd,
max, min``; ``throughput_pct`` is relative to the band of *all* demands.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field, fields, replace

from .baselines import KspaConfig, kspa_solve, sequential_solve
from .generator import GeneratorConfig, generate_instance
from .model import Demand, Network, Solution, verify_solution
from .solver import SolverConfig, solve

ALGORITHMS = ("main", "kspa-delay", "kspa-hop", "mda", "wsp", "swp")
METRICS = ("throughput_pct", "total_s", "phase1_s", "iterations")
REPORT_COLUMNS = ("class", "algorithm", "metric", "n", "avg", "sd", "max", "min")


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    options: tuple[tuple[str, str], ...] = ()

    @classmethod
    def parse(cls, text: str) -> AlgorithmSpec:
        name, _, rest = text.strip().partition(":")
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
        opts = []
        for item in filter(None, rest.split(",")):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad option {item!r} in {text!r}")
            opts.append((key.strip(), value.strip()))
        return cls(name, tuple(opts))

    def __str__(self) -> str:
        if not self.options:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.options)


@dataclass
class RunResult:
    solution: Solution
    phase1_s: float | None
    total_s: float
    iterations: int | None


def run_algorithm(
    spec: AlgorithmSpec | str, network: Network, demands: Sequence[Demand],
    base: SolverConfig | None = None,
) -> RunResult:
    """Run one named algorithm; ``base`` supplies defaults for main/kSPA."""
    if isinstance(spec, str):
        spec = AlgorithmSpec.parse(spec)
    base = base or SolverConfig()
    opts = dict(spec.options)
    t0 = time.perf_counter()
    if spec.name in ("mda", "wsp", "swp"):
        if opts:
            raise ValueError(f"{spec.name} takes no options")
        sol = sequential_solve(network, demands, spec.name)
        dt = time.perf_counter() - t0
        return RunResult(sol, None, dt, None)

    if spec.name == "main":
        known = {"rule", "selection", "k", "seed", "prune"}
        if set(opts) - known:
            raise ValueError(f"unknown main options {sorted(set(opts) - known)}")
        cfg = replace(
            base,
            rule=opts.get("rule", base.rule),
            selection=opts.get("selection", base.selection),
            k_paths=int(opts.get("k", base.k_paths)),
            seed=int(opts.get("seed", base.seed)),
            prune_residual=opts.get("prune", str(base.prune_residual)).lower() in ("1", "true", "yes"),
        )
        sol, trace = solve(network, demands, cfg)
    else:
        known = {"k", "rule"}
        if set(opts) - known:
            raise ValueError(f"unknown kspa options {sorted(set(opts) - known)}")
        rule = opts.get("rule", "rule1")
        kcfg = KspaConfig(int(opts.get("k", base.k_paths)), spec.name.split("-")[1], rule,
                          base.workers)
        sol, trace = kspa_solve(network, demands, kcfg)
    dt = time.perf_counter() - t0
    phase1 = trace.combined_phase1_s if trace.combined_phase1_s is not None else trace.phase1_s
    return RunResult(sol, phase1, dt, len(trace.iterations))


@dataclass
class TrialResult:
    instance_class: str
    seed: int
    algorithm: str
    status: str
    throughput: int
    total_band: int
    throughput_pct: float
    total_s: float
    phase1_s: float | None = None
    iterations: int | None = None
    message: str = ""


@dataclass
class StatsRow:
    instance_class: str
    algorithm: str
    metric: str
    n: int
    avg: float
    sd: float
    max: float
    min: float


@dataclass
class StatsTable:
    rows: list[StatsRow] = field(default_factory=list)

    def get(self, algorithm: str, metric: str = "throughput_pct",
            instance_class: str | None = None) -> StatsRow:
        for r in self.rows:
            if r.algorithm == algorithm and r.metric == metric and (
                instance_class is None or r.instance_class == instance_class
            ):
                return r
        raise KeyError((algorithm, metric, instance_class))


def summarize(values: Sequence[float]) -> tuple[float, float, float, float]:
    """(avg, population sd, max, min)."""
    n = len(values)
    avg = math.fsum(values) / n
    sd = math.sqrt(math.fsum((v - avg) ** 2 for v in values) / n)
    return avg, sd, max(values), min(values)


def aggregate(records: Sequence[TrialResult]) -> StatsTable:
    """Group finished trials by (class, algorithm) and summarize each metric."""
    groups: dict[tuple[str, str], list[TrialResult]] = {}
    for r in records:
        if r.status == "ok":
            groups.setdefault((r.instance_class, r.algorithm), []).append(r)
    table = StatsTable()
    for (cls, alg), recs in groups.items():
        for metric in METRICS:
            vals = [getattr(r, metric) for r in recs]
            vals = [float(v) for v in vals if v is not None]
            if not vals:
                continue
            table.rows.append(StatsRow(cls, alg, metric, len(vals), *summarize(vals)))
    return table


def run_trials(
    gen: GeneratorConfig,
    trials: int,
    algorithms: Sequence[AlgorithmSpec | str],
    solver: SolverConfig | None = None,
    on_record: Callable[[TrialResult], None] | None = None,
) -> tuple[StatsTable, list[TrialResult]]:
    """Generate ``trials`` instances (seeds ``gen.seed + i``) and run every algorithm.

    A solution that fails verification is recorded with status ``FAILED``
    and kept out of the statistics.
    """
    if trials < 1:
        raise ValueError("trial count must be >= 1")
    specs = [AlgorithmSpec.parse(a) if isinstance(a, str) else a for a in algorithms]
    records: list[TrialResult] = []
    for i in range(trials):
        cfg = gen.with_seed(gen.seed + i)
        inst = generate_instance(cfg)
        total_band = inst.total_band
        for spec in specs:
            res = run_algorithm(spec, inst.network, inst.demands, solver)
            report = verify_solution(inst.network, inst.demands, res.solution)
            tp = res.solution.throughput
            rec = TrialResult(
                cfg.label, cfg.seed, str(spec), "ok" if report.valid else "FAILED",
                tp, total_band, 100.0 * tp / total_band, res.total_s, res.phase1_s,
                res.iterations, "" if report.valid else report.summary(),
            )
            records.append(rec)
            if on_record is not None:
                on_record(rec)
    return aggregate(records), records


# -- serialization -------------------------------------------------------------

TRIAL_COLUMNS = tuple(f.name for f in fields(TrialResult))


def _row_values(r: StatsRow) -> list:
    return [r.instance_class, r.algorithm, r.metric, r.n, r.avg, r.sd, r.max, r.min]


def emit_report(stats: StatsTable, fmt: str = "text") -> str:
    """Serialize a table as ``csv``, ``json`` or a human ``text`` table."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in stats.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in _row_values(r)])
        return buf.getvalue()
    if fmt == "json":
        rows = [dict(zip(REPORT_COLUMNS, _row_values(r))) for r in stats.rows]
        return json.dumps({"sd": "population", "columns": list(REPORT_COLUMNS), "rows": rows},
                          indent=2) + "\n"
    if fmt == "text":
        head = f"{'class':<22} {'algorithm':<28} {'metric':<15} {'n':>4} {'avg':>10} {'s.d.':>10} {'max':>10} {'min':>10}"
        lines = [head, "-" * len(head)]
        for r in stats.rows:
            lines.append(
                f"{r.instance_class:<22} {r.algorithm:<28} {r.metric:<15} {r.n:>4} "
                f"{r.avg:>10.3f} {r.sd:>10.3f} {r.max:>10.3f} {r.min:>10.3f}"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_report_csv(text: str) -> StatsTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != REPORT_COLUMNS:
        raise ValueError(f"unexpected columns {header}")
    table = StatsTable()
    for row in reader:
        cls, alg, metric, n, *nums = row
        table.rows.append(StatsRow(cls, alg, metric, int(n), *map(float, nums)))
    return table


def format_trials_csv(records: Sequence[TrialResult]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, TRIAL_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = asdict(r)
        w.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v)
                    for k, v in row.items()})
    return buf.getvalue()


def parse_trials_csv(text: str) -> list[TrialResult]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(TrialResult(
            row["instance_class"], int(row["seed"]), row["algorithm"], row["status"],
            int(row["throughput"]), int(row["total_band"]), float(row["throughput_pct"]),
            float(row["total_s"]),
            float(row["phase1_s"]) if row["phase1_s"] else None,
            int(row["iterations"]) if row["iterations"] else None,
            row["message"],
        ))
    return out
