"""The iterative three-phase routing heuristic.

Each iteration:

1. computes candidate paths for every unsatisfied demand (in parallel,
   against a snapshot of the residual graph taken at the start of the
   iteration);
2. orders the unsatisfied demands by the configured rule;
3. walks them in that order, ranks each demand's candidates on the live
   residual graph and commits the first one, if any.

The loop ends once an iteration satisfies nobody.  With ``rule="all"``
the whole loop runs once per priority rule and the best solution wins.
"""

from __future__ import annotations

import logging
import os
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import multiprocessing

from .errors import InvalidInstance
from .model import Demand, Network, Path, ResidualState, Solution
from .ordering import ALL_RULES, SortRule, order_demands
from .paths import DEFAULT_K, MAX_K, CandidateSet, compute_candidates
from .selection import RankedCandidates, Selection, alt_select, select_and_rank

log = logging.getLogger(__name__)

ALL = "all"


@dataclass(frozen=True)
class SolverConfig:
    k_paths: int = DEFAULT_K
    rule: SortRule | str = ALL
    selection: Selection | str = Selection.WEIGHT
    workers: int = 1
    seed: int = 0
    max_iterations: int = 64
    # prune edges that cannot carry the demand from the Phase 1 searches
    prune_residual: bool = False
    # rank by exact rational weights instead of floats
    exact_weights: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.k_paths <= MAX_K:
            raise ValueError(f"k_paths must be in [1, {MAX_K}]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rule != ALL:
            object.__setattr__(self, "rule", SortRule(self.rule))
        object.__setattr__(self, "selection", Selection(self.selection))


@dataclass
class IterationRecord:
    iteration: int
    newly_satisfied: int
    throughput: int
    phase1_s: float
    phase2_s: float
    phase3_s: float


@dataclass
class IterationTrace:
    rule: SortRule
    iterations: list[IterationRecord] = field(default_factory=list)
    cap_hit: bool = False
    # rule=all: Phase 1 seconds summed over every rule's run; memoized
    # candidates make the later runs nearly free.
    combined_phase1_s: float | None = None

    @property
    def phase1_s(self) -> float:
        return sum(r.phase1_s for r in self.iterations)

    @property
    def phase2_s(self) -> float:
        return sum(r.phase2_s for r in self.iterations)

    @property
    def phase3_s(self) -> float:
        return sum(r.phase3_s for r in self.iterations)

    @property
    def total_s(self) -> float:
        return self.phase1_s + self.phase2_s + self.phase3_s


# -- Phase 1 providers -------------------------------------------------------

_worker_state: dict = {}


def _init_worker(network: Network, fn: Callable, fn_args: tuple) -> None:
    _worker_state.update(network=network, fn=fn, fn_args=fn_args)


def _run_chunk(args):
    demands, snapshot = args
    net, fn, fn_args = _worker_state["network"], _worker_state["fn"], _worker_state["fn_args"]
    return [fn(net, d, snapshot, *fn_args) for d in demands]


def _bfs_candidates(network: Network, demand: Demand, snapshot, k_paths: int) -> CandidateSet:
    return compute_candidates(network, demand, k_paths, snapshot)


class BfsCandidates:
    """Bidirectional-BFS candidate provider with an optional process pool.

    Without residual pruning a demand's candidates depend on the topology
    alone, so they are computed once and reused by later iterations and by
    every rule of an ``"all"`` run.  Results are always assembled in the
    order the demands were given, whatever the worker count.
    """

    def __init__(self, network: Network, k_paths: int = DEFAULT_K, prune_residual: bool = False,
                 workers: int = 1):
        self.network = network
        self.k_paths = k_paths
        self.prune_residual = prune_residual
        self.workers = workers
        self._memo: dict[tuple, CandidateSet] = {}
        self._snapshot: tuple[int, ...] | None = None
        self._generation = 0
        self._pool: ProcessPoolExecutor | None = None

    fn = staticmethod(_bfs_candidates)

    @property
    def fn_args(self) -> tuple:
        return (self.k_paths,)

    def _key(self, demand: Demand, snapshot_id) -> tuple:
        return (demand, snapshot_id)

    def __call__(self, demands: Sequence[Demand], residual: Sequence[int]) -> dict[int, CandidateSet]:
        if self.prune_residual:
            snapshot = tuple(residual)
            if snapshot != self._snapshot:
                self._snapshot = snapshot
                self._generation += 1
            snap_id = self._generation
        else:
            snapshot, snap_id = None, None
        todo = [d for d in demands if self._key(d, snap_id) not in self._memo]
        if todo:
            for d, cs in zip(todo, self._map(todo, snapshot)):
                self._memo[self._key(d, snap_id)] = cs
        return {d.demand_id: self._memo[self._key(d, snap_id)] for d in demands}

    def _map(self, demands: list[Demand], snapshot) -> list[CandidateSet]:
        if self.workers == 1 or len(demands) < 2 * self.workers:
            fn, args = self.fn, self.fn_args
            return [fn(self.network, d, snapshot, *args) for d in demands]
        if self._pool is None:
            ctx = multiprocessing.get_context("fork") if os.name == "posix" else None
            self._pool = ProcessPoolExecutor(
                self.workers, mp_context=ctx, initializer=_init_worker,
                initargs=(self.network, self.fn, self.fn_args),
            )
        n_chunks = self.workers * 4
        size = -(-len(demands) // n_chunks)
        chunks = [(demands[i:i + size], snapshot) for i in range(0, len(demands), size)]
        out: list[CandidateSet] = []
        for part in self._pool.map(_run_chunk, chunks):
            out.extend(part)
        return out

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# -- main loop ---------------------------------------------------------------

def commit_path(residual: ResidualState, demand: Demand, path: Path) -> ResidualState:
    """Subtract ``demand.band`` from every edge of ``path``; raises on overdraw."""
    residual.commit(path, demand.band)
    return residual


def validate_instance(network: Network, demands: Sequence[Demand]) -> None:
    ids = set()
    n = network.node_count
    for d in demands:
        if d.demand_id in ids:
            raise InvalidInstance(f"duplicate demand id {d.demand_id}")
        ids.add(d.demand_id)
        if not (0 <= d.src < n and 0 <= d.dst < n):
            raise InvalidInstance(f"demand {d.demand_id}: endpoint outside the network")


def _selector(config: SolverConfig) -> Callable[[ResidualState, Demand, CandidateSet, int], RankedCandidates]:
    sel = config.selection
    if sel is Selection.WEIGHT:
        exact = config.exact_weights
        return lambda res, d, cs, it: select_and_rank(res, d, cs, exact)
    if sel is Selection.RANDOM:
        seed = config.seed
        return lambda res, d, cs, it: alt_select(res, d, cs, sel, seed=f"{seed}:{it}:{d.demand_id}")
    return lambda res, d, cs, it: alt_select(res, d, cs, sel)


def _run(network, demands, config: SolverConfig, rule: SortRule, provider) -> tuple[Solution, IterationTrace]:
    residual = ResidualState.of(network)
    assignment: dict[int, Path] = {}
    unsatisfied = list(demands)
    trace = IterationTrace(rule)
    pick = _selector(config)
    throughput = 0
    progressed = True
    for it in range(1, config.max_iterations + 1):
        t0 = time.perf_counter()
        candidates = provider(unsatisfied, residual.values)
        t1 = time.perf_counter()
        ordered = order_demands(rule, unsatisfied)
        t2 = time.perf_counter()
        newly = 0
        for d in ordered:
            path = pick(residual, d, candidates[d.demand_id], it).first()
            if path is not None:
                commit_path(residual, d, path)
                assignment[d.demand_id] = path
                throughput += d.band
                newly += 1
        t3 = time.perf_counter()
        trace.iterations.append(IterationRecord(it, newly, throughput, t1 - t0, t2 - t1, t3 - t2))
        if newly:
            unsatisfied = [d for d in unsatisfied if d.demand_id not in assignment]
        progressed = newly > 0 and bool(unsatisfied)
        if not progressed:
            break
    if progressed:
        trace.cap_hit = True
        log.warning("iteration cap %d reached while still making progress", config.max_iterations)
    return Solution.from_assignment(demands, assignment), trace


def solve(
    network: Network,
    demands: Sequence[Demand],
    config: SolverConfig | None = None,
    *,
    provider: Callable | None = None,
) -> tuple[Solution, IterationTrace]:
    """Run the heuristic and return the solution with its iteration trace.

    ``provider`` replaces the Phase 1 candidate generator: it is called as
    ``provider(unsatisfied_demands, residual_values)`` and must return a
    ``{demand_id: CandidateSet}`` mapping.
    """
    config = config or SolverConfig()
    validate_instance(network, demands)
    own = provider is None
    if own:
        provider = BfsCandidates(network, config.k_paths, config.prune_residual, config.workers)
    try:
        if config.rule == ALL:
            best = None
            spent = 0.0
            for rule in ALL_RULES:
                result = _run(network, demands, config, rule, provider)
                spent += result[1].phase1_s
                if best is None or result[0].throughput > best[0].throughput:
                    best = result
            best[1].combined_phase1_s = spent
            return best
        return _run(network, demands, config, config.rule, provider)
    finally:
        if own:
            provider.close()
