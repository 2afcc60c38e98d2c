"""Comparison algorithms: single-path sequential routers and kSPA.

``mda``, ``wsp`` and ``swp`` route the demands one at a time in input
order, each with one exact hop- and delay-bounded search on the edges
that still have room for the demand:

* ``min_delay``: smallest total delay among paths of at most ``hop_limit``
  hops, rejected if above ``delay_limit``;
* ``widest_shortest``: among feasible paths of minimum hop count, the
  largest bottleneck residual;
* ``shortest_widest``: among feasible paths of largest bottleneck residual,
  the minimum hop count.

Remaining ties go to the lexicographically smallest node sequence.

The searches work on layered ``(node, hops)`` tables restricted to edges
``u -> v`` that satisfy ``dist(src, u) + 1 + dist(v, dst) <= hop_limit``,
which no path within the hop limit can avoid.

kSPA is the main heuristic with Phase 1 swapped for loopless k-shortest
paths under a delay or hop weight, filtered by the delay and hop limits.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .model import Demand, Network, Path, ResidualState, Solution
from .ordering import SortRule
from .paths import CandidateSet
from .solver import BfsCandidates, IterationTrace, SolverConfig, commit_path, solve, validate_instance

INF = float("inf")


class Objective(str, Enum):
    MIN_DELAY = "min_delay"
    WIDEST_SHORTEST = "widest_shortest"
    SHORTEST_WIDEST = "shortest_widest"


class BaselineStrategy(str, Enum):
    MDA = "mda"
    WSP = "wsp"
    SWP = "swp"

    @property
    def objective(self) -> Objective:
        return {
            BaselineStrategy.MDA: Objective.MIN_DELAY,
            BaselineStrategy.WSP: Objective.WIDEST_SHORTEST,
            BaselineStrategy.SWP: Objective.SHORTEST_WIDEST,
        }[self]


def _bounded_bfs(adj, root: int, limit: int, vals, band: int) -> dict[int, int]:
    dist = {root: 0}
    frontier = [root]
    for level in range(1, limit + 1):
        nxt = []
        for u in frontier:
            for eid, v, _ in adj[u]:
                if v not in dist and vals[eid] >= band:
                    dist[v] = level
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return dist


@dataclass
class _Layered:
    """Edges usable by some path of at most ``hops`` hops from src to dst."""

    src: int
    dst: int
    hops: int
    # (tail, head, edge_id, delay, residual)
    edges: list[tuple[int, int, int, int, int]]
    # tail -> its usable out-edges sorted by head node
    out: dict[int, list[tuple[int, int, int, int]]]

    def table(self, threshold: int) -> list[dict[int, int]]:
        """``t[h][v]``: least delay from v to dst in at most h hops."""
        dst = self.dst
        usable = [(u, v, d) for u, v, _, d, r in self.edges if r >= threshold]
        tables = [{dst: 0}]
        for _ in range(self.hops):
            prev = tables[-1]
            cur = dict(prev)
            for u, v, d in usable:
                dv = prev.get(v)
                if dv is not None and u != dst:
                    c = dv + d
                    if c < cur.get(u, INF):
                        cur[u] = c
            tables.append(cur)
        return tables

    def trace(self, tables, threshold: int, hops: int, budget: int, exact: bool,
              network: Network) -> Path:
        """Lexicographically smallest node sequence through the tables.

        With ``exact`` every step must stay on an optimal continuation,
        otherwise any continuation that still fits ``budget`` is accepted.
        """
        u, left, nodes, edges = self.src, budget, [self.src], []
        while u != self.dst:
            for v, eid, d, r in self.out[u]:
                if r < threshold:
                    continue
                rest = tables[hops - 1].get(v)
                if rest is None:
                    continue
                if (d + rest == left) if exact else (d + rest <= left):
                    break
            else:  # pragma: no cover - tables guarantee a continuation
                raise AssertionError("no continuation found")
            nodes.append(v)
            edges.append(eid)
            left -= d
            hops -= 1
            u = v
        delay = network.delay
        return Path(tuple(edges), tuple(nodes), len(edges), sum(delay[e] for e in edges))


def _layered(network: Network, vals, demand: Demand) -> _Layered | None:
    s, t, H, band = demand.src, demand.dst, demand.hop_limit, demand.band
    ds = _bounded_bfs(network.out_adj, s, H, vals, band)
    if t not in ds:
        return None
    dt = _bounded_bfs(network.in_adj, t, H, vals, band)
    edges = []
    out: dict[int, list] = {}
    for u, du in ds.items():
        if u == t:
            continue
        for eid, v, d in network.out_adj[u]:
            dv = dt.get(v)
            if dv is None or v == s or du + 1 + dv > H:
                continue
            r = vals[eid]
            if r < band:
                continue
            edges.append((u, v, eid, d, r))
            out.setdefault(u, []).append((v, eid, d, r))
    for lst in out.values():
        lst.sort()
    return _Layered(s, t, H, edges, out)


def _min_hops(tables, src: int, limit: int) -> int | None:
    for h, tab in enumerate(tables):
        if tab.get(src, INF) <= limit:
            return h
    return None


def constrained_path(
    residual, network: Network, demand: Demand, objective: Objective | str
) -> Path | None:
    """Exact hop- and delay-bounded path under ``objective``, or ``None``."""
    objective = Objective(objective)
    vals = residual.values if isinstance(residual, ResidualState) else residual
    lay = _layered(network, vals, demand)
    if lay is None:
        return None
    band, D, s = demand.band, demand.delay_limit, demand.src
    base = lay.table(band)

    if objective is Objective.MIN_DELAY:
        best = base[-1].get(s)
        if best is None or best > D:
            return None
        return lay.trace(base, band, lay.hops, best, True, network)

    h_star = _min_hops(base, s, D)
    if h_star is None:
        return None
    levels = sorted({r for *_, r in lay.edges})

    def fits(threshold: int) -> bool:
        tab = lay.table(threshold)
        if objective is Objective.WIDEST_SHORTEST:
            return tab[h_star].get(s, INF) <= D
        return tab[-1].get(s, INF) <= D

    lo, hi = 0, len(levels) - 1  # levels[0] == band-feasible minimum, always fits
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if fits(levels[mid]):
            lo = mid
        else:
            hi = mid - 1
    width = levels[lo]
    tables = lay.table(width)
    hops = h_star if objective is Objective.WIDEST_SHORTEST else _min_hops(tables, s, D)
    return lay.trace(tables, width, hops, D, False, network)


def sequential_solve(
    network: Network, demands: Sequence[Demand], strategy: BaselineStrategy | str
) -> Solution:
    """Route demands once each, in input order, on the live residual graph."""
    strategy = BaselineStrategy(strategy)
    validate_instance(network, demands)
    residual = ResidualState.of(network)
    assignment: dict[int, Path] = {}
    for d in demands:
        path = constrained_path(residual, network, d, strategy.objective)
        if path is not None:
            commit_path(residual, d, path)
            assignment[d.demand_id] = path
    return Solution.from_assignment(demands, assignment)


# -- k shortest loopless paths ------------------------------------------------

def _distances_to(network: Network, dst: int, weight: str) -> dict[int, int]:
    dist = {dst: 0}
    if weight == "hop":
        frontier = [dst]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for v in frontier:
                for _, u, _ in network.in_adj[v]:
                    if u not in dist:
                        dist[u] = level
                        nxt.append(u)
            frontier = nxt
        return dist
    heap = [(0, dst)]
    done = set()
    while heap:
        dv, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for _, u, d in network.in_adj[v]:
            nd = dv + d
            if nd < dist.get(u, INF):
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def _lex_shortest(topology: Network, src: int, dst: int, by_hop: bool,
                  blocked_nodes: set[int], blocked_edges: set[int]) -> tuple[int, list[int], list[int]] | None:
    """Cheapest, then lexicographically smallest, src-dst path avoiding the blocks."""
    dist = {dst: 0}
    heap = [(0, dst)]
    done = set()
    while heap:
        dv, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for eid, u, d in topology.in_adj[v]:
            if u in blocked_nodes or eid in blocked_edges:
                continue
            nd = dv + (1 if by_hop else d)
            if nd < dist.get(u, INF):
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    if src not in dist:
        return None
    nodes, edges, u = [src], [], src
    while u != dst:
        want = dist[u]
        step = min(
            (v, eid) for eid, v, d in topology.out_adj[u]
            if eid not in blocked_edges and v not in blocked_nodes
            and dist.get(v, INF) + (1 if by_hop else d) == want
        )
        u = step[0]
        nodes.append(u)
        edges.append(step[1])
    return dist[src], nodes, edges


def _yen(topology: Network, src: int, dst: int, k: int, by_hop: bool) -> list[tuple]:
    first = _lex_shortest(topology, src, dst, by_hop, set(), set())
    if first is None:
        return []
    accepted = [(first[0], tuple(first[1]), tuple(first[2]))]
    seen = {accepted[0][1]}
    pending: list[tuple] = []
    while len(accepted) < k:
        _, nodes, edges = accepted[-1]
        root_cost = 0
        for j in range(len(nodes) - 1):
            root = nodes[:j + 1]
            blocked_edges = {p[2][j] for p in accepted if len(p[1]) > j + 1 and p[1][:j + 1] == root}
            spur = _lex_shortest(topology, nodes[j], dst, by_hop, set(root[:-1]), blocked_edges)
            if spur is not None:
                cand = root[:-1] + tuple(spur[1])
                if cand not in seen:
                    seen.add(cand)
                    heapq.heappush(pending, (root_cost + spur[0], cand, edges[:j] + tuple(spur[2])))
            root_cost += 1 if by_hop else topology.delay[edges[j]]
        if not pending:
            break
        accepted.append(heapq.heappop(pending))
    return accepted


def k_shortest_paths(
    topology: Network, src: int, dst: int, k: int, weight: str = "delay",
    pop_budget: int | None = None,
) -> list[Path]:
    """Up to ``k`` loopless src-dst paths by non-decreasing total weight.

    ``weight`` is ``"delay"`` or ``"hop"``; equal weights are ordered by node
    sequence.  A best-first search over simple partial paths, guided by the
    exact distance to dst, pops complete paths in exactly this order.  It
    can stall on pairs with few simple paths (dead-end prefixes are then
    exhausted), so after ``pop_budget`` pops it hands over to Yen's
    algorithm, which yields the same list.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if weight not in ("delay", "hop"):
        raise ValueError(f"unknown weight {weight!r}")
    if src == dst:
        return []
    by_hop = weight == "hop"
    h = _distances_to(topology, dst, weight)
    if src not in h:
        return []
    if pop_budget is None:
        pop_budget = 50 * k + 1000
    delay = topology.delay
    out_adj = topology.out_adj
    # (bound, node sequence, cost so far, edge sequence)
    heap = [(h[src], (src,), 0, ())]
    found: list[tuple] = []
    pops = 0
    while heap and len(found) < k:
        pops += 1
        if pops > pop_budget:
            found = _yen(topology, src, dst, k, by_hop)
            break
        f, nodes, g, edges = heapq.heappop(heap)
        u = nodes[-1]
        if u == dst:
            found.append((f, nodes, edges))
            continue
        for eid, v, d in out_adj[u]:
            hv = h.get(v)
            if hv is None or v in nodes:
                continue
            gv = g + (1 if by_hop else d)
            heapq.heappush(heap, (gv + hv, nodes + (v,), gv, edges + (eid,)))
    return [
        Path(edges, nodes, len(edges), sum(delay[e] for e in edges)) for _, nodes, edges in found
    ]


def _ksp_candidates(network: Network, demand: Demand, snapshot, k: int, weight: str) -> CandidateSet:
    paths = k_shortest_paths(network, demand.src, demand.dst, k, weight)
    keep = tuple(
        p for p in paths if p.hop <= demand.hop_limit and p.delay <= demand.delay_limit
    )
    return CandidateSet(demand.demand_id, keep)


class KspCandidates(BfsCandidates):
    """Phase 1 provider backed by :func:`k_shortest_paths`."""

    fn = staticmethod(_ksp_candidates)

    def __init__(self, network: Network, k: int = 128, weight: str = "delay", workers: int = 1):
        super().__init__(network, k, False, workers)
        self.weight = weight

    @property
    def fn_args(self) -> tuple:
        return (self.k_paths, self.weight)


@dataclass(frozen=True)
class KspaConfig:
    k: int = 128
    weight: str = "delay"
    rule: SortRule | str = SortRule.RULE1
    workers: int = 1


def kspa_solve(
    network: Network, demands: Sequence[Demand], config: KspaConfig | None = None
) -> tuple[Solution, IterationTrace]:
    """Main heuristic with k-shortest-path candidates (Phase 2 and 3 unchanged)."""
    config = config or KspaConfig()
    # k_paths is not read when a provider is supplied
    solver_cfg = SolverConfig(rule=config.rule, workers=config.workers)
    with KspCandidates(network, config.k, config.weight, config.workers) as provider:
        return solve(network, demands, solver_cfg, provider=provider)
