"""Synthetic planted instances on random geometric digraphs.

Construction, for ``GeneratorConfig(n, m, k)``:

1. place ``n`` points uniformly in a ``side x side`` square;
2. sample ordered node pairs uniformly and add a directed edge whenever the
   pair is closer than ``connect_radius`` and not yet connected, until there
   are ``m`` edges; each edge gets an integer delay drawn from ``delay_range``;
3. sample ``k`` demands as uniform reachable pairs with an integer band from
   ``band_range``, plant one path per demand and copy its delay and hop count
   into the demand's limits;
4. pick ``floor(k * chosen_fraction)`` demands and give every edge the
   capacity ``ceil(capacity_factor * load)``, where ``load`` is the band of
   the picked demands whose planted path crosses the edge.

Routing exactly the picked demands on their planted paths is therefore
always feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GenerationFailure
from .model import Demand, Edge, Network, Path, Solution


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    m: int
    k: int
    seed: int = 0
    side: float = 100.0
    connect_radius: float = 80.0
    delay_range: tuple[int, int] = (50, 100)
    band_range: tuple[int, int] = (1000, 5000)
    chosen_fraction: float = 0.80
    capacity_factor: float = 1.25
    # sampling budget, as a multiple of the number of items to draw
    attempt_factor: int = 200

    def __post_init__(self) -> None:
        if self.n < 2 or self.m < 1 or self.k < 1:
            raise ValueError("need n >= 2, m >= 1, k >= 1")
        if not 0 < self.chosen_fraction <= 1:
            raise ValueError("chosen_fraction must lie in (0, 1]")
        if self.capacity_factor < 1:
            raise ValueError("capacity_factor must be >= 1")
        if self.delay_range[0] <= 0 or self.delay_range[0] > self.delay_range[1]:
            raise ValueError("bad delay_range")
        if self.band_range[0] <= 0 or self.band_range[0] > self.band_range[1]:
            raise ValueError("bad band_range")

    @property
    def label(self) -> str:
        return f"n{self.n}-m{self.m}-k{self.k}"

    def with_seed(self, seed: int) -> GeneratorConfig:
        return GeneratorConfig(
            self.n, self.m, self.k, seed, self.side, self.connect_radius,
            self.delay_range, self.band_range, self.chosen_fraction,
            self.capacity_factor, self.attempt_factor,
        )


INSTANCES_A = GeneratorConfig(n=500, m=2000, k=10000)
INSTANCES_B = GeneratorConfig(n=10000, m=40000, k=10000)


@dataclass
class PlantedInstance:
    network: Network
    demands: list[Demand]
    chosen: frozenset[int]
    planted: dict[int, Path]
    points: np.ndarray | None = field(default=None, repr=False)

    def planted_solution(self) -> Solution:
        """The chosen demands routed on their planted paths."""
        return Solution.from_assignment(
            self.demands, {d: self.planted[d] for d in sorted(self.chosen)}
        )

    @property
    def total_band(self) -> int:
        return sum(d.band for d in self.demands)


def plant_path(network: Network, src: int, dst: int, rng: np.random.Generator) -> Path | None:
    """Random BFS shortest path from ``src`` to ``dst``, or ``None`` if unreachable.

    The search stops at the layer where ``dst`` is discovered; the path is
    then traced back from ``dst`` choosing a uniformly random predecessor
    one layer closer to ``src`` at every step.
    """
    if src == dst:
        return None
    out_adj, in_adj = network.out_adj, network.in_adj
    dist = {src: 0}
    frontier = [src]
    level = 0
    found = False
    while frontier and not found:
        level += 1
        nxt = []
        for u in frontier:
            for _, v, _ in out_adj[u]:
                if v not in dist:
                    dist[v] = level
                    if v == dst:
                        found = True
                        break
                    nxt.append(v)
            if found:
                break
        frontier = nxt
    if not found:
        return None

    edges = []
    nodes = [dst]
    v = dst
    while v != src:
        want = dist[v] - 1
        preds = [(eid, u) for eid, u, _ in in_adj[v] if dist.get(u, -1) == want]
        eid, v = preds[int(rng.integers(len(preds)))] if len(preds) > 1 else preds[0]
        edges.append(eid)
        nodes.append(v)
    edges.reverse()
    nodes.reverse()
    delay = network.delay
    return Path(tuple(edges), tuple(nodes), len(edges), sum(delay[e] for e in edges))


def _sample_edges(cfg: GeneratorConfig, points: np.ndarray, rng: np.random.Generator):
    n, m = cfg.n, cfg.m
    r2 = cfg.connect_radius**2
    seen: set[tuple[int, int]] = set()
    src: list[int] = []
    dst: list[int] = []
    budget = cfg.attempt_factor * m
    drawn = 0
    while len(src) < m:
        if drawn >= budget:
            raise GenerationFailure(
                f"only {len(src)} of {m} edges placed after {drawn} pair draws"
            )
        batch = max(1024, 2 * (m - len(src)))
        us = rng.integers(0, n, size=batch)
        vs = rng.integers(0, n, size=batch)
        d2 = ((points[us] - points[vs]) ** 2).sum(axis=1)
        ok = (us != vs) & (d2 < r2)
        drawn += batch
        for u, v in zip(us[ok].tolist(), vs[ok].tolist()):
            if (u, v) in seen:
                continue
            seen.add((u, v))
            src.append(u)
            dst.append(v)
            if len(src) == m:
                break
    return src, dst


def generate_instance(cfg: GeneratorConfig) -> PlantedInstance:
    """Build a planted instance; fully determined by ``cfg`` (seed included)."""
    rng = np.random.default_rng(cfg.seed)
    points = rng.uniform(0.0, cfg.side, size=(cfg.n, 2))
    src, dst = _sample_edges(cfg, points, rng)
    lo, hi = cfg.delay_range
    delays = rng.integers(lo, hi + 1, size=cfg.m).tolist()
    topo = Network.from_arrays(cfg.n, src, dst, [0] * cfg.m, delays)

    demands: list[Demand] = []
    planted: dict[int, Path] = {}
    blo, bhi = cfg.band_range
    budget = cfg.attempt_factor * cfg.k
    attempts = 0
    while len(demands) < cfg.k:
        attempts += 1
        if attempts > budget:
            raise GenerationFailure(
                f"only {len(demands)} of {cfg.k} reachable demands after {attempts} draws"
            )
        s, t = rng.integers(0, cfg.n, size=2).tolist()
        if s == t:
            continue
        path = plant_path(topo, s, t, rng)
        if path is None:
            continue
        did = len(demands)
        band = int(rng.integers(blo, bhi + 1))
        demands.append(Demand(did, s, t, band, path.delay, path.hop))
        planted[did] = path

    n_chosen = math.floor(cfg.k * Fraction(str(cfg.chosen_fraction)))
    chosen = frozenset(rng.choice(cfg.k, size=n_chosen, replace=False).tolist())
    load = [0] * cfg.m
    for did in chosen:
        b = demands[did].band
        for e in planted[did].edges:
            load[e] += b
    factor = Fraction(str(cfg.capacity_factor))
    num, den = factor.numerator, factor.denominator
    capacity = [-(-x * num // den) for x in load]

    edges = tuple(Edge(i, src[i], dst[i], capacity[i], delays[i]) for i in range(cfg.m))
    network = Network(cfg.n, edges)
    # reuse the adjacency built for the topology; it does not depend on capacity
    network.__dict__.update(
        {name: getattr(topo, name) for name in ("canonical", "out_adj", "in_adj", "src", "dst", "delay")}
    )
    return PlantedInstance(network, demands, chosen, planted, points)
