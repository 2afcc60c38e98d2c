"""Phase 1: candidate paths from two opposing hop-bounded BFS trees.

For a demand with hop limit ``H`` a forward BFS from the source and a
backward BFS (along reversed edges) from the sink are both cut off at
radius ``H // 2 + 1``.  Every node reached by both searches is a meeting
vertex; gluing the two tree paths through it yields one src-dst walk.
Walks that repeat a node or break the delay or hop limit are dropped.
Bandwidth is ignored here; it is handled by path selection.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .model import Demand, Network, Path

DEFAULT_K = 128
MAX_K = 300


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class BfsTree:
    root: int
    direction: Direction
    radius: int
    dist: dict[int, int]
    # node -> (edge_id, neighbour one step closer to root); root maps to None
    parent: dict[int, tuple[int, int] | None]
    # node -> total delay of its tree path
    delay: dict[int, int]

    def tree_path(self, v: int) -> tuple[list[int], list[int]]:
        """Edges and nodes of the tree path between root and ``v``.

        Forward trees return the root->v order, backward trees v->root.
        """
        edges: list[int] = []
        nodes = [v]
        link = self.parent[v]
        while link is not None:
            eid, v = link
            edges.append(eid)
            nodes.append(v)
            link = self.parent[v]
        if self.direction is Direction.FORWARD:
            edges.reverse()
            nodes.reverse()
        return edges, nodes


@dataclass(frozen=True)
class CandidateSet:
    demand_id: int
    paths: tuple[Path, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def search_radius(hop_limit: int) -> int:
    return hop_limit // 2 + 1


def half_bfs(
    topology: Network,
    root: int,
    direction: Direction | str,
    radius: int,
    residual: Sequence[int] | None = None,
    min_residual: int = 0,
) -> BfsTree:
    """Hop-bounded BFS from ``root``, expanding edges in ascending id order.

    With ``residual`` given, edges whose residual is below ``min_residual``
    are skipped.
    """
    direction = Direction(direction)
    if radius < 1:
        raise ValueError("radius must be >= 1")
    adj = topology.out_adj if direction is Direction.FORWARD else topology.in_adj
    dist = {root: 0}
    parent: dict[int, tuple[int, int] | None] = {root: None}
    delay = {root: 0}
    frontier = [root]
    for level in range(1, radius + 1):
        nxt = []
        for u in frontier:
            du = delay[u]
            for eid, v, d in adj[u]:
                if v in dist:
                    continue
                if residual is not None and residual[eid] < min_residual:
                    continue
                dist[v] = level
                parent[v] = (eid, u)
                delay[v] = du + d
                nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return BfsTree(root, direction, radius, dist, parent, delay)


def compute_candidates(
    topology: Network,
    demand: Demand,
    K: int = DEFAULT_K,
    residual: Sequence[int] | None = None,
) -> CandidateSet:
    """Locally feasible candidate paths for one demand, at most ``K`` of them.

    Paths come back sorted by ``(hop, delay, meeting vertex)``; when more
    than ``K`` survive only the first ``K`` in that order are kept.  Passing
    ``residual`` prunes edges that cannot carry ``demand.band`` from both
    searches.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    radius = search_radius(demand.hop_limit)
    fwd = half_bfs(topology, demand.src, Direction.FORWARD, radius, residual, demand.band)
    bwd = half_bfs(topology, demand.dst, Direction.BACKWARD, radius, residual, demand.band)
    hop_limit, delay_limit = demand.hop_limit, demand.delay_limit
    fdist, bdist = fwd.dist, bwd.dist
    fdelay, bdelay = fwd.delay, bwd.delay
    fparent, bparent = fwd.parent, bwd.parent

    seen: set[tuple[int, ...]] = set()
    ranked: list[tuple[int, int, int, Path]] = []
    meet = sorted(fdist.keys() & bdist.keys())
    for v in meet:
        hop = fdist[v] + bdist[v]
        if hop > hop_limit:
            continue
        delay = fdelay[v] + bdelay[v]
        if delay > delay_limit:
            continue
        # forward half, walked back from v to the source
        f_edges: list[int] = []
        f_nodes = [v]
        link = fparent[v]
        while link is not None:
            eid, u = link
            f_edges.append(eid)
            f_nodes.append(u)
            link = fparent[u]
        on_path = set(f_nodes)
        b_edges: list[int] = []
        b_nodes: list[int] = []
        link = bparent[v]
        simple = True
        while link is not None:
            eid, u = link
            if u in on_path:
                simple = False
                break
            on_path.add(u)
            b_edges.append(eid)
            b_nodes.append(u)
            link = bparent[u]
        if not simple:
            continue
        f_edges.reverse()
        f_nodes.reverse()
        edges = tuple(f_edges + b_edges)
        if edges in seen:
            continue
        seen.add(edges)
        ranked.append((hop, delay, v, Path(edges, tuple(f_nodes + b_nodes), hop, delay)))

    ranked.sort(key=lambda r: r[:3])
    return CandidateSet(demand.demand_id, tuple(r[3] for r in ranked[:K]))
