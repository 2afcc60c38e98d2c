"""Exhaustive optimum for tiny instances, used as a test oracle."""

from __future__ import annotations

from collections.abc import Sequence

from .errors import TooLarge
from .model import Demand, Network, Path, Solution
from .solver import validate_instance

MAX_PATHS = 10_000


def feasible_paths(network: Network, demand: Demand, limit: int = MAX_PATHS) -> list[Path]:
    """Every simple src-dst path meeting the delay and hop limits.

    Depth-first over all edges (parallel ones included) in ascending edge id.
    """
    out: list[list[int]] = [[] for _ in range(network.node_count)]
    for e in network.edges:
        out[e.src].append(e.edge_id)
    dst_of, delay = network.dst, network.delay
    found: list[Path] = []
    edges: list[int] = []
    nodes = [demand.src]
    on_path = {demand.src}

    def dfs(u: int, spent: int) -> None:
        if u == demand.dst:
            found.append(Path(tuple(edges), tuple(nodes), len(edges), spent))
            if len(found) > limit:
                raise TooLarge(f"demand {demand.demand_id} has more than {limit} feasible paths")
            return
        if len(edges) == demand.hop_limit:
            return
        for eid in out[u]:
            v, d = dst_of[eid], delay[eid]
            if v in on_path or spent + d > demand.delay_limit:
                continue
            edges.append(eid)
            nodes.append(v)
            on_path.add(v)
            dfs(v, spent + d)
            on_path.discard(v)
            nodes.pop()
            edges.pop()

    dfs(demand.src, 0)
    return found


def brute_force_optimum(
    network: Network, demands: Sequence[Demand], max_paths: int = MAX_PATHS
) -> Solution:
    """Maximum-throughput assignment by exhaustive search.

    Each demand takes one of its feasible paths (in enumeration order) or
    stays unassigned; among optimal assignments the lexicographically first
    such choice vector wins.

    Raises:
        TooLarge: more than ``max_paths`` feasible paths in total.
    """
    validate_instance(network, demands)
    options: list[list[Path]] = []
    total = 0
    for d in demands:
        paths = feasible_paths(network, d, max_paths)
        total += len(paths)
        if total > max_paths:
            raise TooLarge(f"more than {max_paths} feasible paths across demands")
        options.append(paths)

    residual = list(network.capacity)
    bands = [d.band for d in demands]
    suffix = [0] * (len(demands) + 1)
    for i in range(len(demands) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + bands[i]
    choice: list[Path | None] = [None] * len(demands)
    best_value = -1
    best: list[Path | None] = []

    def search(i: int, value: int) -> None:
        nonlocal best_value, best
        if value + suffix[i] <= best_value:
            return
        if i == len(demands):
            best_value, best = value, list(choice)
            return
        b = bands[i]
        for p in options[i]:
            if all(residual[e] >= b for e in p.edges):
                for e in p.edges:
                    residual[e] -= b
                choice[i] = p
                search(i + 1, value + b)
                choice[i] = None
                for e in p.edges:
                    residual[e] += b
        search(i + 1, value)

    search(0, 0)
    assignment = {d.demand_id: p for d, p in zip(demands, best) if p is not None}
    return Solution.from_assignment(demands, assignment)
