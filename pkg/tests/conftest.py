"""Shared builders for small hand-made and random instances."""

from __future__ import annotations

import random

import pytest

from bdhroute import Demand, Edge, Network, half_bfs
from bdhroute.oracle import feasible_paths
from bdhroute.paths import search_radius


def net(node_count, arcs, capacity=10_000):
    """Network from ``(src, dst, delay)`` or ``(src, dst, delay, capacity)`` tuples."""
    edges = []
    for i, arc in enumerate(arcs):
        u, v, d = arc[:3]
        c = arc[3] if len(arc) > 3 else capacity
        edges.append(Edge(i, u, v, c, d))
    return Network(node_count, tuple(edges))


def random_graph(rng: random.Random, max_nodes=8, max_edges=12, parallel=False,
                 cap_range=(0, 6), delay_range=(1, 9)):
    n = rng.randint(2, max_nodes)
    m = rng.randint(1, max_edges)
    arcs = []
    seen = set()
    for _ in range(m * 4):
        if len(arcs) == m:
            break
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or (not parallel and (u, v) in seen):
            continue
        seen.add((u, v))
        arcs.append((u, v, rng.randint(*delay_range), rng.randint(*cap_range)))
    return net(n, arcs)


def random_demands(rng: random.Random, n, count, max_hop=4, band_range=(1, 4),
                   delay_limit_range=(1, 30)):
    out = []
    for i in range(count):
        s = rng.randrange(n)
        t = rng.randrange(n - 1)
        t += t >= s
        out.append(Demand(i, s, t, rng.randint(*band_range),
                          rng.randint(*delay_limit_range), rng.randint(1, max_hop)))
    return out


def random_tiny_instance(seed, parallel=False):
    """At most 8 nodes, 12 edges, 4 demands, hop limits at most 4."""
    rng = random.Random(seed)
    network = random_graph(rng, parallel=parallel)
    demands = random_demands(rng, network.node_count, rng.randint(0, 4))
    return network, demands


def all_simple_paths(network, src, dst, max_hop):
    """Every simple src-dst path with at most ``max_hop`` edges, ignoring delay."""
    probe = Demand(0, src, dst, 1, 10**9, max_hop)
    return feasible_paths(network, probe, limit=10**6)


def dominance_violations(network, demand):
    """Check the meeting-vertex property for every hop-feasible simple path.

    Along a path q with h hops, the vertex at position i is reachable in i
    hops from the source and h - i hops into the sink, so whenever both are
    within the search radius it must be a meeting vertex whose tree
    distances add up to at most h.  At least one such vertex always exists
    (the midpoint), which is what makes merging through meeting vertices
    sufficient.  Returns a list of (path nodes, vertex, reason) tuples.
    """
    r = search_radius(demand.hop_limit)
    fwd = half_bfs(network, demand.src, "forward", r)
    bwd = half_bfs(network, demand.dst, "backward", r)
    bad = []
    for q in all_simple_paths(network, demand.src, demand.dst, demand.hop_limit):
        h = q.hop
        window = [(i, v) for i, v in enumerate(q.nodes) if i <= r and h - i <= r]
        if not window:
            bad.append((q.nodes, None, "no vertex within radius of both ends"))
        for i, v in window:
            if v not in fwd.dist or v not in bwd.dist:
                bad.append((q.nodes, v, "not visited by both searches"))
            elif fwd.dist[v] + bwd.dist[v] > h:
                bad.append((q.nodes, v, "tree distances exceed path length"))
    return bad


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def diamond():
    # 0->1->3 and 0->2->3, all delays 50
    return net(4, [(0, 1, 50), (0, 2, 50), (1, 3, 50), (2, 3, 50)])
