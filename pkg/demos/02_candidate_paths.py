"""Watch the two half searches and the candidate paths they produce.

A demand with hop limit h is served by a forward search from the source
and a backward search from the sink, each going h // 2 + 1 hops out.
Paths are glued together at vertices both searches reached.
"""

from bdhroute import Demand, Edge, Network, compute_candidates, half_bfs
from bdhroute.paths import search_radius

# a 3x3 grid with arcs pointing right and down, node id = 3 * row + col
edges = []
for r in range(3):
    for c in range(3):
        v = 3 * r + c
        if c < 2:
            edges.append((v, v + 1, 10 + v))
        if r < 2:
            edges.append((v, v + 3, 12 + v))
network = Network(9, tuple(Edge(i, u, v, 1000, d) for i, (u, v, d) in enumerate(edges)))

demand = Demand(0, src=0, dst=8, band=1, delay_limit=80, hop_limit=4)
r = search_radius(demand.hop_limit)
fwd = half_bfs(network, demand.src, "forward", r)
bwd = half_bfs(network, demand.dst, "backward", r)
print(f"radius {r}")
print("forward distances :", dict(sorted(fwd.dist.items())))
print("backward distances:", dict(sorted(bwd.dist.items())))
print("meeting vertices  :", sorted(set(fwd.dist) & set(bwd.dist)))

for k in (2, 8):
    print(f"\nK={k} candidates (sorted by hops, then delay):")
    for p in compute_candidates(network, demand, K=k):
        print("  ", p.nodes, "delay", p.delay)

tight = Demand(1, 0, 8, 1, delay_limit=60, hop_limit=4)
print("\nwith delay limit 60 only these survive:")
for p in compute_candidates(network, tight):
    print("  ", p.nodes, "delay", p.delay)
