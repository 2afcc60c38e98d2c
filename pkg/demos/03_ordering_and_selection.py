"""How demands are ordered and how a path is picked for each one.

Four sort rules trade off bandwidth, delay slack and hop slack.  Once a
demand's turn comes up, its candidates are filtered by residual room and
ranked by the sum of reciprocal residuals, so crowded edges cost more.
"""

from bdhroute import Demand, Edge, Network, alt_select, compute_candidates, order_demands, select_and_rank

demands = [
    Demand(0, 0, 3, band=500, delay_limit=90, hop_limit=3),
    Demand(1, 0, 3, band=800, delay_limit=40, hop_limit=2),
    Demand(2, 0, 3, band=800, delay_limit=200, hop_limit=4),
    Demand(3, 0, 3, band=200, delay_limit=30, hop_limit=2),
]
for rule in ("rule1", "rule2", "rule3", "rule4", "none"):
    print(f"{rule:6s} order:", [d.demand_id for d in order_demands(rule, demands)])

network = Network(4, (
    Edge(0, 0, 1, 2000, 5), Edge(1, 1, 3, 2000, 5),
    Edge(2, 0, 2, 9000, 8), Edge(3, 2, 3, 9000, 8),
    Edge(4, 0, 3, 1200, 20),
))
d = Demand(9, 0, 3, band=1000, delay_limit=30, hop_limit=2)
cands = compute_candidates(network, d)
residual = list(network.capacity)
residual[0] = 1100  # the fast upper route is nearly full

ranked = select_and_rank(residual, d, cands)
print("\nranked by reciprocal-residual weight:")
for p, w in ranked.entries:
    print(f"   {p.nodes}  weight {w:.5f}  delay {p.delay}")
print("min-delay pick:", alt_select(residual, d, cands, "min-delay").first().nodes)
print("random picks  :", [alt_select(residual, d, cands, "random", seed=s).first().nodes for s in range(4)])
