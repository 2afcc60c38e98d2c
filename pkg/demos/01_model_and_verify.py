"""Build a tiny network by hand, route two demands and check the result.

The network is a diamond with one narrow side.  We place paths by hand,
commit them against a residual state, then let the verifier catch a
solution that overloads an edge.
"""

from bdhroute import Demand, Edge, Network, ResidualState, Solution, path_metrics, verify_solution

network = Network(4, (
    Edge(0, 0, 1, 100, 10),
    Edge(1, 1, 3, 100, 10),
    Edge(2, 0, 2, 40, 5),
    Edge(3, 2, 3, 40, 5),
))
demands = [
    Demand(0, 0, 3, band=60, delay_limit=25, hop_limit=2),
    Demand(1, 0, 3, band=30, delay_limit=12, hop_limit=2),
]

upper = path_metrics(network, [0, 1, 3])
lower = path_metrics(network, [0, 2, 3])
print("upper route:", upper.nodes, "delay", upper.delay, "hops", upper.hop)
print("lower route:", lower.nodes, "delay", lower.delay, "hops", lower.hop)

# demand 1 only fits the lower route's delay budget; demand 0 takes the upper one
residual = ResidualState.of(network)
residual.commit(upper, demands[0].band)
residual.commit(lower, demands[1].band)
print("residual after committing both:", list(residual.values))

good = Solution.from_assignment(demands, {0: upper, 1: lower})
print("hand-made solution:", good.throughput, "units, valid:", verify_solution(network, demands, good).valid)

# pushing demand 0 through the narrow side overdraws edges 2 and 3
bad = Solution.from_assignment(demands, {0: lower, 1: lower})
report = verify_solution(network, demands, bad)
print("overloaded solution valid?", report.valid)
print("capacity violations (edge, load, capacity):", report.capacity_violations)
