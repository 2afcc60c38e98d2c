"""Compare the heuristic against single-path routers and k-shortest candidates.

The baselines route demands one at a time in input order: fastest path,
widest among the hop-shortest, or hop-shortest among the widest.  The
k-shortest variant reuses the heuristic's later steps but feeds it the
k cheapest loopless paths instead of the bidirectional candidates.
"""

import time

from bdhroute import GeneratorConfig, KspaConfig, generate_instance, kspa_solve, sequential_solve, solve

inst = generate_instance(GeneratorConfig(n=120, m=480, k=1500, seed=3))
net, demands = inst.network, inst.demands


def show(name, sol, t):
    print(f"{name:12s} {100 * sol.throughput / inst.total_band:6.2f}%  {t:6.2f}s")


t0 = time.perf_counter()
sol, _ = solve(net, demands)
show("main", sol, time.perf_counter() - t0)
for name in ("mda", "wsp", "swp"):
    t0 = time.perf_counter()
    sol = sequential_solve(net, demands, name)
    show(name, sol, time.perf_counter() - t0)
for weight in ("delay", "hop"):
    t0 = time.perf_counter()
    sol, trace = kspa_solve(net, demands, KspaConfig(k=16, weight=weight))
    show(f"kspa-{weight}", sol, time.perf_counter() - t0)
