"""Run the full heuristic on a generated instance and read its trace.

Each iteration recomputes candidates for the demands still waiting,
orders them, and commits the best-ranked path that still fits.
"""

from bdhroute import GeneratorConfig, SolverConfig, generate_instance, solve, verify_solution

inst = generate_instance(GeneratorConfig(n=80, m=320, k=600, seed=7))
net, demands = inst.network, inst.demands
print(f"{net.node_count} nodes, {net.edge_count} edges, {len(demands)} demands, "
      f"offered {inst.total_band} units, planted {inst.planted_solution().throughput}")

for cfg in (SolverConfig(rule="rule1"), SolverConfig(rule="all"),
            SolverConfig(rule="rule1", prune_residual=True)):
    sol, trace = solve(net, demands, cfg)
    assert verify_solution(net, demands, sol).valid
    label = f"rule={cfg.rule}" + (" +pruning" if cfg.prune_residual else "")
    print(f"\n{label}: {sol.throughput} units "
          f"({100 * sol.throughput / inst.total_band:.1f}% of offered), best rule {trace.rule}")
    for rec in trace.iterations:
        print(f"   iteration {rec.iteration}: +{rec.newly_satisfied} demands, "
              f"throughput {rec.throughput}, candidates {rec.phase1_s * 1000:.0f} ms")
