"""Generate a planted instance and look at what the generator promises.

Nodes are scattered in a square and linked when close.  Every demand has
a planted path; a chosen subset of them is guaranteed to fit together,
which gives a throughput the solver can be measured against.
"""

from collections import Counter

from bdhroute import GeneratorConfig, generate_instance, verify_solution

cfg = GeneratorConfig(n=60, m=240, k=300, seed=11, chosen_fraction=0.8, capacity_factor=1.25)
inst = generate_instance(cfg)
net = inst.network

print(f"{cfg.label}: {net.edge_count} edges, points shape {inst.points.shape}")
print(f"{len(inst.chosen)} of {len(inst.demands)} demands chosen")
print("planted hop counts:", dict(sorted(Counter(p.hop for p in inst.planted.values()).items())))

planted = inst.planted_solution()
print("planted solution valid:", verify_solution(net, inst.demands, planted).valid)
print("planted throughput:", planted.throughput, "of", inst.total_band, "offered")

d = inst.demands[0]
p = inst.planted[d.demand_id]
print(f"\ndemand 0: {d.src}->{d.dst}, band {d.band}, delay limit {d.delay_limit} "
      f"(planted delay {p.delay}), hop limit {d.hop_limit} (planted hops {p.hop})")

same = generate_instance(cfg.with_seed(11))
print("same seed reproduces the instance:", same.network == net and same.demands == inst.demands)
