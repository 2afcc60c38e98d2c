import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdhroute import (
    CandidateSet,
    Demand,
    InsufficientResidual,
    InvalidInstance,
    ResidualState,
    SolverConfig,
    TooLarge,
    brute_force_optimum,
    commit_path,
    path_metrics,
    solve,
    verify_solution,
)
from bdhroute.oracle import feasible_paths
from bdhroute.solver import BfsCandidates

from conftest import net, random_demands, random_graph, random_tiny_instance


def shared_edge_instance():
    n = net(2, [(0, 1, 10, 5000)])
    return n, [Demand(0, 0, 1, 3000, 10, 1), Demand(1, 0, 1, 5000, 10, 1)]


class TestCommit:
    def test_subtracts_band(self):
        n = net(3, [(0, 1, 1, 10), (1, 2, 1, 7)])
        r = ResidualState.of(n)
        commit_path(r, Demand(0, 0, 2, 7, 9, 2), path_metrics(n, [0, 1, 2]))
        assert r.values == [3, 0]

    def test_bookkeeping_identity(self):
        rng = random.Random(5)
        n = net(4, [(0, 1, 1, 50), (1, 2, 1, 50), (2, 3, 1, 50), (0, 2, 1, 50)])
        r = ResidualState.of(n)
        load = [0] * 4
        for nodes in ([0, 1, 2], [0, 2, 3], [1, 2, 3], [0, 1, 2, 3]):
            b = rng.randint(1, 9)
            p = path_metrics(n, nodes)
            commit_path(r, Demand(0, nodes[0], nodes[-1], b, 99, 9), p)
            for e in p.edges:
                load[e] += b
        assert [c - v for c, v in zip(n.capacity, r.values)] == load

    def test_overdraw_rejected(self):
        n = net(2, [(0, 1, 1, 10)])
        r = ResidualState.of(n)
        p = path_metrics(n, [0, 1])
        commit_path(r, Demand(0, 0, 1, 6, 9, 1), p)
        with pytest.raises(InsufficientResidual):
            commit_path(r, Demand(1, 0, 1, 6, 9, 1), p)

    def test_selector_never_overdraws(self):
        n = net(2, [(0, 1, 1, 10)])
        ds = [Demand(0, 0, 1, 6, 9, 1), Demand(1, 0, 1, 6, 9, 1)]
        sol, _ = solve(n, ds, SolverConfig(rule="none"))
        assert set(sol.assignment) == {0}


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(k_paths=0), dict(k_paths=301), dict(workers=0),
                                    dict(max_iterations=0), dict(rule="bogus"),
                                    dict(selection="bogus")])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            SolverConfig(**kw)

    def test_defaults(self):
        c = SolverConfig()
        assert (c.k_paths, c.rule, c.selection.value, c.workers, c.max_iterations) == (
            128, "all", "weight", 1, 64)


class TestSolve:
    def test_single_demand(self):
        n = net(3, [(0, 1, 5), (1, 2, 5)])
        sol, trace = solve(n, [Demand(0, 0, 2, 700, 10, 2)])
        assert sol.throughput == 700
        assert trace.iterations[0].newly_satisfied == 1

    def test_shared_edge_rule1(self):
        n, ds = shared_edge_instance()
        sol, _ = solve(n, ds, SolverConfig(rule="rule1"))
        assert set(sol.assignment) == {1} and sol.unsatisfied == {0}
        assert sol.throughput == 5000

    def test_shared_edge_oracle(self):
        n, ds = shared_edge_instance()
        # four combinations: none, only 0, only 1, both
        values = []
        for take0, take1 in product((0, 1), repeat=2):
            load = 3000 * take0 + 5000 * take1
            if load <= 5000:
                values.append(3000 * take0 + 5000 * take1)
        assert max(values) == 5000
        assert brute_force_optimum(n, ds).throughput == 5000

    def test_invalid_instances(self):
        n = net(2, [(0, 1, 5)])
        with pytest.raises(InvalidInstance):
            solve(n, [Demand(0, 0, 1, 1, 9, 1), Demand(0, 0, 1, 1, 9, 1)])
        with pytest.raises(InvalidInstance):
            solve(n, [Demand(0, 0, 7, 1, 9, 1)])

    def test_empty(self):
        sol, trace = solve(net(2, [(0, 1, 5)]), [])
        assert sol.throughput == 0 and len(trace.iterations) == 1

    def test_all_ties_go_to_lowest_rule(self):
        n = net(3, [(0, 1, 5), (1, 2, 5)])
        _, trace = solve(n, [Demand(0, 0, 2, 7, 10, 2)], SolverConfig(rule="all"))
        assert trace.rule.value == "rule1"
        assert trace.combined_phase1_s is not None

    def test_all_picks_best_rule(self):
        # rule1 serves the big demand first and blocks two small ones; rule2 prefers the short ones
        n = net(3, [(0, 1, 1, 6), (1, 2, 1, 6), (0, 2, 5, 3)])
        ds = [Demand(0, 0, 2, 6, 99, 2), Demand(1, 0, 1, 3, 99, 1), Demand(2, 1, 2, 3, 99, 1),
              Demand(3, 0, 1, 3, 99, 1), Demand(4, 1, 2, 3, 99, 1)]
        by_rule = {r: solve(n, ds, SolverConfig(rule=r))[0].throughput
                   for r in ("rule1", "rule2", "rule3", "rule4")}
        sol, trace = solve(n, ds, SolverConfig(rule="all"))
        assert sol.throughput == max(by_rule.values())
        best = min(r for r, v in by_rule.items() if v == sol.throughput)
        assert trace.rule.value == best
        assert by_rule["rule1"] < by_rule["rule2"]

    def test_deferred_demands_retry_with_pruning(self):
        # demand 1's only candidate without pruning is the saturated direct edge;
        # pruned BFS in iteration 2 finds the detour
        n = net(3, [(0, 2, 1, 5), (0, 1, 1, 5), (1, 2, 1, 5)])
        ds = [Demand(0, 0, 2, 5, 99, 2), Demand(1, 0, 2, 5, 99, 2)]
        plain, t1 = solve(n, ds, SolverConfig(rule="none", k_paths=1))
        pruned, t2 = solve(n, ds, SolverConfig(rule="none", k_paths=1, prune_residual=True))
        assert plain.throughput == 5 and pruned.throughput == 10
        assert [r.newly_satisfied for r in t2.iterations] == [1, 1]
        assert [r.newly_satisfied for r in t1.iterations] == [1, 0]

    def test_iteration_cap_is_reported(self, caplog):
        n = net(3, [(0, 2, 1, 5), (0, 1, 1, 5), (1, 2, 1, 5)])
        ds = [Demand(0, 0, 2, 5, 99, 2), Demand(1, 0, 2, 5, 99, 2), Demand(2, 0, 1, 1, 9, 1)]
        _, trace = solve(n, ds, SolverConfig(rule="none", k_paths=1, prune_residual=True,
                                             max_iterations=1))
        assert trace.cap_hit
        assert "iteration cap" in caplog.text

    def test_provider_override(self):
        n = net(3, [(0, 1, 5), (1, 2, 5), (0, 2, 1)])
        forced = path_metrics(n, [0, 1, 2])
        calls = []

        def provider(demands, residual):
            calls.append(len(demands))
            return {d.demand_id: CandidateSet(d.demand_id, (forced,)) for d in demands}

        sol, _ = solve(n, [Demand(0, 0, 2, 1, 99, 2)], SolverConfig(rule="rule1"), provider=provider)
        assert sol.assignment[0] == forced and calls == [1]

    @pytest.mark.parametrize("selection", ["weight", "min-hop", "min-delay", "random"])
    def test_every_selection_verifies(self, selection):
        for seed in range(30):
            n, ds = random_tiny_instance(seed)
            sol, _ = solve(n, ds, SolverConfig(selection=selection, seed=seed))
            assert verify_solution(n, ds, sol).valid

    def test_exact_weights_agree_on_tiny_instances(self):
        for seed in range(60):
            n, ds = random_tiny_instance(seed)
            a, _ = solve(n, ds)
            b, _ = solve(n, ds, SolverConfig(exact_weights=True))
            assert a.assignment == b.assignment


class TestProperties:
    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**7), st.booleans())
    def test_feasible_monotone_and_bounded(self, seed, prune):
        n, ds = random_tiny_instance(seed, parallel=True)
        sol, trace = solve(n, ds, SolverConfig(prune_residual=prune))
        assert verify_solution(n, ds, sol).valid
        tps = [r.throughput for r in trace.iterations]
        assert tps == sorted(tps)
        assert len(trace.iterations) <= len(ds) + 1
        assert sol.throughput <= brute_force_optimum(n, ds).throughput

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**7))
    def test_single_demand_matches_optimum_when_only_hops_bind(self, seed):
        # With capacity and delay slack, the tree paths through the midpoint of a
        # hop-shortest path have exactly the shortest length, so they are simple.
        rng = random.Random(seed)
        g = random_graph(rng, max_nodes=9, max_edges=20, parallel=True, cap_range=(10, 10))
        d = random_demands(rng, g.node_count, 1, max_hop=6, band_range=(1, 10),
                           delay_limit_range=(10**6, 10**6))
        sol, _ = solve(g, d)
        assert sol.throughput == brute_force_optimum(g, d).throughput

    def test_single_demand_gap_from_bandwidth(self):
        # every tree path crosses an edge thinner than the band; 3-1-2-0 fits but is no tree path
        g = net(5, [(3, 2, 5, 1), (4, 1, 4, 1), (1, 4, 9, 0), (1, 2, 9, 6), (1, 0, 6, 2),
                    (2, 1, 6, 5), (3, 1, 1, 6), (0, 1, 6, 6), (2, 0, 7, 4)])
        d = [Demand(0, 3, 0, 3, 28, 4)]
        assert brute_force_optimum(g, d).assignment[0].nodes == (3, 1, 2, 0)
        assert solve(g, d)[0].throughput == 0
        # pruning thin edges from the searches recovers it
        assert solve(g, d, SolverConfig(prune_residual=True))[0].throughput == 3

    def test_single_demand_gap_from_delay(self):
        arcs = [(0, 3, 40), (0, 4, 5), (6, 1, 76), (3, 5, 24), (7, 1, 82), (5, 6, 46), (2, 7, 10),
                (2, 0, 70), (1, 3, 99), (7, 6, 64), (7, 0, 64), (7, 3, 55), (1, 2, 16), (3, 2, 82),
                (5, 3, 22), (5, 4, 47), (5, 1, 97), (6, 5, 4), (0, 2, 96), (1, 4, 76), (2, 5, 11),
                (6, 2, 70), (2, 4, 12), (0, 5, 92), (3, 4, 10)]
        g = net(8, arcs, capacity=100)
        d = [Demand(0, 1, 3, 1, 49, 5)]
        only = feasible_paths(g, d[0])
        assert [p.nodes for p in only] == [(1, 2, 5, 3)]
        assert solve(g, d)[0].throughput == 0

    def test_workers_do_not_change_results(self):
        rng = random.Random(11)
        g = random_graph(rng, max_nodes=40, max_edges=160, cap_range=(3, 12))
        ds = random_demands(rng, g.node_count, 120, max_hop=5, delay_limit_range=(5, 40))
        ref, _ = solve(g, ds, SolverConfig(workers=1))
        for w in (2, 3):
            assert solve(g, ds, SolverConfig(workers=w))[0] == ref


class TestProvider:
    def test_memo_reuses_topology_candidates(self):
        n = net(3, [(0, 1, 5), (1, 2, 5)])
        d = Demand(0, 0, 2, 1, 99, 2)
        prov = BfsCandidates(n)
        a = prov([d], [1, 1])
        b = prov([d], [0, 0])
        assert a[0] is b[0]

    def test_pruned_memo_tracks_snapshot(self):
        n = net(3, [(0, 1, 5), (1, 2, 5)])
        d = Demand(0, 0, 2, 1, 99, 2)
        prov = BfsCandidates(n, prune_residual=True)
        assert len(prov([d], [1, 1])[0]) == 1
        assert len(prov([d], [0, 1])[0]) == 0
        assert len(prov([d], [1, 1])[0]) == 1


class TestOracle:
    def test_zero_demands(self):
        assert brute_force_optimum(net(2, [(0, 1, 1)]), []).throughput == 0

    def test_guard(self):
        # complete digraph on 8 nodes has far more than 50 hop-7 paths
        arcs = [(u, v, 1) for u in range(8) for v in range(8) if u != v]
        with pytest.raises(TooLarge):
            brute_force_optimum(net(8, arcs), [Demand(0, 0, 7, 1, 99, 7)], max_paths=50)

    def test_uses_parallel_edges(self):
        # the canonical edge is too thin; the oracle sees the wider parallel edge
        n = net(2, [(0, 1, 1, 1), (0, 1, 2, 9)])
        sol = brute_force_optimum(n, [Demand(0, 0, 1, 5, 9, 1)])
        assert sol.assignment[0].edges == (1,)
