"""Cross-checks between the independent exact solvers."""

import math

import pytest

from apulse import (
    NoFeasiblePathError, OracleSizeError, SolverConfig, make_instance,
    path_metrics, solve,
)
from apulse.oracles import (
    constrained_astar_reference, exact_label_setting, exhaustive_enumerate,
)
from apulse.terrain import GridSpec, Instance, generate_terrain

from conftest import build_graph, risk_for_ell


def tiny_instance(side, seed, alpha):
    # gentle elevation: the default 100 m range over a few 25 m cells would
    # exceed the 30-degree cutoff and disconnect tiny grids
    graph = generate_terrain(GridSpec(width=side, height=side, seed=seed,
                                      risk_hotspots=2,
                                      elevation_range=(90.0, 110.0)))
    return make_instance(graph, 0, graph.n - 1, alpha)


class TestDiamondAnswers:
    def test_all_solvers_agree_on_tight_budget(self, diamond):
        inst = Instance(graph=diamond, start=0, goal=3, budget=5.0,
                        t_min=4.0, alpha=0.25)
        expected = 0.41
        for sol in (exact_label_setting(inst), constrained_astar_reference(inst),
                    exhaustive_enumerate(inst), solve(inst, SolverConfig(mode="exact"))):
            assert sol.total_log_risk == pytest.approx(expected, rel=1e-12), sol.solver
            assert sol.nodes == [0, 2, 3]

    def test_all_solvers_agree_on_loose_budget(self, diamond):
        inst = Instance(graph=diamond, start=0, goal=3, budget=10.0,
                        t_min=4.0, alpha=1.5)
        for sol in (exact_label_setting(inst), constrained_astar_reference(inst),
                    exhaustive_enumerate(inst)):
            assert sol.total_log_risk == pytest.approx(0.06, rel=1e-12)

    def test_below_minimum_budget(self, diamond):
        inst = Instance(graph=diamond, start=0, goal=3, budget=2.0,
                        t_min=4.0, alpha=-0.5)
        for fn in (exact_label_setting, constrained_astar_reference,
                   exhaustive_enumerate):
            with pytest.raises(NoFeasiblePathError):
                fn(inst)


class TestMutualAgreement:
    def test_exact_equals_exhaustive_on_small_grids(self):
        checked = 0
        for seed in range(10):
            for alpha in (0.1, 0.5, 1.0):
                inst = tiny_instance(4, 200 + seed, alpha)
                a = exact_label_setting(inst)
                b = exhaustive_enumerate(inst)
                assert a.total_log_risk == pytest.approx(b.total_log_risk, rel=1e-9)
                checked += 1
        assert checked == 30

    def test_three_by_three_cross_check(self):
        for seed in range(5):
            inst = tiny_instance(3, 300 + seed, 0.6)
            a = exact_label_setting(inst)
            b = exhaustive_enumerate(inst)
            c = constrained_astar_reference(inst)
            assert a.total_log_risk == pytest.approx(b.total_log_risk, rel=1e-9)
            assert c.total_log_risk == pytest.approx(b.total_log_risk, rel=1e-9)

    def test_astar_reference_equals_exact_on_medium_suite(self):
        for seed in range(8):
            inst = tiny_instance(6, 400 + seed, 0.4)
            a = exact_label_setting(inst)
            c = constrained_astar_reference(inst)
            assert a.total_log_risk == pytest.approx(c.total_log_risk, rel=1e-9)

    def test_backends_of_exact_labeling_agree(self):
        inst = tiny_instance(8, 55, 0.5)
        nb = exact_label_setting(inst, backend="numba")
        py = exact_label_setting(inst, backend="python")
        assert nb.nodes == py.nodes
        assert nb.total_log_risk == py.total_log_risk


class TestUnconstrainedLimit:
    def test_infinite_budget_equals_node_weight_dijkstra(self):
        graph = generate_terrain(GridSpec(width=7, height=7, seed=31))
        inst = Instance(graph=graph, start=0, goal=48, budget=math.inf,
                        t_min=1.0, alpha=math.inf)
        sol = exact_label_setting(inst)
        # reference: plain node-weight Dijkstra ignoring time entirely
        import heapq

        dist = [math.inf] * graph.n
        dist[0] = 0.0
        heap = [(0.0, 0)]
        seen = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in seen:
                continue
            seen.add(u)
            for e in graph.out_edges(u):
                cand = d + graph.log_risk[e.dst]
                if cand < dist[e.dst]:
                    dist[e.dst] = cand
                    heapq.heappush(heap, (cand, e.dst))
        assert sol.total_log_risk == pytest.approx(dist[48], rel=1e-12)


class TestOracleSelfConsistency:
    def test_answers_are_feasible_and_path_consistent(self):
        for seed in range(6):
            inst = tiny_instance(5, 500 + seed, 0.3)
            for sol in (exact_label_setting(inst), constrained_astar_reference(inst),
                        exhaustive_enumerate(inst)):
                assert sol.total_time <= inst.budget * (1 + 1e-9)
                m = path_metrics(inst.graph, sol.nodes)
                assert m.total_time == pytest.approx(sol.total_time, rel=1e-9)
                assert m.total_log_risk == pytest.approx(sol.total_log_risk, rel=1e-9)

    def test_exhaustive_cap(self):
        inst = tiny_instance(6, 1, 0.2)  # 36 nodes > default cap of 25
        with pytest.raises(OracleSizeError):
            exhaustive_enumerate(inst)

    def test_two_node_graph(self):
        g = build_graph([0.0, risk_for_ell(0.3)], [(0, 1, 2.0)])
        inst = Instance(graph=g, start=0, goal=1, budget=2.0, t_min=2.0, alpha=0.0)
        sol = exhaustive_enumerate(inst)
        assert sol.nodes == [0, 1]
        assert sol.total_log_risk == pytest.approx(0.3, rel=1e-12)

    def test_frontier_sizes_monotone_in_budget(self):
        # larger budgets admit strictly-later labels only, so final Pareto
        # frontier totals grow weakly
        graph = generate_terrain(GridSpec(width=5, height=5, seed=77, risk_hotspots=2))
        sizes = []
        for alpha in (0.1, 0.3, 0.6, 1.0, 1.5):
            inst = make_instance(graph, 0, graph.n - 1, alpha)
            sol = exact_label_setting(inst, exhaustive=True)
            sizes.append(sol.telemetry.frontier_entries)
        assert sizes == sorted(sizes)
        assert sizes[-1] > 0
