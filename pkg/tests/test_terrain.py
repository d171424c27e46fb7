"""Terrain generation, velocity model and instance construction."""

import json
import math

import numpy as np
import pytest

from apulse import (
    GenerationError, GridSpec, UnreachableGoalError, VelocityMatrix,
    benchmark_suite, generate_terrain, grid_layout, make_instance, save_graph,
)
from apulse.terrain import (
    NUM_SLOPE_BANDS, TERRAIN_NAMES, generate_fields, instance_from_manifest,
    instance_to_manifest, resolve_selector, slope_band,
)

from conftest import build_graph, ref_dijkstra_edge


def uniform_velocity(speed: float) -> VelocityMatrix:
    """Every terrain class and slope band at the same speed (flat model)."""
    return VelocityMatrix({name: tuple([speed] * NUM_SLOPE_BANDS) for name in TERRAIN_NAMES})


def flat_spec(width, height, **kw) -> GridSpec:
    kw.setdefault("elevation_range", (100.0, 100.0))
    return GridSpec(width=width, height=height, **kw)


class TestVelocityMatrix:
    def test_default_shape_and_monotonicity(self):
        vm = VelocityMatrix.default()
        assert set(vm.speeds) == set(TERRAIN_NAMES)
        for name in TERRAIN_NAMES:
            row = vm.speeds[name]
            assert len(row) == NUM_SLOPE_BANDS
            assert all(row[i + 1] <= row[i] for i in range(len(row) - 1))
            assert row[-1] == 0.0  # steepest band impassable by default

    def test_rejects_increasing_row(self):
        rows = VelocityMatrix.default().to_doc()
        rows["Forest"] = [1.0, 2.0, 0.5, 0.2, 0.0]
        with pytest.raises(ValueError, match="non-increasing"):
            VelocityMatrix.from_doc(rows)

    def test_rejects_missing_class(self):
        rows = VelocityMatrix.default().to_doc()
        del rows["Forest"]
        with pytest.raises(ValueError, match="Forest"):
            VelocityMatrix.from_doc(rows)

    def test_config_file_round_trip(self, tmp_path):
        vm = VelocityMatrix.default()
        path = tmp_path / "velocity.json"
        vm.save(path)
        assert VelocityMatrix.load(path) == vm
        assert json.loads(path.read_text())["PavedAreas"][0] == 8.0


class TestSlopeBands:
    @pytest.mark.parametrize("deg, band", [
        (0.0, 0), (4.9, 0), (5.0, 1), (9.9, 1), (10.0, 2),
        (19.9, 2), (20.0, 3), (29.9, 3), (30.0, 4), (45.0, 4),
        (-7.0, 1), (-45.0, 4),
    ])
    def test_band_mapping(self, deg, band):
        assert slope_band(deg) == band


class TestGenerateTerrain:
    def test_flat_pair_edge_time(self):
        # 25 m apart at 5 m/s -> 5 s each direction
        g = generate_terrain(flat_spec(2, 1, seed=1), velocity=uniform_velocity(5.0))
        assert g.n == 2 and g.num_edges == 2
        assert np.allclose(g.edge_time, 5.0)

    def test_flat_diagonal_edge_time(self):
        g = generate_terrain(flat_spec(2, 2, seed=1), velocity=uniform_velocity(5.0))
        expect = 25.0 * math.sqrt(2.0) / 5.0
        diag_times = [
            float(g.edge_time[i]) for i in range(g.num_edges)
            if g.x[g.edge_src[i]] != g.x[g.edge_dst[i]]
            and g.y[g.edge_src[i]] != g.y[g.edge_dst[i]]
        ]
        assert len(diag_times) == 4
        assert all(t == pytest.approx(expect, rel=1e-12) for t in diag_times)

    def test_eight_connectivity_degrees(self):
        g = generate_terrain(flat_spec(6, 5, seed=3))
        w, h = 6, 5
        for r in range(h):
            for c in range(w):
                u = r * w + c
                on_edge_r = r in (0, h - 1)
                on_edge_c = c in (0, w - 1)
                expected = 3 if (on_edge_r and on_edge_c) else 5 if (on_edge_r or on_edge_c) else 8
                assert len(g.out_edges(u)) == expected

    def test_edge_times_follow_cost_law(self):
        # recompute every edge time from the raw fields: d / v(dest terrain, slope band)
        spec = GridSpec(width=9, height=7, seed=21, elevation_range=(40.0, 170.0),
                        terrain_smoothness=3.0)
        vm = VelocityMatrix.default()
        g = generate_terrain(spec, velocity=vm)
        elevation, terrain_idx, risk = generate_fields(spec)
        elev = elevation.ravel()
        tidx = terrain_idx.ravel()
        assert np.allclose(g.risk, risk.ravel())
        for i in range(g.num_edges):
            u, v = int(g.edge_src[i]), int(g.edge_dst[i])
            d = math.hypot(g.x[v] - g.x[u], g.y[v] - g.y[u])
            slope = math.degrees(math.atan((elev[v] - elev[u]) / d))
            speed = vm.speed(TERRAIN_NAMES[tidx[v]], slope_band(slope))
            assert speed > 0
            assert float(g.edge_time[i]) == pytest.approx(d / speed, rel=1e-12)

    def test_steep_slopes_drop_edges(self):
        # cliff-like elevation: many cell pairs exceed 30 degrees and vanish
        spec = GridSpec(width=8, height=8, seed=5, elevation_range=(0.0, 800.0),
                        terrain_smoothness=2.0)
        g = generate_terrain(spec)
        full = generate_terrain(flat_spec(8, 8, seed=5))
        assert g.num_edges < full.num_edges
        assert np.all(g.edge_time > 0)

    def test_all_impassable_raises(self):
        with pytest.raises(GenerationError):
            generate_terrain(flat_spec(3, 3, seed=1), velocity=uniform_velocity(0.0))

    def test_determinism(self):
        spec = GridSpec(width=12, height=9, seed=42)
        assert save_graph(generate_terrain(spec)) == save_graph(generate_terrain(spec))

    def test_different_seeds_differ(self):
        a = generate_terrain(GridSpec(width=12, height=9, seed=1))
        b = generate_terrain(GridSpec(width=12, height=9, seed=2))
        assert save_graph(a) != save_graph(b)

    def test_risk_in_range_and_terrain_labels(self):
        g = generate_terrain(GridSpec(width=15, height=15, seed=9))
        assert np.all((g.risk >= 0) & (g.risk < 1.0))
        assert set(g.terrain) <= set(TERRAIN_NAMES)
        assert grid_layout(g) is not None

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            GridSpec(width=1, height=1)
        with pytest.raises(ValueError):
            GridSpec(width=4, height=4, cell_size=0.0)


class TestMakeInstance:
    def test_line_budget_arithmetic(self):
        g = build_graph([0.0, 0.1, 0.1], [(0, 1, 5.0), (1, 2, 5.0)])
        inst = make_instance(g, 0, 2, 0.10)
        assert inst.t_min == 10.0
        assert inst.budget == pytest.approx(11.0, rel=1e-12)

    def test_zero_slack_budget_equals_t_min(self):
        g = build_graph([0.0, 0.1, 0.1], [(0, 1, 5.0), (1, 2, 5.0)])
        inst = make_instance(g, 0, 2, 0.0)
        assert inst.budget == inst.t_min == 10.0

    def test_unreachable_goal(self):
        g = build_graph([0.0, 0.1, 0.1], [(0, 1, 5.0)])
        with pytest.raises(UnreachableGoalError):
            make_instance(g, 0, 2, 0.5)

    def test_budget_matches_independent_dijkstra(self):
        g = generate_terrain(GridSpec(width=20, height=20, seed=13))
        inst = make_instance(g, 0, g.n - 1, 0.5)
        adj = {}
        for i in range(g.num_edges):
            adj.setdefault(int(g.edge_src[i]), []).append(
                (int(g.edge_dst[i]), float(g.edge_time[i])))
        ref = ref_dijkstra_edge(g.n, adj, 0)[g.n - 1]
        assert inst.t_min == pytest.approx(ref, rel=1e-12)
        assert inst.budget == pytest.approx(1.5 * ref, rel=1e-12)

    def test_same_endpoints_rejected(self):
        g = build_graph([0.0, 0.1], [(0, 1, 1.0)])
        with pytest.raises(ValueError):
            make_instance(g, 0, 0, 0.1)


class TestBenchmarkSuite:
    def test_product_cardinality_and_order(self):
        spec = GridSpec(width=8, height=8, seed=2)
        instances = benchmark_suite(spec, [(0, 63), (0.0, 1.0)], [0.10, 0.20, 0.50])
        assert len(instances) == 6
        assert [i.alpha for i in instances] == [0.10, 0.20, 0.50] * 2
        # fractional selectors resolve to the corners here
        assert (instances[3].start, instances[3].goal) == (0, 63)

    def test_determinism(self):
        spec = GridSpec(width=8, height=8, seed=2)
        a = benchmark_suite(spec, [(0, 63)], [0.1, 0.5])
        b = benchmark_suite(spec, [(0, 63)], [0.1, 0.5])
        assert [x.budget for x in a] == [y.budget for y in b]
        assert save_graph(a[0].graph) == save_graph(b[0].graph)

    def test_selector_validation(self):
        g = generate_terrain(GridSpec(width=4, height=4, seed=1))
        assert resolve_selector(g, 5) == 5
        assert resolve_selector(g, 0.0) == 0
        assert resolve_selector(g, 1.0) == g.n - 1
        assert resolve_selector(g, 0.5) == round(0.5 * (g.n - 1))
        with pytest.raises(ValueError):
            resolve_selector(g, 99)
        with pytest.raises(ValueError):
            resolve_selector(g, 1.5)
        with pytest.raises(ValueError):
            resolve_selector(g, "corner")


class TestOctileGeometry:
    def test_flat_uniform_grid_matches_octile_distance(self):
        speed = 4.0
        g = generate_terrain(flat_spec(10, 10, seed=3), velocity=uniform_velocity(speed))
        adj = {}
        for i in range(g.num_edges):
            adj.setdefault(int(g.edge_src[i]), []).append(
                (int(g.edge_dst[i]), float(g.edge_time[i])))
        rng = np.random.default_rng(4)
        dist_from_0 = ref_dijkstra_edge(g.n, adj, 0)
        for _ in range(15):
            v = int(rng.integers(1, g.n))
            dr, dc = divmod(v, 10)
            lo, hi = sorted((dr, dc))
            octile = 25.0 * (hi + (math.sqrt(2.0) - 1.0) * lo) / speed
            assert dist_from_0[v] == pytest.approx(octile, rel=1e-9)


class TestManifests:
    def test_inline_round_trip(self):
        g = generate_terrain(GridSpec(width=5, height=5, seed=6))
        inst = make_instance(g, 0, 24, 0.25)
        doc = instance_to_manifest(inst)
        restored = instance_from_manifest(doc)
        assert restored.budget == inst.budget
        assert restored.t_min == inst.t_min
        assert restored.graph == g

    def test_path_reference(self, tmp_path):
        g = generate_terrain(GridSpec(width=5, height=5, seed=6))
        (tmp_path / "g.json").write_bytes(save_graph(g))
        inst = make_instance(g, 0, 24, 0.25)
        doc = instance_to_manifest(inst, graph_ref="g.json")
        restored = instance_from_manifest(doc, base_dir=tmp_path)
        assert restored.graph == g

    def test_stale_manifest_rejected(self):
        g = generate_terrain(GridSpec(width=5, height=5, seed=6))
        inst = make_instance(g, 0, 24, 0.25)
        doc = instance_to_manifest(inst)
        doc["t_min"] *= 2
        with pytest.raises(ValueError, match="stale"):
            instance_from_manifest(doc)
