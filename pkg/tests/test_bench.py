"""Benchmark harness: cardinality, reports, CSV/JSON outputs."""

import csv
import json
import statistics

import pytest

from apulse import make_instance
from apulse.bench import (
    BenchConfig, BenchRun, crossover_report, ladder_suite, load_suite,
    quality_report, run_quality_parallel, run_suite, summary_doc, write_csv,
    write_summary,
)
from apulse.terrain import (
    GridSpec, generate_terrain, instance_to_manifest, make_instance as mk,
)


@pytest.fixture(scope="module")
def small_suite():
    graph = generate_terrain(GridSpec(width=6, height=6, seed=98, risk_hotspots=2,
                                      elevation_range=(90.0, 110.0)))
    return [
        ("i0", make_instance(graph, 0, graph.n - 1, 0.2)),
        ("i1", make_instance(graph, 0, graph.n - 1, 0.5)),
    ]


@pytest.fixture(scope="module")
def small_runs(small_suite):
    return run_suite(small_suite, ["apulse", "exact-label-setting"],
                     BenchConfig(reps=5, timeout_s=60.0))


class TestRunSuite:
    def test_cartesian_cardinality_and_rep_counts(self, small_runs):
        assert len(small_runs) == 4  # 2 instances x 2 solvers
        for run in small_runs:
            assert run.outcome == "ok"
            assert len(run.wall_times) == 5
            assert run.warmup_time is not None

    def test_exact_solver_has_zero_deviation(self, small_runs):
        for run in small_runs:
            if run.solver == "exact-label-setting":
                assert run.deviation_vs_exact == 0.0

    def test_bucketed_deviation_is_defined_and_small(self, small_runs):
        for run in small_runs:
            if run.solver == "apulse":
                assert run.deviation_vs_exact is not None
                assert run.deviation_vs_exact <= 0.005

    def test_infeasible_instance_recorded_not_raised(self, small_suite):
        graph = small_suite[0][1].graph
        from apulse.terrain import Instance
        bad = Instance(graph=graph, start=0, goal=graph.n - 1,
                       budget=0.5, t_min=0.5, alpha=0.0)
        runs = run_suite([("bad", bad)], ["apulse"], BenchConfig(reps=2, timeout_s=5))
        assert runs[0].outcome == "infeasible"
        assert runs[0].mean_wall is None

    def test_unknown_solver_rejected(self, small_suite):
        with pytest.raises(ValueError, match="unknown solver"):
            run_suite(small_suite, ["quantum"], BenchConfig(reps=1))


class TestParallelQuality:
    def test_matches_sequential_objectives(self, small_suite, small_runs):
        parallel = run_quality_parallel(
            small_suite, ["apulse", "exact-label-setting"],
            BenchConfig(reps=1, timeout_s=60.0), max_workers=3)
        assert len(parallel) == len(small_runs)
        seq_by_key = {(r.instance_id, r.solver): r for r in small_runs}
        for run in parallel:
            ref = seq_by_key[(run.instance_id, run.solver)]
            assert run.outcome == "ok"
            assert run.objective == ref.objective
            assert run.deviation_vs_exact == ref.deviation_vs_exact
            assert run.wall_times == []  # untimed by design
            assert run.mean_wall is None


class TestQualityReport:
    def test_all_exact_runs(self, small_runs):
        report = quality_report(small_runs, solver="exact-label-setting")
        assert report["optimal"] == 2
        assert report["suboptimal"] == 0
        assert report["max_deviation"] == 0.0
        assert len(report["rows"]) == 2  # one row per instance

    def test_synthetic_single_deviation(self):
        runs = [
            BenchRun(instance_id=f"i{k}", solver="apulse", scale=100, alpha=0.2,
                     reps=1, timeout_s=10, wall_times=[0.01], objective=1.0,
                     deviation_vs_exact=0.0)
            for k in range(25)
        ]
        runs.append(BenchRun(instance_id="i25", solver="apulse", scale=100,
                             alpha=0.5, reps=1, timeout_s=10, wall_times=[0.01],
                             objective=1.0, deviation_vs_exact=2.5e-5))
        report = quality_report(runs)
        assert report["optimal"] == 25
        assert report["suboptimal"] == 1
        assert report["max_deviation"] == pytest.approx(2.5e-5)
        assert len(report["rows"]) == 26

    def test_missing_reference_flagged(self):
        runs = [BenchRun(instance_id="x", solver="apulse", scale=10, alpha=0.1,
                         reps=1, timeout_s=10, wall_times=[0.01], objective=1.0)]
        report = quality_report(runs)
        assert report["rows"][0]["no_reference"] is True


def _mk_run(solver, scale, wall, outcome="ok"):
    return BenchRun(instance_id=f"{solver}-{scale}", solver=solver, scale=scale,
                    alpha=0.2, reps=1, timeout_s=600,
                    wall_times=[wall] if outcome == "ok" else [],
                    outcome=outcome, objective=1.0)


class TestCrossoverReport:
    def test_crossover_strictly_between_scales(self):
        # target slower at the smallest scale, faster from 400 on
        runs = []
        for scale, mine, other in ((100, 2.0, 1.0), (400, 1.0, 2.0), (900, 1.0, 8.0)):
            runs.append(_mk_run("apulse", scale, mine))
            runs.append(_mk_run("exact-label-setting", scale, other))
        report = crossover_report(runs)
        assert report["crossover_scale"] == 400
        assert not report["partial"]

    def test_single_scale_is_partial(self):
        runs = [_mk_run("apulse", 100, 1.0), _mk_run("exact-label-setting", 100, 2.0)]
        report = crossover_report(runs)
        assert report["partial"] is True

    def test_timed_out_baseline_counts_as_beaten(self):
        runs = []
        for scale in (100, 400, 900):
            runs.append(_mk_run("apulse", scale, 1.0))
            runs.append(_mk_run("exact-label-setting", scale, 0.5 if scale == 100 else None,
                                outcome="ok" if scale == 100 else "timeout"))
        report = crossover_report(runs)
        assert report["crossover_scale"] == 400

    def test_no_crossover_when_always_slower(self):
        runs = []
        for scale in (100, 400, 900):
            runs.append(_mk_run("apulse", scale, 5.0))
            runs.append(_mk_run("exact-label-setting", scale, 1.0))
        assert crossover_report(runs)["crossover_scale"] is None


class TestOutputs:
    def test_csv_round_trip_means(self, small_runs, tmp_path):
        path = tmp_path / "runs.csv"
        write_csv(small_runs, path)
        with open(path) as fh:
            rows = list(csv.DictReader(fh))
        assert set(rows[0]) == {"instance_id", "solver", "rep", "wall_time_s",
                                "outcome", "objective", "deviation", "labels_popped"}
        # reported means must be recomputable from the raw CSV (warmup rep 0 excluded)
        for run in small_runs:
            walls = [float(r["wall_time_s"]) for r in rows
                     if r["instance_id"] == run.instance_id
                     and r["solver"] == run.solver and r["rep"] != "0"]
            assert statistics.fmean(walls) == pytest.approx(run.mean_wall, rel=1e-9)
        warmups = [r for r in rows if r["rep"] == "0"]
        assert len(warmups) == len(small_runs)
        assert all(r["outcome"] == "warmup" for r in warmups)

    def test_timeout_excluded_from_summary_means(self):
        ok = _mk_run("apulse", 100, 1.5)
        timed_out = _mk_run("exact-label-setting", 100, None, outcome="timeout")
        doc = summary_doc([ok, timed_out])
        cell = doc["cells"]["100"]
        assert cell["apulse"]["0.2"] == pytest.approx(1.5)
        assert cell["exact-label-setting"]["0.2"] == "timeout"

    def test_summary_file(self, small_runs, tmp_path):
        path = tmp_path / "summary.json"
        write_summary(small_runs, path)
        doc = json.loads(path.read_text())
        assert "cells" in doc and "36" in doc["cells"]

    def test_timeout_csv_row(self, tmp_path):
        run = _mk_run("apulse", 100, None, outcome="timeout")
        write_csv([run], tmp_path / "t.csv")
        with open(tmp_path / "t.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert any(r["outcome"] == "timeout" for r in rows)


class TestSuiteConstruction:
    def test_ladder_scales_and_ids(self):
        suite = ladder_suite(scales=(4, 6), alpha=0.3, seed=2)
        assert [inst.graph.n for _, inst in suite] == [16, 36]
        assert suite[0][0] == "g4x4-s2-a0.3"
        assert all(inst.alpha == 0.3 for _, inst in suite)

    def test_load_suite_file(self, tmp_path):
        graph = generate_terrain(GridSpec(width=5, height=5, seed=4,
                                          elevation_range=(90.0, 110.0)))
        inst = mk(graph, 0, 24, 0.4)
        doc = {"instances": [dict(instance_to_manifest(inst), id="demo")]}
        path = tmp_path / "suite.json"
        path.write_text(json.dumps(doc))
        suite = load_suite(path)
        assert suite[0][0] == "demo"
        assert suite[0][1].budget == pytest.approx(inst.budget)

    def test_empty_suite_rejected(self, tmp_path):
        path = tmp_path / "suite.json"
        path.write_text(json.dumps({"instances": []}))
        with pytest.raises(ValueError):
            load_suite(path)
