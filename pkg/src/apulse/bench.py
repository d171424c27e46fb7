"""Benchmark harness: repeated timed runs, quality and crossover reports.

Runs a suite of instances against a set of solvers with per-run isolation.
Each (instance, solver) cell performs one warm-up repetition (recorded as
rep 0, excluded from means) followed by the timed repetitions. Timing wraps
the solve call only: heuristic precomputation is inside, graph construction
is not. A repetition whose wall time exceeds the timeout marks the whole run
as a timeout; enforcement is post-hoc since solves are single-process, with
an optional expansion cap as a proactive bound (also reported as timeout).

Raw results go to CSV, aggregate means to a summary JSON keyed by
scale x solver x alpha, and optional SVG plots when matplotlib is available.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from . import oracles
from .errors import ExpansionLimitError, NoFeasiblePathError, UnreachableGoalError
from .solver import PathSolution, SolverConfig, solve
from .terrain import GridSpec, Instance, generate_terrain, instance_from_manifest, make_instance


def _solve_apulse(instance: Instance, limit: Optional[int]) -> PathSolution:
    return solve(instance, SolverConfig(node_expansion_limit=limit))


def _solve_apulse_exact(instance: Instance, limit: Optional[int]) -> PathSolution:
    return solve(instance, SolverConfig(mode="exact", node_expansion_limit=limit))


def _solve_exact_labeling(instance: Instance, limit: Optional[int]) -> PathSolution:
    return oracles.exact_label_setting(instance, expansion_limit=limit)


def _solve_constrained_astar(instance: Instance, limit: Optional[int]) -> PathSolution:
    return oracles.constrained_astar_reference(instance, expansion_limit=limit)


SOLVERS: dict[str, Callable[[Instance, Optional[int]], PathSolution]] = {
    "apulse": _solve_apulse,
    "apulse-exact": _solve_apulse_exact,
    "exact-label-setting": _solve_exact_labeling,
    "constrained-astar": _solve_constrained_astar,
}

REFERENCE_SOLVER = "exact-label-setting"


@dataclass
class BenchConfig:
    reps: int = 5
    timeout_s: float = 600.0
    warmup: bool = True
    expansion_limit: Optional[int] = None

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not self.timeout_s > 0:
            raise ValueError("timeout_s must be positive")


@dataclass
class BenchRun:
    """Outcome of one (instance, solver) cell."""

    instance_id: str
    solver: str
    scale: int
    alpha: float
    reps: int
    timeout_s: float
    wall_times: list = field(default_factory=list)
    warmup_time: Optional[float] = None
    outcome: str = "ok"  # ok | timeout | infeasible | error
    objective: Optional[float] = None
    deviation_vs_exact: Optional[float] = None
    labels_popped: Optional[int] = None
    error: Optional[str] = None

    @property
    def mean_wall(self) -> Optional[float]:
        if self.outcome != "ok" or not self.wall_times:
            return None
        return statistics.fmean(self.wall_times)


def _relative_deviation(objective: float, reference: float) -> float:
    return abs(objective - reference) / max(1.0, abs(reference))


def run_suite(instances: Sequence[tuple[str, Instance]],
              solvers: Sequence[str],
              config: Optional[BenchConfig] = None) -> list[BenchRun]:
    """Cartesian execution of instances x solvers, in deterministic order.

    Individual failures are recorded in their BenchRun and never abort the
    suite. Deviations are computed against the exact label-setting optimum,
    reusing that solver's own benchmark result when it is part of the suite.
    """
    if not instances:
        raise ValueError("instances must be non-empty")
    if not solvers:
        raise ValueError("solvers must be non-empty")
    for name in solvers:
        if name not in SOLVERS:
            raise ValueError(f"unknown solver {name!r}; known: {sorted(SOLVERS)}")
    config = config or BenchConfig()

    runs: list[BenchRun] = []
    references: dict[str, Optional[float]] = {}
    for instance_id, instance in instances:
        for name in solvers:
            run = _run_cell(instance_id, instance, name, config)
            runs.append(run)
            if name == REFERENCE_SOLVER and run.outcome == "ok":
                references[instance_id] = run.objective

    by_id = dict(instances)
    for run in runs:
        if run.outcome != "ok":
            continue
        ref = _reference_for(run.instance_id, by_id, references, config)
        if ref is None:
            continue
        run.deviation_vs_exact = _relative_deviation(run.objective, ref)
    return runs


def _run_cell(instance_id: str, instance: Instance, solver_name: str,
              config: BenchConfig) -> BenchRun:
    fn = SOLVERS[solver_name]
    run = BenchRun(
        instance_id=instance_id, solver=solver_name,
        scale=instance.graph.n, alpha=instance.alpha,
        reps=config.reps, timeout_s=config.timeout_s,
    )
    total_reps = config.reps + (1 if config.warmup else 0)
    for rep in range(total_reps):
        is_warmup = config.warmup and rep == 0
        t0 = time.perf_counter()
        try:
            solution = fn(instance, config.expansion_limit)
        except NoFeasiblePathError as exc:
            run.outcome = "infeasible"
            run.error = str(exc)
            return run
        except UnreachableGoalError as exc:
            run.outcome = "infeasible"
            run.error = str(exc)
            return run
        except ExpansionLimitError as exc:
            run.outcome = "timeout"
            run.error = str(exc)
            return run
        except Exception as exc:  # recorded, never aborts the suite
            run.outcome = "error"
            run.error = f"{type(exc).__name__}: {exc}"
            return run
        wall = time.perf_counter() - t0
        if is_warmup:
            run.warmup_time = wall
        else:
            run.wall_times.append(wall)
        run.objective = solution.total_log_risk
        run.labels_popped = solution.telemetry.labels_popped
        if wall > config.timeout_s:
            run.outcome = "timeout"
            run.error = f"repetition exceeded timeout ({wall:.1f}s > {config.timeout_s:g}s)"
            return run
    return run


def _reference_for(instance_id: str, by_id: dict, references: dict,
                   config: BenchConfig) -> Optional[float]:
    if instance_id not in references:
        try:
            t0 = time.perf_counter()
            sol = oracles.exact_label_setting(by_id[instance_id],
                                              expansion_limit=config.expansion_limit)
            references[instance_id] = (
                sol.total_log_risk if time.perf_counter() - t0 <= config.timeout_s else None
            )
        except Exception:
            references[instance_id] = None
    return references[instance_id]


def run_quality_parallel(instances: Sequence[tuple[str, Instance]],
                         solvers: Sequence[str],
                         config: Optional[BenchConfig] = None,
                         max_workers: int = 4) -> list[BenchRun]:
    """Opt-in parallel mode for quality-only sweeps.

    Solves run concurrently (graphs are immutable and solver state is per
    call), so wall times would be contended and are not recorded; outcomes,
    objectives and deviations are. Result order matches the sequential
    instances x solvers order regardless of completion order.
    """
    from concurrent.futures import ThreadPoolExecutor

    if not instances:
        raise ValueError("instances must be non-empty")
    for name in solvers:
        if name not in SOLVERS:
            raise ValueError(f"unknown solver {name!r}; known: {sorted(SOLVERS)}")
    config = config or BenchConfig()

    def cell(job: tuple[str, Instance, str]) -> BenchRun:
        instance_id, instance, solver_name = job
        run = BenchRun(instance_id=instance_id, solver=solver_name,
                       scale=instance.graph.n, alpha=instance.alpha,
                       reps=0, timeout_s=config.timeout_s)
        try:
            solution = SOLVERS[solver_name](instance, config.expansion_limit)
        except (NoFeasiblePathError, UnreachableGoalError) as exc:
            run.outcome = "infeasible"
            run.error = str(exc)
        except ExpansionLimitError as exc:
            run.outcome = "timeout"
            run.error = str(exc)
        except Exception as exc:
            run.outcome = "error"
            run.error = f"{type(exc).__name__}: {exc}"
        else:
            run.objective = solution.total_log_risk
            run.labels_popped = solution.telemetry.labels_popped
        return run

    jobs = [(iid, inst, name) for iid, inst in instances for name in solvers]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        runs = list(pool.map(cell, jobs))

    references: dict[str, Optional[float]] = {
        run.instance_id: run.objective
        for run in runs
        if run.solver == REFERENCE_SOLVER and run.outcome == "ok"
    }
    by_id = dict(instances)
    for run in runs:
        if run.outcome != "ok":
            continue
        ref = _reference_for(run.instance_id, by_id, references, config)
        if ref is not None:
            run.deviation_vs_exact = _relative_deviation(run.objective, ref)
    return runs


# -- reports -------------------------------------------------------------------

def quality_report(runs: Sequence[BenchRun], solver: str = "apulse",
                   tolerance: float = 1e-9) -> dict:
    """Per-instance optimality of one solver against the exact reference."""
    rows = []
    optimal = suboptimal = 0
    max_dev = 0.0
    for run in runs:
        if run.solver != solver:
            continue
        row = {"instance_id": run.instance_id, "outcome": run.outcome,
               "objective": run.objective}
        if run.outcome == "ok" and run.deviation_vs_exact is not None:
            row["deviation"] = run.deviation_vs_exact
            row["optimal"] = run.deviation_vs_exact <= tolerance
            if row["optimal"]:
                optimal += 1
            else:
                suboptimal += 1
            max_dev = max(max_dev, run.deviation_vs_exact)
        else:
            row["no_reference"] = True
        rows.append(row)
    return {
        "solver": solver,
        "rows": rows,
        "optimal": optimal,
        "suboptimal": suboptimal,
        "max_deviation": max_dev,
    }


def crossover_report(runs: Sequence[BenchRun], target: str = "apulse") -> dict:
    """Runtime-vs-scale series per solver plus the estimated crossover scale.

    The crossover is the smallest scale at which the target solver's mean
    wall time beats every other solver's (a solver with no successful runs at
    a scale counts as beaten). Marked partial below 3 scales or 2 solvers.
    """
    by_solver: dict[str, dict[int, list[float]]] = {}
    for run in runs:
        mean = run.mean_wall
        cell = by_solver.setdefault(run.solver, {}).setdefault(run.scale, [])
        if mean is not None:
            cell.append(mean)
    series = {
        solver: sorted(
            (scale, statistics.fmean(means) if means else None)
            for scale, means in scales.items()
        )
        for solver, scales in by_solver.items()
    }
    scales = sorted({run.scale for run in runs})
    partial = len(scales) < 3 or len(by_solver) < 2

    crossover = None
    if target in by_solver and len(by_solver) >= 2:
        for scale in scales:
            target_means = by_solver[target].get(scale, [])
            if not target_means:
                continue
            target_mean = statistics.fmean(target_means)
            beats_all = True
            for solver, per_scale in by_solver.items():
                if solver == target or scale not in per_scale:
                    continue
                means = per_scale[scale]
                other = statistics.fmean(means) if means else math.inf
                if target_mean >= other:
                    beats_all = False
                    break
            if beats_all:
                crossover = scale
                break
    return {"target": target, "series": series, "scales": scales,
            "crossover_scale": crossover, "partial": partial}


# -- persistence -----------------------------------------------------------------

CSV_COLUMNS = ("instance_id", "solver", "rep", "wall_time_s", "outcome",
               "objective", "deviation", "labels_popped")


def write_csv(runs: Sequence[BenchRun], path: Union[str, Path]) -> None:
    """One row per repetition; warm-up repetitions appear as rep 0."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for run in runs:
            reps: list[tuple[int, Optional[float], str]] = []
            if run.warmup_time is not None:
                reps.append((0, run.warmup_time, "warmup"))
            for i, wall in enumerate(run.wall_times, start=1):
                reps.append((i, wall, run.outcome if i == len(run.wall_times) else "ok"))
            if run.outcome != "ok" and not any(o == run.outcome for _, _, o in reps):
                reps.append((len(run.wall_times) + 1, None, run.outcome))
            if not reps:
                reps.append((1, None, run.outcome))
            for rep, wall, outcome in reps:
                writer.writerow([
                    run.instance_id, run.solver, rep,
                    "" if wall is None else repr(wall),
                    outcome,
                    "" if run.objective is None else repr(run.objective),
                    "" if run.deviation_vs_exact is None else repr(run.deviation_vs_exact),
                    "" if run.labels_popped is None else run.labels_popped,
                ])


def summary_doc(runs: Sequence[BenchRun]) -> dict:
    """Mean wall time per scale x solver x alpha; timeouts are explicit."""
    cells: dict[str, dict[str, dict[str, object]]] = {}
    for run in runs:
        scale_key = str(run.scale)
        solver_cell = cells.setdefault(scale_key, {}).setdefault(run.solver, {})
        alpha_key = f"{run.alpha:g}"
        if run.outcome == "ok":
            mean = run.mean_wall
            solver_cell[alpha_key] = None if mean is None else round(mean, 6)
        else:
            solver_cell[alpha_key] = run.outcome
    return {"cells": cells}


def write_summary(runs: Sequence[BenchRun], path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(summary_doc(runs), indent=1, sort_keys=True) + "\n")


def write_plots(runs: Sequence[BenchRun], out_dir: Union[str, Path]) -> list[Path]:
    """Runtime-vs-scale SVG; skipped silently when matplotlib is missing."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return []
    report = crossover_report(runs)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for solver, points in sorted(report["series"].items()):
        xs = [s for s, m in points if m is not None]
        ys = [m for _, m in points if m is not None]
        if xs:
            ax.plot(xs, ys, marker="o", label=solver)
    if report["crossover_scale"] is not None:
        ax.axvline(report["crossover_scale"], linestyle="--", color="gray",
                   label=f"crossover @ {report['crossover_scale']}")
    ax.set_xlabel("graph size (nodes)")
    ax.set_ylabel("mean wall time (s)")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(out_dir) / "runtime_vs_scale.svg"
    fig.savefig(out)
    plt.close(fig)
    return [out]


# -- suite construction ----------------------------------------------------------

def ladder_suite(scales: Sequence[int] = (10, 20, 30, 50, 70, 100),
                 alpha: float = 0.2, seed: int = 5,
                 risk_hotspots: int = 4) -> list[tuple[str, Instance]]:
    """Corner-to-corner instances on square grids of increasing size."""
    suite = []
    for side in scales:
        spec = GridSpec(width=side, height=side, seed=seed, risk_hotspots=risk_hotspots)
        graph = generate_terrain(spec)
        inst = make_instance(graph, 0, graph.n - 1, alpha)
        suite.append((f"g{side}x{side}-s{seed}-a{alpha:g}", inst))
    return suite


def load_suite(path: Union[str, Path]) -> list[tuple[str, Instance]]:
    """Suite JSON: {"instances": [{"id": ..., <instance manifest>}, ...]}.

    Graph paths inside manifests resolve relative to the suite file.
    """
    path = Path(path)
    doc = json.loads(path.read_text())
    entries = doc.get("instances")
    if not isinstance(entries, list) or not entries:
        raise ValueError("suite must contain a non-empty 'instances' array")
    suite = []
    for i, entry in enumerate(entries):
        instance = instance_from_manifest(entry, base_dir=path.parent)
        suite.append((str(entry.get("id", f"instance-{i}")), instance))
    return suite
