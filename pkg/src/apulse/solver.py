"""Budget-constrained minimum-log-risk search.

The solver runs a best-first label-setting loop ordered by
f = g_ell + h_ell(node). Every popped label passes three pruning stages:

1. feasibility — discard when g_t + h_t(node) exceeds the budget;
2. optimality — discard when f is no better than the incumbent objective;
3. dominance — in bucketed mode, keep only the best log-risk per
   (node, floor(g_t / dt)) state; in exact mode, keep per-node Pareto
   frontiers over (g_ell, g_t), which guarantees the optimal objective.

The bucket width dt is auto-tuned from the budget against a target bucket
count (default 8192), clamped below at one second. Exact multiples of dt land
in the upper bucket (plain floor).

Labels store a parent reference instead of a full path copy; the incumbent's
path is rebuilt once at the end. Cycles need no special handling: log-risk
and time are non-negative/positive, so a lap around any cycle is weakly
dominated and time-bounded.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import backends
from .backends import get_kernels, resolve_backend
from .errors import ExpansionLimitError, NoFeasiblePathError, UnreachableGoalError
from .graph import Graph, NodeId
from .heuristics import reverse_dijkstra_logrisk, reverse_dijkstra_time
from .terrain import Instance

PRUNING_STAGES = frozenset({"feasibility", "optimality", "dominance"})


def auto_tune_bucket_width(budget: float, target_buckets: int = 8192,
                           bucket_clamp: float = 1.0) -> float:
    """Bucket width max(clamp, budget / target_buckets)."""
    if not budget > 0.0:
        raise ValueError(f"budget must be positive, got {budget!r}")
    if target_buckets < 1:
        raise ValueError(f"target_buckets must be >= 1, got {target_buckets!r}")
    if not bucket_clamp > 0.0:
        raise ValueError(f"bucket_clamp must be positive, got {bucket_clamp!r}")
    return max(bucket_clamp, budget / target_buckets)


def bucket_index(g_t: float, dt: float) -> int:
    """floor(g_t / dt); exact multiples map to the upper bucket."""
    if g_t < 0.0:
        raise ValueError(f"accumulated time must be non-negative, got {g_t!r}")
    if not dt > 0.0:
        raise ValueError(f"bucket width must be positive, got {dt!r}")
    return int(math.floor(g_t / dt))


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs for :func:`solve`.

    disable_pruning exists for soundness testing: each stage can be switched
    off individually without changing the exact-mode objective (the budget
    constraint itself is still enforced at the goal). Disabling "optimality"
    also disables early exit, which is that stage's termination rule.
    """

    target_buckets: int = 8192
    bucket_clamp: float = 1.0
    mode: str = "bucketed"
    early_exit: bool = True
    node_expansion_limit: Optional[int] = None
    backend: Optional[str] = None
    disable_pruning: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.target_buckets < 1:
            raise ValueError("target_buckets must be >= 1")
        if not self.bucket_clamp > 0:
            raise ValueError("bucket_clamp must be positive")
        if self.mode not in ("bucketed", "exact"):
            raise ValueError(f"mode must be 'bucketed' or 'exact', got {self.mode!r}")
        unknown = set(self.disable_pruning) - PRUNING_STAGES
        if unknown:
            raise ValueError(f"unknown pruning stages: {sorted(unknown)}")
        if self.node_expansion_limit is not None and self.node_expansion_limit < 1:
            raise ValueError("node_expansion_limit must be >= 1 when set")
        object.__setattr__(self, "disable_pruning", frozenset(self.disable_pruning))

    @property
    def solver_name(self) -> str:
        return "apulse-exact" if self.mode == "exact" else "apulse"


@dataclass
class Telemetry:
    labels_pushed: int = 0
    labels_popped: int = 0
    pruned_feasibility: int = 0
    pruned_optimality: int = 0
    pruned_bucket: int = 0
    goal_updates: int = 0
    expanded: int = 0
    frontier_entries: int = 0
    queue_residue: int = 0
    pop_monotone: bool = True
    status: str = "exhausted"
    wall_time: float = 0.0

    def to_doc(self) -> dict:
        # wall_time is intentionally excluded: serialized solutions must be
        # byte-identical across repeated runs
        return {
            "labels_pushed": self.labels_pushed,
            "labels_popped": self.labels_popped,
            "pruned_feasibility": self.pruned_feasibility,
            "pruned_optimality": self.pruned_optimality,
            "pruned_bucket": self.pruned_bucket,
            "goal_updates": self.goal_updates,
            "expanded": self.expanded,
        }


_STATUS_NAMES = {
    backends.STATUS_EXHAUSTED: "exhausted",
    backends.STATUS_EARLY_EXIT: "early_exit",
    backends.STATUS_LIMIT: "limit",
}


def _telemetry_from_counters(counters, wall: float) -> Telemetry:
    return Telemetry(
        labels_pushed=int(counters[backends.C_PUSHED]),
        labels_popped=int(counters[backends.C_POPPED]),
        pruned_feasibility=int(counters[backends.C_PR_FEAS]),
        pruned_optimality=int(counters[backends.C_PR_OPT]),
        pruned_bucket=int(counters[backends.C_PR_DOM]),
        goal_updates=int(counters[backends.C_GOAL]),
        expanded=int(counters[backends.C_EXPANDED]),
        frontier_entries=int(counters[backends.C_FRONTIER]),
        queue_residue=int(counters[backends.C_RESIDUE]),
        pop_monotone=bool(counters[backends.C_MONOTONE]),
        status=_STATUS_NAMES[int(counters[backends.C_STATUS])],
        wall_time=wall,
    )


@dataclass(frozen=True)
class Label:
    """A partial-path search state; parent links chain back to the start."""

    f: float
    g_ell: float
    g_t: float
    node: NodeId
    parent: Optional["Label"] = None


def reconstruct_path(label: Label) -> list[NodeId]:
    """Forward node sequence from the start label to this label."""
    nodes = []
    cur: Optional[Label] = label
    while cur is not None:
        nodes.append(cur.node)
        cur = cur.parent
    nodes.reverse()
    return nodes


@dataclass
class PathSolution:
    """A feasible path with its metrics and search telemetry."""

    nodes: list[NodeId]
    total_time: float
    total_log_risk: float
    survival: float
    telemetry: Telemetry
    solver: str
    config: dict

    def to_doc(self) -> dict:
        return {
            "solver": self.solver,
            "nodes": [int(v) for v in self.nodes],
            "total_time": float(self.total_time),
            "total_log_risk": float(self.total_log_risk),
            "survival": float(self.survival),
            "telemetry": self.telemetry.to_doc(),
            "config": self.config,
        }

    def to_json_bytes(self) -> bytes:
        """Canonical serialization; identical solves produce identical bytes."""
        return (json.dumps(self.to_doc(), separators=(", ", ": ")) + "\n").encode("utf-8")


def _config_doc(config: SolverConfig) -> dict:
    return {
        "mode": config.mode,
        "target_buckets": int(config.target_buckets),
        "bucket_clamp": float(config.bucket_clamp),
        "early_exit": bool(config.early_exit),
        "node_expansion_limit": config.node_expansion_limit,
        "backend": resolve_backend(config.backend),
    }


def _label_chain(h_ell, a_gell, a_gt, a_node, a_parent, idx: int) -> Label:
    chain = []
    i = idx
    while i != -1:
        chain.append(i)
        i = int(a_parent[i])
    label: Optional[Label] = None
    for i in reversed(chain):
        node = int(a_node[i])
        g_ell = float(a_gell[i])
        label = Label(
            f=g_ell + float(h_ell[node]),
            g_ell=g_ell,
            g_t=float(a_gt[i]),
            node=node,
            parent=label,
        )
    return label


def solve_problem(graph: Graph, start: NodeId, goal: NodeId, budget: float,
                  config: Optional[SolverConfig] = None) -> PathSolution:
    """Solve min total log-risk subject to total time <= budget.

    Raises UnreachableGoalError when no path exists at any budget,
    NoFeasiblePathError when the budget is below the minimum travel time, and
    ExpansionLimitError (carrying the best incumbent) when the configured
    expansion cap is hit first.
    """
    if config is None:
        config = SolverConfig()
    for v, what in ((start, "start"), (goal, "goal")):
        if not (0 <= v < graph.n):
            raise ValueError(f"{what} node {v} out of range")
    budget = float(budget)
    if math.isnan(budget):
        raise ValueError("budget must not be NaN")

    t0 = time.perf_counter()
    if start == goal and budget >= 0.0:
        return PathSolution(
            nodes=[int(start)], total_time=0.0, total_log_risk=0.0, survival=1.0,
            telemetry=Telemetry(labels_pushed=1, labels_popped=1, goal_updates=1,
                                wall_time=time.perf_counter() - t0),
            solver=config.solver_name, config=_config_doc(config),
        )
    h_t = reverse_dijkstra_time(graph, goal, backend=config.backend)
    t_min = float(h_t[start])
    if math.isinf(t_min):
        raise UnreachableGoalError(start, goal)
    # budget comparisons get 1e-12 relative headroom so that boundary budgets
    # (alpha = 0) survive forward/reverse summation-order differences; well
    # inside the 1e-9 feasibility tolerance of returned paths
    cmp_budget = budget * (1.0 + 1e-12) if math.isfinite(budget) else budget
    if t_min > cmp_budget:
        raise NoFeasiblePathError(budget, t_min)
    h_ell = reverse_dijkstra_logrisk(graph, goal, backend=config.backend)

    dt = auto_tune_bucket_width(budget, config.target_buckets, config.bucket_clamp) \
        if math.isfinite(budget) else math.inf
    if math.isfinite(budget) and math.isfinite(dt):
        stride = int(budget // dt) + 2
    else:
        stride = 1

    use_feas = "feasibility" not in config.disable_pruning
    use_opt = "optimality" not in config.disable_pruning
    use_dom = "dominance" not in config.disable_pruning
    early = bool(config.early_exit and use_opt)
    limit = int(config.node_expansion_limit or 0)

    k = get_kernels(config.backend)
    best_idx, a_gell, a_gt, a_node, a_parent, counters = k.apulse_search(
        graph.out_indptr, graph.edge_dst, graph.edge_time, graph.log_risk,
        h_t, h_ell, int(start), int(goal), cmp_budget, float(dt), stride,
        config.mode == "exact", early, limit, use_feas, use_opt, use_dom,
    )
    wall = time.perf_counter() - t0
    telemetry = _telemetry_from_counters(counters, wall)

    solution = None
    if int(best_idx) >= 0:
        label = _label_chain(h_ell, a_gell, a_gt, a_node, a_parent, int(best_idx))
        total_ell = label.g_ell
        solution = PathSolution(
            nodes=reconstruct_path(label),
            total_time=label.g_t,
            total_log_risk=total_ell,
            survival=math.exp(-total_ell),
            telemetry=telemetry,
            solver=config.solver_name,
            config=_config_doc(config),
        )
    if telemetry.status == "limit":
        raise ExpansionLimitError(limit, solution)
    if solution is None:
        # reachable and budget >= t_min, so the kernel must find a path;
        # kept as a guard against inconsistent inputs
        raise NoFeasiblePathError(budget, t_min)
    return solution


def solve(instance: Instance, config: Optional[SolverConfig] = None) -> PathSolution:
    """Solve a generated instance (see :func:`solve_problem`)."""
    return solve_problem(instance.graph, instance.start, instance.goal,
                         instance.budget, config)


@dataclass
class SweepEntry:
    """One budget's outcome within a sweep; errors never abort the sweep."""

    budget: float
    solution: Optional[PathSolution] = None
    error: Optional[str] = None
    t_min: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.solution is not None and self.error is None


def budget_sweep(graph: Graph, start: NodeId, goal: NodeId,
                 budgets: Sequence[float],
                 config: Optional[SolverConfig] = None) -> list[SweepEntry]:
    """Independent solves for each budget, returned in ascending budget order."""
    if len(budgets) == 0:
        raise ValueError("budgets must be non-empty")
    entries = []
    for b in sorted(float(x) for x in budgets):
        try:
            entries.append(SweepEntry(budget=b, solution=solve_problem(graph, start, goal, b, config)))
        except NoFeasiblePathError as exc:
            entries.append(SweepEntry(budget=b, error="no_feasible_path", t_min=exc.t_min))
        except UnreachableGoalError:
            entries.append(SweepEntry(budget=b, error="unreachable_goal"))
        except ExpansionLimitError as exc:
            entries.append(SweepEntry(budget=b, solution=exc.incumbent, error="expansion_limit"))
    return entries


def sweep_entry_to_doc(entry: SweepEntry) -> dict:
    doc: dict = {"budget": float(entry.budget), "status": "ok" if entry.ok else "error"}
    if entry.solution is not None:
        doc["solution"] = entry.solution.to_doc()
    if entry.error is not None:
        doc["status"] = entry.error
    if entry.t_min is not None:
        doc["t_min"] = float(entry.t_min)
    return doc
