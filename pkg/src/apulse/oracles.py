"""Independent exact solvers used as ground truth and runtime baselines.

Three routes to the same optimum, deliberately sharing as little code with
the main solver as possible:

- exact_label_setting: classic bi-criteria label setting ordered by
  (g_ell, g_t) with per-node Pareto frontiers; the first goal pop is optimal.
- constrained_astar_reference: heuristic-guided exact label setting without
  bucketing; plays the role of the plain weight-constrained A* baseline in
  runtime comparisons (a reimplementation, not the published code).
- exhaustive_enumerate: branch-and-bound enumeration of all simple paths,
  for desk-scale graphs only.

The feasibility bounds these solvers use come from local pure-Python Dijkstra
passes rather than the heuristics module, so a bug there cannot mask itself
here. score_path recomputes path metrics from raw risks (survival as a direct
product) for the same reason.
"""

from __future__ import annotations

import heapq
import math
import time
from typing import Optional

import numpy as np

from .backends import (
    C_EXPANDED, C_GOAL, C_POPPED, C_PR_DOM, C_PR_FEAS, C_PUSHED, get_kernels,
)
from .errors import (
    ExpansionLimitError, NoFeasiblePathError, OracleSizeError, UnreachableGoalError,
)
from .graph import Graph, NodeId, PathMetrics
from .solver import Label, PathSolution, Telemetry, reconstruct_path
from .terrain import Instance

INF = math.inf


def _oracle_min_time(graph: Graph, goal: NodeId) -> np.ndarray:
    """Min travel time to the goal, by plain heapq Dijkstra on the transpose."""
    dist = np.full(graph.n, INF)
    dist[goal] = 0.0
    heap = [(0.0, int(goal))]
    done = np.zeros(graph.n, dtype=bool)
    indptr, src, wts = graph.in_indptr, graph.in_src, graph.in_time
    enterable = graph.risk < 1.0
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if not enterable[u]:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = int(src[e])
            cand = d + wts[e]
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, v))
    return dist


def _oracle_min_logrisk(graph: Graph, goal: NodeId) -> np.ndarray:
    """Min remaining log-risk to the goal (excluding the node's own cost)."""
    dist = np.full(graph.n, INF)
    dist[goal] = 0.0
    heap = [(0.0, int(goal))]
    done = np.zeros(graph.n, dtype=bool)
    indptr, src = graph.in_indptr, graph.in_src
    lrisk = graph.log_risk
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        c = lrisk[u]
        if c == INF:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = int(src[e])
            cand = d + c
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, v))
    return dist


def _chain_to_solution(a_gell, a_gt, a_node, a_parent, idx: int,
                       telemetry: Telemetry, solver: str, config: dict) -> PathSolution:
    chain = []
    i = idx
    while i != -1:
        chain.append(i)
        i = int(a_parent[i])
    label: Optional[Label] = None
    for i in reversed(chain):
        g_ell = float(a_gell[i])
        label = Label(f=g_ell, g_ell=g_ell, g_t=float(a_gt[i]),
                      node=int(a_node[i]), parent=label)
    return PathSolution(
        nodes=reconstruct_path(label),
        total_time=label.g_t,
        total_log_risk=label.g_ell,
        survival=math.exp(-label.g_ell),
        telemetry=telemetry,
        solver=solver,
        config=config,
    )


def exact_label_setting(instance: Instance,
                        expansion_limit: Optional[int] = None,
                        exhaustive: bool = False,
                        backend: Optional[str] = None) -> PathSolution:
    """Bi-criteria label setting; returns the true optimum.

    With exhaustive=True the search runs to queue exhaustion (instead of
    stopping at the first goal pop) so the final per-node Pareto frontier
    sizes cover the whole feasible label space; telemetry.frontier_entries
    then reports their total.
    """
    graph = instance.graph
    start, goal, budget = instance.start, instance.goal, instance.budget
    t0 = time.perf_counter()
    h_t = _oracle_min_time(graph, goal)
    t_min = float(h_t[start])
    if math.isinf(t_min):
        raise UnreachableGoalError(start, goal)
    # same 1e-12 relative budget headroom as the main solver, so all solvers
    # share one boundary semantics
    cmp_budget = budget * (1.0 + 1e-12) if math.isfinite(budget) else budget
    if t_min > cmp_budget:
        raise NoFeasiblePathError(budget, t_min)

    k = get_kernels(backend)
    best_idx, a_gell, a_gt, a_node, a_parent, counters = k.exact_labeling_search(
        graph.out_indptr, graph.edge_dst, graph.edge_time, graph.log_risk,
        h_t, int(start), int(goal), float(cmp_budget),
        int(expansion_limit or 0), bool(exhaustive),
    )
    wall = time.perf_counter() - t0
    from .backends import C_FRONTIER, C_STATUS, STATUS_LIMIT

    telemetry = Telemetry(
        labels_pushed=int(counters[C_PUSHED]),
        labels_popped=int(counters[C_POPPED]),
        pruned_feasibility=int(counters[C_PR_FEAS]),
        pruned_optimality=0,
        pruned_bucket=int(counters[C_PR_DOM]),
        goal_updates=int(counters[C_GOAL]),
        expanded=int(counters[C_EXPANDED]),
        frontier_entries=int(counters[C_FRONTIER]),
        status="limit" if int(counters[C_STATUS]) == STATUS_LIMIT else "exhausted",
        wall_time=wall,
    )
    config = {"exhaustive": bool(exhaustive), "expansion_limit": expansion_limit}
    if int(counters[C_STATUS]) == STATUS_LIMIT:
        incumbent = None
        if int(best_idx) >= 0:
            incumbent = _chain_to_solution(a_gell, a_gt, a_node, a_parent, int(best_idx),
                                           telemetry, "exact-label-setting", config)
        raise ExpansionLimitError(int(expansion_limit or 0), incumbent)
    if int(best_idx) < 0:
        raise NoFeasiblePathError(budget, t_min)
    return _chain_to_solution(a_gell, a_gt, a_node, a_parent, int(best_idx),
                              telemetry, "exact-label-setting", config)


def constrained_astar_reference(instance: Instance,
                                expansion_limit: Optional[int] = None) -> PathSolution:
    """Exact A*-guided label setting without bucketing (pure Python).

    Ordered by f = g_ell + h_ell(node); per-node Pareto dominance; admissible
    feasibility pruning. First goal pop is optimal under the consistent
    heuristic.
    """
    graph = instance.graph
    start, goal, budget = instance.start, instance.goal, instance.budget
    t0 = time.perf_counter()
    h_t = _oracle_min_time(graph, goal)
    t_min = float(h_t[start])
    if math.isinf(t_min):
        raise UnreachableGoalError(start, goal)
    cmp_budget = budget * (1.0 + 1e-12) if math.isfinite(budget) else budget
    if t_min > cmp_budget:
        raise NoFeasiblePathError(budget, t_min)
    h_ell = _oracle_min_logrisk(graph, goal)

    indptr, dst, etime = graph.out_indptr, graph.edge_dst, graph.edge_time
    lrisk = graph.log_risk
    a_gell = [0.0]
    a_gt = [0.0]
    a_node = [int(start)]
    a_parent = [-1]
    heap = [(float(h_ell[start]), 0.0, 0.0, int(start), 0)]
    frontier: list[list[tuple[float, float]]] = [[] for _ in range(graph.n)]
    pushed, popped, pr_feas, pr_dom, expanded = 1, 0, 0, 0, 0
    best_idx = -1
    limit = int(expansion_limit or 0)

    while heap:
        if limit > 0 and popped >= limit:
            raise ExpansionLimitError(limit, None)
        f, gell, gt, v, idx = heapq.heappop(heap)
        popped += 1
        if gt + h_t[v] > cmp_budget:
            pr_feas += 1
            continue
        entries = frontier[v]
        if any(fgt <= gt and fgell <= gell for fgt, fgell in entries):
            pr_dom += 1
            continue
        frontier[v] = [(fgt, fgell) for fgt, fgell in entries
                       if not (fgt >= gt and fgell >= gell)]
        frontier[v].append((gt, gell))
        if v == goal:
            best_idx = idx
            break
        expanded += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = int(dst[e])
            lu = lrisk[u]
            if lu == INF:
                continue
            g2 = gell + lu
            t2 = gt + etime[e]
            a_gell.append(g2)
            a_gt.append(t2)
            a_node.append(u)
            a_parent.append(idx)
            heapq.heappush(heap, (g2 + h_ell[u], g2, t2, u, len(a_gell) - 1))
            pushed += 1

    wall = time.perf_counter() - t0
    telemetry = Telemetry(
        labels_pushed=pushed, labels_popped=popped,
        pruned_feasibility=pr_feas, pruned_bucket=pr_dom,
        goal_updates=1 if best_idx >= 0 else 0, expanded=expanded,
        status="exhausted", wall_time=wall,
    )
    if best_idx < 0:
        raise NoFeasiblePathError(budget, t_min)
    return _chain_to_solution(
        np.asarray(a_gell), np.asarray(a_gt),
        np.asarray(a_node, dtype=np.int64), np.asarray(a_parent, dtype=np.int64),
        best_idx, telemetry, "constrained-astar", {"expansion_limit": expansion_limit},
    )


def exhaustive_enumerate(instance: Instance, max_nodes: int = 25) -> PathSolution:
    """Enumerate all simple start->goal paths within the budget; the ultimate
    oracle, restricted to graphs of at most max_nodes nodes."""
    graph = instance.graph
    if graph.n > max_nodes:
        raise OracleSizeError(
            f"graph has {graph.n} nodes, exhaustive oracle capped at {max_nodes}"
        )
    start, goal, budget = int(instance.start), int(instance.goal), instance.budget
    adj: list[list[tuple[int, float]]] = [[] for _ in range(graph.n)]
    for i in range(graph.num_edges):
        adj[int(graph.edge_src[i])].append((int(graph.edge_dst[i]), float(graph.edge_time[i])))
    lrisk = [float(v) for v in graph.log_risk]

    t0 = time.perf_counter()
    cmp_budget = budget * (1.0 + 1e-12) if math.isfinite(budget) else budget
    best_gell = INF
    best_path: Optional[list[int]] = None
    best_time = INF
    on_path = [False] * graph.n
    path = [start]
    on_path[start] = True
    visited_paths = 0

    def dfs(u: int, gt: float, gell: float) -> None:
        nonlocal best_gell, best_path, best_time, visited_paths
        for v, t in adj[u]:
            t2 = gt + t
            if t2 > cmp_budget:
                continue
            lv = lrisk[v]
            if lv == INF:
                continue
            g2 = gell + lv
            if g2 >= best_gell:
                continue
            if v == goal:
                visited_paths += 1
                best_gell = g2
                best_time = t2
                best_path = path + [v]
                continue
            if on_path[v]:
                continue
            on_path[v] = True
            path.append(v)
            dfs(v, t2, g2)
            path.pop()
            on_path[v] = False

    if start == goal:
        best_gell, best_time, best_path = 0.0, 0.0, [start]
    else:
        dfs(start, 0.0, 0.0)
    wall = time.perf_counter() - t0

    if best_path is None:
        t_min = float(_oracle_min_time(graph, goal)[start])
        if math.isinf(t_min):
            raise UnreachableGoalError(start, goal)
        raise NoFeasiblePathError(budget, t_min)
    return PathSolution(
        nodes=best_path,
        total_time=best_time,
        total_log_risk=best_gell,
        survival=math.exp(-best_gell),
        telemetry=Telemetry(goal_updates=visited_paths, wall_time=wall),
        solver="exhaustive",
        config={"max_nodes": max_nodes},
    )


def score_path(graph: Graph, nodes) -> PathMetrics:
    """Recompute path metrics from first principles.

    Edge times come from a freshly built lookup, log-risk from the raw risk
    values, and survival from the direct product of (1 - risk) rather than
    exp(-sum); deliberately independent of graph.path_metrics.
    """
    times = {}
    for i in range(graph.num_edges):
        times[(int(graph.edge_src[i]), int(graph.edge_dst[i]))] = float(graph.edge_time[i])
    total_time_terms = []
    ell_terms = []
    survival = 1.0
    for prev, cur in zip(nodes, nodes[1:]):
        key = (int(prev), int(cur))
        if key not in times:
            raise ValueError(f"no edge between consecutive nodes {key}")
        total_time_terms.append(times[key])
        r = float(graph.risk[cur])
        survival *= 1.0 - r
        ell_terms.append(-math.log1p(-r) if r < 1.0 else INF)
    return PathMetrics(math.fsum(total_time_terms), math.fsum(ell_terms), survival)
