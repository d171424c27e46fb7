"""Pure Python/numpy reference implementations of the search kernels.

Slower than the numba twins but dependency-free at runtime; selected with
APULSE_BACKEND=python. Kept line-for-line comparable with nb_kernels so the
two stay in lockstep.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from . import (
    C_EXPANDED, C_FRONTIER, C_GOAL, C_MONOTONE, C_POPPED, C_PR_DOM,
    C_PR_FEAS, C_PR_OPT, C_PUSHED, C_RESIDUE, C_STATUS, N_COUNTERS,
    STATUS_EARLY_EXIT, STATUS_EXHAUSTED, STATUS_LIMIT,
)

INF = math.inf


def dijkstra_edge(indptr, nbrs, wts, gate, gate_on_target, source):
    """Single-source Dijkstra over a CSR adjacency with edge weights.

    gate marks nodes that may be entered. With gate_on_target the gate is
    applied to the relaxed neighbor (forward traversal enters the neighbor);
    otherwise it is applied to the expanded node (reverse traversal, where
    using any original edge means entering the expanded node).
    """
    n = len(indptr) - 1
    dist = np.full(n, INF)
    dist[source] = 0.0
    done = np.zeros(n, dtype=np.bool_)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if not gate_on_target and not gate[u]:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = nbrs[e]
            if gate_on_target and not gate[v]:
                continue
            cand = d + wts[e]
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, int(v)))
    return dist


def dijkstra_node_reverse(indptr, nbrs, node_cost, source):
    """Reverse Dijkstra where the cost of a transposed edge is the entry cost
    of the expanded node (the successor in the original orientation)."""
    n = len(indptr) - 1
    dist = np.full(n, INF)
    dist[source] = 0.0
    done = np.zeros(n, dtype=np.bool_)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        c = node_cost[u]
        if c == INF:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = nbrs[e]
            cand = d + c
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, int(v)))
    return dist


def apulse_search(indptr, dst, etime, lrisk, h_t, h_ell, start, goal,
                  budget, dt, stride, exact_mode, early_exit,
                  expansion_limit, use_feas, use_opt, use_dom):
    """Best-first label-setting loop with staged pruning.

    Labels are popped in ascending (f, g_ell, g_t, node, label id) order and
    pass through feasibility, optimality and dominance pruning. Dominance is
    per (node, time bucket) in bucketed mode and exact Pareto dominance on
    (g_ell, g_t) per node in exact mode. Returns the incumbent label id, the
    label arena and a counter vector.
    """
    lab_gell = [0.0]
    lab_gt = [0.0]
    lab_node = [int(start)]
    lab_parent = [-1]
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    counters[C_PUSHED] = 1
    counters[C_MONOTONE] = 1
    counters[C_STATUS] = STATUS_EXHAUSTED

    heap = [(0.0 + h_ell[start], 0.0, 0.0, int(start), 0)]
    visited: dict[int, float] = {}
    frontier: list[list[tuple[float, float]]] | None = None
    if exact_mode and use_dom:
        frontier = [[] for _ in range(len(indptr) - 1)]

    best_gell = INF
    best_idx = -1
    prev_f = -INF

    while heap:
        if expansion_limit > 0 and counters[C_POPPED] >= expansion_limit:
            counters[C_STATUS] = STATUS_LIMIT
            break
        f, gell, gt, v, idx = heapq.heappop(heap)
        counters[C_POPPED] += 1
        if f + 1e-12 < prev_f:
            counters[C_MONOTONE] = 0
        prev_f = f

        if use_feas and gt + h_t[v] > budget:
            counters[C_PR_FEAS] += 1
            continue
        if use_opt and f >= best_gell:
            counters[C_PR_OPT] += 1
            if early_exit:
                counters[C_STATUS] = STATUS_EARLY_EXIT
                break
            continue
        if use_dom:
            if exact_mode:
                entries = frontier[v]
                dominated = False
                for fgt, fgell in entries:
                    if fgt <= gt and fgell <= gell:
                        dominated = True
                        break
                if dominated:
                    counters[C_PR_DOM] += 1
                    continue
                kept = [(fgt, fgell) for fgt, fgell in entries
                        if not (fgt >= gt and fgell >= gell)]
                kept.append((gt, gell))
                frontier[v] = kept
                counters[C_FRONTIER] += 1
            else:
                b = int(math.floor(gt / dt))
                key = v * stride + b
                prev = visited.get(key)
                if prev is not None and gell >= prev:
                    counters[C_PR_DOM] += 1
                    continue
                visited[key] = gell

        if v == goal:
            if gt <= budget:
                # keep only improvements: with optimality pruning enabled a
                # non-improving goal label never reaches this point, and with
                # it disabled an unconditional overwrite would degrade the
                # incumbent (pops are non-decreasing in f)
                if gell < best_gell:
                    best_gell = gell
                    best_idx = idx
                    counters[C_GOAL] += 1
                else:
                    counters[C_PR_OPT] += 1
            else:
                # only reachable with feasibility pruning disabled; the budget
                # constraint itself is still enforced here
                counters[C_PR_FEAS] += 1
            continue

        counters[C_EXPANDED] += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = int(dst[e])
            lu = lrisk[u]
            if lu == INF:
                continue
            g2 = gell + lu
            t2 = gt + etime[e]
            f2 = g2 + h_ell[u]
            lab_gell.append(g2)
            lab_gt.append(t2)
            lab_node.append(u)
            lab_parent.append(idx)
            heapq.heappush(heap, (f2, g2, t2, u, len(lab_gell) - 1))
            counters[C_PUSHED] += 1

    if not exact_mode:
        counters[C_FRONTIER] = len(visited)
    counters[C_RESIDUE] = len(heap)
    return (
        best_idx,
        np.asarray(lab_gell), np.asarray(lab_gt),
        np.asarray(lab_node, dtype=np.int64), np.asarray(lab_parent, dtype=np.int64),
        counters,
    )


def exact_labeling_search(indptr, dst, etime, lrisk, h_t, start, goal,
                          budget, expansion_limit, exhaustive):
    """Classic bi-criteria label setting ordered by (g_ell, g_t).

    Per-node Pareto frontiers provide dominance pruning; the admissible h_t
    bound provides feasibility pruning. The first goal pop is optimal; with
    exhaustive=True the search keeps running until the queue empties so that
    final frontiers cover the whole feasible label space.
    """
    lab_gell = [0.0]
    lab_gt = [0.0]
    lab_node = [int(start)]
    lab_parent = [-1]
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    counters[C_PUSHED] = 1
    counters[C_MONOTONE] = 1
    counters[C_STATUS] = STATUS_EXHAUSTED

    n = len(indptr) - 1
    heap = [(0.0, 0.0, int(start), 0)]
    frontier: list[list[tuple[float, float]]] = [[] for _ in range(n)]
    live = 0
    best_gell = INF
    best_idx = -1

    while heap:
        if expansion_limit > 0 and counters[C_POPPED] >= expansion_limit:
            counters[C_STATUS] = STATUS_LIMIT
            break
        gell, gt, v, idx = heapq.heappop(heap)
        counters[C_POPPED] += 1

        if gt + h_t[v] > budget:
            counters[C_PR_FEAS] += 1
            continue
        entries = frontier[v]
        dominated = False
        for fgt, fgell in entries:
            if fgt <= gt and fgell <= gell:
                dominated = True
                break
        if dominated:
            counters[C_PR_DOM] += 1
            continue
        kept = [(fgt, fgell) for fgt, fgell in entries
                if not (fgt >= gt and fgell >= gell)]
        kept.append((gt, gell))
        live += len(kept) - len(entries)
        frontier[v] = kept

        if v == goal:
            if best_idx < 0:
                best_gell = gell
                best_idx = idx
                counters[C_GOAL] += 1
            else:
                counters[C_PR_OPT] += 1
            if not exhaustive:
                break
            continue

        counters[C_EXPANDED] += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = int(dst[e])
            lu = lrisk[u]
            if lu == INF:
                continue
            g2 = gell + lu
            t2 = gt + etime[e]
            lab_gell.append(g2)
            lab_gt.append(t2)
            lab_node.append(u)
            lab_parent.append(idx)
            heapq.heappush(heap, (g2, t2, u, len(lab_gell) - 1))
            counters[C_PUSHED] += 1

    counters[C_FRONTIER] = live
    counters[C_RESIDUE] = len(heap)
    return (
        best_idx,
        np.asarray(lab_gell), np.asarray(lab_gt),
        np.asarray(lab_node, dtype=np.int64), np.asarray(lab_parent, dtype=np.int64),
        counters,
    )
