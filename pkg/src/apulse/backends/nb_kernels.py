"""Numba-compiled search kernels.

These mirror py_kernels exactly: same pruning order, same tie-breaking
(f, g_ell, g_t, node, label id), same float operation order. The label arena
and the binary heap live in flat arrays that grow by doubling; per-node
Pareto frontiers (exact mode) are singly-linked lists over a shared pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.core import types
from numba.typed import Dict

from . import (
    C_EXPANDED, C_FRONTIER, C_GOAL, C_MONOTONE, C_POPPED, C_PR_DOM,
    C_PR_FEAS, C_PR_OPT, C_PUSHED, C_RESIDUE, C_STATUS, N_COUNTERS,
    STATUS_EARLY_EXIT, STATUS_EXHAUSTED, STATUS_LIMIT,
)

INF = np.inf


@njit(cache=True)
def dijkstra_edge(indptr, nbrs, wts, gate, gate_on_target, source):
    n = len(indptr) - 1
    m = len(nbrs)
    dist = np.full(n, INF)
    dist[source] = 0.0
    done = np.zeros(n, dtype=np.uint8)
    # each edge relaxes at most once, so the heap never exceeds m + 1
    hk = np.empty(m + 2)
    hv = np.empty(m + 2, dtype=np.int64)
    hk[0] = 0.0
    hv[0] = source
    hsize = 1
    while hsize > 0:
        d = hk[0]
        u = hv[0]
        hsize -= 1
        hk[0] = hk[hsize]
        hv[0] = hv[hsize]
        pos = 0
        while True:
            l = 2 * pos + 1
            if l >= hsize:
                break
            r = l + 1
            m2 = l
            if r < hsize and (hk[r] < hk[l] or (hk[r] == hk[l] and hv[r] < hv[l])):
                m2 = r
            if hk[m2] < hk[pos] or (hk[m2] == hk[pos] and hv[m2] < hv[pos]):
                hk[pos], hk[m2] = hk[m2], hk[pos]
                hv[pos], hv[m2] = hv[m2], hv[pos]
                pos = m2
            else:
                break
        if done[u]:
            continue
        done[u] = 1
        if not gate_on_target and gate[u] == 0:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = nbrs[e]
            if gate_on_target and gate[v] == 0:
                continue
            cand = d + wts[e]
            if cand < dist[v]:
                dist[v] = cand
                hk[hsize] = cand
                hv[hsize] = v
                pos = hsize
                hsize += 1
                while pos > 0:
                    par = (pos - 1) // 2
                    if hk[pos] < hk[par] or (hk[pos] == hk[par] and hv[pos] < hv[par]):
                        hk[pos], hk[par] = hk[par], hk[pos]
                        hv[pos], hv[par] = hv[par], hv[pos]
                        pos = par
                    else:
                        break
    return dist


@njit(cache=True)
def dijkstra_node_reverse(indptr, nbrs, node_cost, source):
    n = len(indptr) - 1
    m = len(nbrs)
    dist = np.full(n, INF)
    dist[source] = 0.0
    done = np.zeros(n, dtype=np.uint8)
    hk = np.empty(m + 2)
    hv = np.empty(m + 2, dtype=np.int64)
    hk[0] = 0.0
    hv[0] = source
    hsize = 1
    while hsize > 0:
        d = hk[0]
        u = hv[0]
        hsize -= 1
        hk[0] = hk[hsize]
        hv[0] = hv[hsize]
        pos = 0
        while True:
            l = 2 * pos + 1
            if l >= hsize:
                break
            r = l + 1
            m2 = l
            if r < hsize and (hk[r] < hk[l] or (hk[r] == hk[l] and hv[r] < hv[l])):
                m2 = r
            if hk[m2] < hk[pos] or (hk[m2] == hk[pos] and hv[m2] < hv[pos]):
                hk[pos], hk[m2] = hk[m2], hk[pos]
                hv[pos], hv[m2] = hv[m2], hv[pos]
                pos = m2
            else:
                break
        if done[u]:
            continue
        done[u] = 1
        c = node_cost[u]
        if c == INF:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = nbrs[e]
            cand = d + c
            if cand < dist[v]:
                dist[v] = cand
                hk[hsize] = cand
                hv[hsize] = v
                pos = hsize
                hsize += 1
                while pos > 0:
                    par = (pos - 1) // 2
                    if hk[pos] < hk[par] or (hk[pos] == hk[par] and hv[pos] < hv[par]):
                        hk[pos], hk[par] = hk[par], hk[pos]
                        hv[pos], hv[par] = hv[par], hv[pos]
                        pos = par
                    else:
                        break
    return dist


@njit(cache=True, inline="always")
def _lab_lt(hf, hg, ht, hv, hi, a, b):
    if hf[a] != hf[b]:
        return hf[a] < hf[b]
    if hg[a] != hg[b]:
        return hg[a] < hg[b]
    if ht[a] != ht[b]:
        return ht[a] < ht[b]
    if hv[a] != hv[b]:
        return hv[a] < hv[b]
    return hi[a] < hi[b]


@njit(cache=True, inline="always")
def _lab_swap(hf, hg, ht, hv, hi, a, b):
    hf[a], hf[b] = hf[b], hf[a]
    hg[a], hg[b] = hg[b], hg[a]
    ht[a], ht[b] = ht[b], ht[a]
    hv[a], hv[b] = hv[b], hv[a]
    hi[a], hi[b] = hi[b], hi[a]


@njit(cache=True)
def _lab_up(hf, hg, ht, hv, hi, pos):
    while pos > 0:
        par = (pos - 1) // 2
        if _lab_lt(hf, hg, ht, hv, hi, pos, par):
            _lab_swap(hf, hg, ht, hv, hi, pos, par)
            pos = par
        else:
            break


@njit(cache=True)
def _lab_down(hf, hg, ht, hv, hi, size):
    pos = 0
    while True:
        l = 2 * pos + 1
        if l >= size:
            break
        best = l
        r = l + 1
        if r < size and _lab_lt(hf, hg, ht, hv, hi, r, l):
            best = r
        if _lab_lt(hf, hg, ht, hv, hi, best, pos):
            _lab_swap(hf, hg, ht, hv, hi, best, pos)
            pos = best
        else:
            break


@njit(cache=True)
def apulse_search(indptr, dst, etime, lrisk, h_t, h_ell, start, goal,
                  budget, dt, stride, exact_mode, early_exit,
                  expansion_limit, use_feas, use_opt, use_dom):
    n = len(indptr) - 1
    cap = 1024
    lab_gell = np.empty(cap)
    lab_gt = np.empty(cap)
    lab_node = np.empty(cap, dtype=np.int64)
    lab_parent = np.empty(cap, dtype=np.int64)
    lab_gell[0] = 0.0
    lab_gt[0] = 0.0
    lab_node[0] = start
    lab_parent[0] = -1
    nlab = 1

    hcap = 1024
    hf = np.empty(hcap)
    hg = np.empty(hcap)
    ht = np.empty(hcap)
    hv = np.empty(hcap, dtype=np.int64)
    hi = np.empty(hcap, dtype=np.int64)
    hf[0] = 0.0 + h_ell[start]
    hg[0] = 0.0
    ht[0] = 0.0
    hv[0] = start
    hi[0] = 0
    hsize = 1

    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    counters[C_PUSHED] = 1
    counters[C_MONOTONE] = 1
    counters[C_STATUS] = STATUS_EXHAUSTED

    visited = Dict.empty(key_type=types.int64, value_type=types.float64)

    fr_head = np.full(n, -1, dtype=np.int64)
    fcap = 1024
    fr_gt = np.empty(fcap)
    fr_gell = np.empty(fcap)
    fr_next = np.empty(fcap, dtype=np.int64)
    fr_n = 0

    best_gell = INF
    best_idx = np.int64(-1)
    prev_f = -INF

    while hsize > 0:
        if expansion_limit > 0 and counters[C_POPPED] >= expansion_limit:
            counters[C_STATUS] = STATUS_LIMIT
            break
        f = hf[0]
        gell = hg[0]
        gt = ht[0]
        v = hv[0]
        idx = hi[0]
        hsize -= 1
        hf[0] = hf[hsize]
        hg[0] = hg[hsize]
        ht[0] = ht[hsize]
        hv[0] = hv[hsize]
        hi[0] = hi[hsize]
        _lab_down(hf, hg, ht, hv, hi, hsize)

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
                i = fr_head[v]
                dominated = False
                while i != -1:
                    if fr_gt[i] <= gt and fr_gell[i] <= gell:
                        dominated = True
                        break
                    i = fr_next[i]
                if dominated:
                    counters[C_PR_DOM] += 1
                    continue
                prev = np.int64(-1)
                i = fr_head[v]
                while i != -1:
                    nxt = fr_next[i]
                    if fr_gt[i] >= gt and fr_gell[i] >= gell:
                        if prev == -1:
                            fr_head[v] = nxt
                        else:
                            fr_next[prev] = nxt
                    else:
                        prev = i
                    i = nxt
                if fr_n == fcap:
                    fcap2 = fcap * 2
                    t0 = np.empty(fcap2)
                    t0[:fcap] = fr_gt
                    fr_gt = t0
                    t1 = np.empty(fcap2)
                    t1[:fcap] = fr_gell
                    fr_gell = t1
                    t2 = np.empty(fcap2, dtype=np.int64)
                    t2[:fcap] = fr_next
                    fr_next = t2
                    fcap = fcap2
                fr_gt[fr_n] = gt
                fr_gell[fr_n] = gell
                fr_next[fr_n] = fr_head[v]
                fr_head[v] = fr_n
                fr_n += 1
                counters[C_FRONTIER] += 1
            else:
                b = np.int64(np.floor(gt / dt))
                key = v * stride + b
                if key in visited and gell >= visited[key]:
                    counters[C_PR_DOM] += 1
                    continue
                visited[key] = gell

        if v == goal:
            if gt <= budget:
                # improvements only: equivalent to the unconditional update
                # when optimality pruning is active, and required for a sound
                # incumbent when that stage is disabled
                if gell < best_gell:
                    best_gell = gell
                    best_idx = idx
                    counters[C_GOAL] += 1
                else:
                    counters[C_PR_OPT] += 1
            else:
                counters[C_PR_FEAS] += 1
            continue

        counters[C_EXPANDED] += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = dst[e]
            lu = lrisk[u]
            if lu == INF:
                continue
            g2 = gell + lu
            t2v = gt + etime[e]
            f2 = g2 + h_ell[u]
            if nlab == cap:
                cap2 = cap * 2
                a0 = np.empty(cap2)
                a0[:cap] = lab_gell
                lab_gell = a0
                a1 = np.empty(cap2)
                a1[:cap] = lab_gt
                lab_gt = a1
                a2 = np.empty(cap2, dtype=np.int64)
                a2[:cap] = lab_node
                lab_node = a2
                a3 = np.empty(cap2, dtype=np.int64)
                a3[:cap] = lab_parent
                lab_parent = a3
                cap = cap2
            lab_gell[nlab] = g2
            lab_gt[nlab] = t2v
            lab_node[nlab] = u
            lab_parent[nlab] = idx
            if hsize == hcap:
                hcap2 = hcap * 2
                b0 = np.empty(hcap2)
                b0[:hcap] = hf
                hf = b0
                b1 = np.empty(hcap2)
                b1[:hcap] = hg
                hg = b1
                b2 = np.empty(hcap2)
                b2[:hcap] = ht
                ht = b2
                b3 = np.empty(hcap2, dtype=np.int64)
                b3[:hcap] = hv
                hv = b3
                b4 = np.empty(hcap2, dtype=np.int64)
                b4[:hcap] = hi
                hi = b4
                hcap = hcap2
            hf[hsize] = f2
            hg[hsize] = g2
            ht[hsize] = t2v
            hv[hsize] = u
            hi[hsize] = nlab
            _lab_up(hf, hg, ht, hv, hi, hsize)
            hsize += 1
            nlab += 1
            counters[C_PUSHED] += 1

    if not exact_mode:
        counters[C_FRONTIER] = len(visited)
    counters[C_RESIDUE] = hsize
    return (
        best_idx,
        lab_gell[:nlab].copy(), lab_gt[:nlab].copy(),
        lab_node[:nlab].copy(), lab_parent[:nlab].copy(),
        counters,
    )


@njit(cache=True, inline="always")
def _ex_lt(hg, ht, hv, hi, a, b):
    if hg[a] != hg[b]:
        return hg[a] < hg[b]
    if ht[a] != ht[b]:
        return ht[a] < ht[b]
    if hv[a] != hv[b]:
        return hv[a] < hv[b]
    return hi[a] < hi[b]


@njit(cache=True)
def exact_labeling_search(indptr, dst, etime, lrisk, h_t, start, goal,
                          budget, expansion_limit, exhaustive):
    n = len(indptr) - 1
    cap = 1024
    lab_gell = np.empty(cap)
    lab_gt = np.empty(cap)
    lab_node = np.empty(cap, dtype=np.int64)
    lab_parent = np.empty(cap, dtype=np.int64)
    lab_gell[0] = 0.0
    lab_gt[0] = 0.0
    lab_node[0] = start
    lab_parent[0] = -1
    nlab = 1

    hcap = 1024
    hg = np.empty(hcap)
    ht = np.empty(hcap)
    hv = np.empty(hcap, dtype=np.int64)
    hi = np.empty(hcap, dtype=np.int64)
    hg[0] = 0.0
    ht[0] = 0.0
    hv[0] = start
    hi[0] = 0
    hsize = 1

    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    counters[C_PUSHED] = 1
    counters[C_MONOTONE] = 1
    counters[C_STATUS] = STATUS_EXHAUSTED

    fr_head = np.full(n, -1, dtype=np.int64)
    fcap = 1024
    fr_gt = np.empty(fcap)
    fr_gell = np.empty(fcap)
    fr_next = np.empty(fcap, dtype=np.int64)
    fr_n = 0
    live = 0

    best_idx = np.int64(-1)

    while hsize > 0:
        if expansion_limit > 0 and counters[C_POPPED] >= expansion_limit:
            counters[C_STATUS] = STATUS_LIMIT
            break
        gell = hg[0]
        gt = ht[0]
        v = hv[0]
        idx = hi[0]
        hsize -= 1
        hg[0] = hg[hsize]
        ht[0] = ht[hsize]
        hv[0] = hv[hsize]
        hi[0] = hi[hsize]
        pos = 0
        while True:
            l = 2 * pos + 1
            if l >= hsize:
                break
            best = l
            r = l + 1
            if r < hsize and _ex_lt(hg, ht, hv, hi, r, l):
                best = r
            if _ex_lt(hg, ht, hv, hi, best, pos):
                hg[pos], hg[best] = hg[best], hg[pos]
                ht[pos], ht[best] = ht[best], ht[pos]
                hv[pos], hv[best] = hv[best], hv[pos]
                hi[pos], hi[best] = hi[best], hi[pos]
                pos = best
            else:
                break
        counters[C_POPPED] += 1

        if gt + h_t[v] > budget:
            counters[C_PR_FEAS] += 1
            continue
        i = fr_head[v]
        dominated = False
        while i != -1:
            if fr_gt[i] <= gt and fr_gell[i] <= gell:
                dominated = True
                break
            i = fr_next[i]
        if dominated:
            counters[C_PR_DOM] += 1
            continue
        prev = np.int64(-1)
        i = fr_head[v]
        while i != -1:
            nxt = fr_next[i]
            if fr_gt[i] >= gt and fr_gell[i] >= gell:
                if prev == -1:
                    fr_head[v] = nxt
                else:
                    fr_next[prev] = nxt
                live -= 1
            else:
                prev = i
            i = nxt
        if fr_n == fcap:
            fcap2 = fcap * 2
            t0 = np.empty(fcap2)
            t0[:fcap] = fr_gt
            fr_gt = t0
            t1 = np.empty(fcap2)
            t1[:fcap] = fr_gell
            fr_gell = t1
            t2 = np.empty(fcap2, dtype=np.int64)
            t2[:fcap] = fr_next
            fr_next = t2
            fcap = fcap2
        fr_gt[fr_n] = gt
        fr_gell[fr_n] = gell
        fr_next[fr_n] = fr_head[v]
        fr_head[v] = fr_n
        fr_n += 1
        live += 1

        if v == goal:
            if best_idx < 0:
                best_idx = idx
                counters[C_GOAL] += 1
            else:
                counters[C_PR_OPT] += 1
            if not exhaustive:
                break
            continue

        counters[C_EXPANDED] += 1
        for e in range(indptr[v], indptr[v + 1]):
            u = dst[e]
            lu = lrisk[u]
            if lu == INF:
                continue
            g2 = gell + lu
            t2v = gt + etime[e]
            if nlab == cap:
                cap2 = cap * 2
                a0 = np.empty(cap2)
                a0[:cap] = lab_gell
                lab_gell = a0
                a1 = np.empty(cap2)
                a1[:cap] = lab_gt
                lab_gt = a1
                a2 = np.empty(cap2, dtype=np.int64)
                a2[:cap] = lab_node
                lab_node = a2
                a3 = np.empty(cap2, dtype=np.int64)
                a3[:cap] = lab_parent
                lab_parent = a3
                cap = cap2
            lab_gell[nlab] = g2
            lab_gt[nlab] = t2v
            lab_node[nlab] = u
            lab_parent[nlab] = idx
            if hsize == hcap:
                hcap2 = hcap * 2
                b1 = np.empty(hcap2)
                b1[:hcap] = hg
                hg = b1
                b2 = np.empty(hcap2)
                b2[:hcap] = ht
                ht = b2
                b3 = np.empty(hcap2, dtype=np.int64)
                b3[:hcap] = hv
                hv = b3
                b4 = np.empty(hcap2, dtype=np.int64)
                b4[:hcap] = hi
                hi = b4
                hcap = hcap2
            hg[hsize] = g2
            ht[hsize] = t2v
            hv[hsize] = u
            hi[hsize] = nlab
            pos = hsize
            while pos > 0:
                par = (pos - 1) // 2
                if _ex_lt(hg, ht, hv, hi, pos, par):
                    hg[pos], hg[par] = hg[par], hg[pos]
                    ht[pos], ht[par] = ht[par], ht[pos]
                    hv[pos], hv[par] = hv[par], hv[pos]
                    hi[pos], hi[par] = hi[par], hi[pos]
                    pos = par
                else:
                    break
            hsize += 1
            nlab += 1
            counters[C_PUSHED] += 1

    counters[C_FRONTIER] = live
    counters[C_RESIDUE] = hsize
    return (
        best_idx,
        lab_gell[:nlab].copy(), lab_gt[:nlab].copy(),
        lab_node[:nlab].copy(), lab_parent[:nlab].copy(),
        counters,
    )
