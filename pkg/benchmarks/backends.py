#!/usr/bin/env python3
"""Compare the numba kernels against the pure Python fallback.

Runs the same seeded solves through both backends, checks that the results
are bit-identical, and prints a speedup table.

Usage:
  python benchmarks/backends.py
  python benchmarks/backends.py --scales 10,20,30,50 --reps 3
"""

import argparse
import statistics
import time

from apulse import GridSpec, SolverConfig, generate_terrain, make_instance, solve
from apulse.backends import resolve_backend


def time_solve(instance, config, reps):
    walls = []
    solution = None
    for _ in range(reps + 1):  # first rep warms caches, excluded
        t0 = time.perf_counter()
        solution = solve(instance, config)
        walls.append(time.perf_counter() - t0)
    return statistics.fmean(walls[1:]), solution


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scales", default="10,20,30,50,70",
                        help="comma-separated square grid sides")
    parser.add_argument("--alpha", type=float, default=0.2)
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--mode", choices=("bucketed", "exact"), default="bucketed")
    args = parser.parse_args()

    scales = [int(s) for s in args.scales.split(",") if s.strip()]
    print(f"default backend would be: {resolve_backend()}")
    print(f"{'grid':>8} {'nodes':>7} {'numba (s)':>10} {'python (s)':>11} "
          f"{'speedup':>8}  identical")
    for side in scales:
        graph = generate_terrain(GridSpec(width=side, height=side, seed=args.seed))
        instance = make_instance(graph, 0, graph.n - 1, args.alpha)
        t_nb, sol_nb = time_solve(
            instance, SolverConfig(mode=args.mode, backend="numba"), args.reps)
        t_py, sol_py = time_solve(
            instance, SolverConfig(mode=args.mode, backend="python"), args.reps)
        same = (sol_nb.nodes == sol_py.nodes
                and sol_nb.total_log_risk == sol_py.total_log_risk
                and sol_nb.total_time == sol_py.total_time)
        print(f"{side:>5}x{side:<2} {graph.n:>7} {t_nb:>10.4f} {t_py:>11.4f} "
              f"{t_py / t_nb:>7.1f}x  {same}")
        if not same:
            print("  MISMATCH:", sol_nb.total_log_risk, "vs", sol_py.total_log_risk)
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
