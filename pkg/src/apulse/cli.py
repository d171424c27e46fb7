"""Command-line interface.

Subcommands: gen (terrain generation), solve (single query), sweep (budget
sweep), bench (benchmark suite), serve (HTTP service). Exit codes: 0 success,
1 domain error (infeasible, unreachable, bad input files), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .errors import (
    ExpansionLimitError, GenerationError, GraphFormatError,
    NoFeasiblePathError, UnreachableGoalError,
)
from .graph import load_graph, save_graph
from .solver import SolverConfig, budget_sweep, solve_problem, sweep_entry_to_doc
from .terrain import (
    GridSpec, VelocityMatrix, generate_terrain, instance_to_manifest, make_instance,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apulse",
        description="Budget-constrained minimum-risk route planning toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic terrain graph")
    p_gen.add_argument("--width", type=int, required=True)
    p_gen.add_argument("--height", type=int, required=True)
    p_gen.add_argument("--cell-size", type=float, default=25.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--smoothness", type=float, default=8.0)
    p_gen.add_argument("--hotspots", type=int, default=4)
    p_gen.add_argument("--elevation-min", type=float, default=50.0)
    p_gen.add_argument("--elevation-max", type=float, default=150.0)
    p_gen.add_argument("--velocity-config", type=Path, default=None,
                       help="JSON velocity matrix overriding the defaults")
    p_gen.add_argument("--out", type=Path, required=True)
    p_gen.add_argument("--manifest-out", type=Path, default=None,
                       help="also write an instance manifest (needs --start/--goal/--alpha)")
    p_gen.add_argument("--start", type=int, default=None)
    p_gen.add_argument("--goal", type=int, default=None)
    p_gen.add_argument("--alpha", type=float, default=None)

    p_solve = sub.add_parser("solve", help="solve one budget-constrained query")
    p_solve.add_argument("--graph", type=Path, required=True)
    p_solve.add_argument("--start", type=int, required=True)
    p_solve.add_argument("--goal", type=int, required=True)
    group = p_solve.add_mutually_exclusive_group(required=True)
    group.add_argument("--budget", type=float, help="time budget in seconds")
    group.add_argument("--alpha", type=float, help="slack over the minimum travel time")
    p_solve.add_argument("--mode", choices=("bucketed", "exact"), default="bucketed")
    p_solve.add_argument("--target-buckets", type=int, default=8192)
    p_solve.add_argument("--expansion-limit", type=int, default=None)
    p_solve.add_argument("--no-early-exit", action="store_true")
    p_solve.add_argument("--out", type=Path, default=None,
                         help="write Solution JSON here (default: stdout)")

    p_sweep = sub.add_parser("sweep", help="solve across multiple budgets")
    p_sweep.add_argument("--graph", type=Path, required=True)
    p_sweep.add_argument("--start", type=int, required=True)
    p_sweep.add_argument("--goal", type=int, required=True)
    group = p_sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--budgets", type=str, help="comma-separated budgets in seconds")
    group.add_argument("--alphas", type=str, help="comma-separated slack values")
    p_sweep.add_argument("--mode", choices=("bucketed", "exact"), default="bucketed")
    p_sweep.add_argument("--out", type=Path, default=None)

    p_bench = sub.add_parser("bench", help="run a benchmark suite")
    src = p_bench.add_mutually_exclusive_group(required=True)
    src.add_argument("--suite", type=Path, help="suite JSON file")
    src.add_argument("--ladder", action="store_true",
                     help="built-in square-grid scale ladder")
    p_bench.add_argument("--scales", type=str, default="10,20,30,50,70,100",
                         help="ladder grid sides (with --ladder)")
    p_bench.add_argument("--alpha", type=float, default=0.2, help="ladder slack")
    p_bench.add_argument("--seed", type=int, default=5, help="ladder seed")
    p_bench.add_argument("--solvers", type=str, default="apulse,exact-label-setting",
                         help=f"comma-separated subset of {sorted(bench_mod.SOLVERS)}")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--timeout", type=float, default=600.0)
    p_bench.add_argument("--no-warmup", action="store_true")
    p_bench.add_argument("--expansion-limit", type=int, default=None)
    p_bench.add_argument("--plots", action="store_true")
    p_bench.add_argument("--out", type=Path, required=True, help="output directory")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=None,
                         help="default: APULSE_PORT or 8080")
    p_serve.add_argument("--host", type=str, default="127.0.0.1")
    p_serve.add_argument("--graph-dir", type=Path, default=None,
                         help="directory of graph JSON files (default: APULSE_GRAPH_DIR)")
    p_serve.add_argument("--ui-dir", type=Path, default=None,
                         help="static UI bundle to serve at / (default: frontend/dist if present)")
    p_serve.add_argument("--demo", action="store_true",
                         help="register a bundled 50x50 demo graph at startup")
    return parser


def _cmd_gen(args) -> int:
    spec = GridSpec(
        width=args.width, height=args.height, cell_size=args.cell_size,
        seed=args.seed, terrain_smoothness=args.smoothness,
        risk_hotspots=args.hotspots,
        elevation_range=(args.elevation_min, args.elevation_max),
    )
    velocity = VelocityMatrix.load(args.velocity_config) if args.velocity_config else None
    graph = generate_terrain(spec, velocity=velocity)
    args.out.write_bytes(save_graph(graph))
    print(f"wrote {args.out}: {graph.n} nodes, {graph.num_edges} edges")
    if args.manifest_out is not None:
        if args.start is None or args.goal is None or args.alpha is None:
            print("--manifest-out requires --start, --goal and --alpha", file=sys.stderr)
            return 2
        instance = make_instance(graph, args.start, args.goal, args.alpha)
        manifest = instance_to_manifest(instance, graph_ref=str(args.out.name))
        args.manifest_out.write_text(json.dumps(manifest, indent=1) + "\n")
        print(f"wrote {args.manifest_out}: t_min={instance.t_min:.3f}s budget={instance.budget:.3f}s")
    return 0


def _load_graph_file(path: Path):
    try:
        return load_graph(path.read_bytes())
    except FileNotFoundError:
        raise GraphFormatError(f"graph file not found: {path}")


def _cmd_solve(args) -> int:
    graph = _load_graph_file(args.graph)
    if args.budget is not None:
        budget = args.budget
    else:
        instance = make_instance(graph, args.start, args.goal, args.alpha)
        budget = instance.budget
    config = SolverConfig(
        mode=args.mode, target_buckets=args.target_buckets,
        early_exit=not args.no_early_exit,
        node_expansion_limit=args.expansion_limit,
    )
    solution = solve_problem(graph, args.start, args.goal, budget, config)
    payload = solution.to_json_bytes()
    if args.out is not None:
        args.out.write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
    print(
        f"path: {len(solution.nodes)} nodes, time {solution.total_time:.3f}s "
        f"of {budget:.3f}s, log-risk {solution.total_log_risk:.6f}, "
        f"survival {solution.survival:.4%}",
        file=sys.stderr,
    )
    return 0


def _cmd_sweep(args) -> int:
    graph = _load_graph_file(args.graph)
    if args.budgets is not None:
        budgets = [float(tok) for tok in args.budgets.split(",") if tok.strip()]
    else:
        alphas = [float(tok) for tok in args.alphas.split(",") if tok.strip()]
        base = make_instance(graph, args.start, args.goal, 0.0)
        budgets = [base.t_min * (1.0 + a) for a in alphas]
    if not budgets:
        print("no budgets given", file=sys.stderr)
        return 2
    entries = budget_sweep(graph, args.start, args.goal, budgets,
                           SolverConfig(mode=args.mode))
    doc = {"results": [sweep_entry_to_doc(e) for e in entries]}
    text = json.dumps(doc, indent=1) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args) -> int:
    if args.suite is not None:
        suite = bench_mod.load_suite(args.suite)
    else:
        scales = [int(tok) for tok in args.scales.split(",") if tok.strip()]
        suite = bench_mod.ladder_suite(scales=scales, alpha=args.alpha, seed=args.seed)
    solvers = [tok.strip() for tok in args.solvers.split(",") if tok.strip()]
    config = bench_mod.BenchConfig(
        reps=args.reps, timeout_s=args.timeout,
        warmup=not args.no_warmup, expansion_limit=args.expansion_limit,
    )
    runs = bench_mod.run_suite(suite, solvers, config)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    bench_mod.write_csv(runs, out / "runs.csv")
    bench_mod.write_summary(runs, out / "summary.json")
    quality = bench_mod.quality_report(runs)
    (out / "quality.json").write_text(json.dumps(quality, indent=1) + "\n")
    crossover = bench_mod.crossover_report(runs)
    (out / "crossover.json").write_text(json.dumps(crossover, indent=1) + "\n")
    if args.plots:
        bench_mod.write_plots(runs, out)
    print(f"wrote benchmark outputs to {out}/ "
          f"(crossover scale: {crossover['crossover_scale']})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import build_default_app

    port = args.port if args.port is not None else int(os.environ.get("APULSE_PORT", "8080"))
    app = build_default_app(
        graph_dir=args.graph_dir, ui_dir=args.ui_dir, demo=args.demo,
    )
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NoFeasiblePathError as exc:
        print(f"error: no feasible path (budget {exc.budget:g}s < minimum time "
              f"{exc.t_min:g}s)", file=sys.stderr)
        return 1
    except UnreachableGoalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExpansionLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GraphFormatError, GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
