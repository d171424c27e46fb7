"""Resource-constrained shortest path planning over risk-annotated terrain graphs."""

from .errors import (
    ExpansionLimitError,
    GenerationError,
    GraphFormatError,
    MissingEdgeError,
    NoFeasiblePathError,
    OracleSizeError,
    UnreachableGoalError,
)
from .graph import (
    Edge,
    Graph,
    GridLayout,
    Node,
    NodeId,
    PathMetrics,
    graph_from_doc,
    graph_to_doc,
    grid_layout,
    load_graph,
    log_risk,
    path_metrics,
    save_graph,
    with_risks,
)
from .heuristics import (
    HeuristicTables,
    compute_heuristics,
    forward_dijkstra_time,
    reverse_dijkstra_logrisk,
    reverse_dijkstra_time,
)
from .solver import (
    Label,
    PathSolution,
    SolverConfig,
    SweepEntry,
    Telemetry,
    auto_tune_bucket_width,
    bucket_index,
    budget_sweep,
    reconstruct_path,
    solve,
    solve_problem,
)
from .terrain import (
    GridSpec,
    Instance,
    TerrainClass,
    VelocityMatrix,
    benchmark_suite,
    generate_terrain,
    make_instance,
)

__version__ = "0.1.0"

__all__ = [
    "Edge", "Graph", "GridLayout", "Node", "NodeId", "PathMetrics",
    "graph_from_doc", "graph_to_doc", "grid_layout", "load_graph", "log_risk",
    "path_metrics", "save_graph", "with_risks",
    "HeuristicTables", "compute_heuristics", "forward_dijkstra_time",
    "reverse_dijkstra_logrisk", "reverse_dijkstra_time",
    "Label", "PathSolution", "SolverConfig", "SweepEntry", "Telemetry",
    "auto_tune_bucket_width", "bucket_index", "budget_sweep",
    "reconstruct_path", "solve", "solve_problem",
    "GridSpec", "Instance", "TerrainClass", "VelocityMatrix",
    "benchmark_suite", "generate_terrain", "make_instance",
    "ExpansionLimitError", "GenerationError", "GraphFormatError",
    "MissingEdgeError", "NoFeasiblePathError", "OracleSizeError",
    "UnreachableGoalError",
    "__version__",
]
