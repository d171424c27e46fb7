"""Goal-directed lower bounds from reverse Dijkstra passes.

Two passes over the transpose adjacency produce, per node, the minimum
remaining travel time h_t and the minimum remaining log-risk h_ell to a fixed
goal. Both are exact shortest-path values, hence admissible and consistent.

Cost conventions match the search: log-risk is charged on entering a node, so
h_ell(v) sums the log-risk of every node on a v->goal path except v itself,
and the accumulated g_ell of a partial path counts every node except the
start. Their sum therefore bounds the full objective without double counting.
Impassable nodes (risk = 1) cannot be entered, which gates relaxations in all
three passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backends import get_kernels
from .graph import Graph, NodeId


@dataclass(frozen=True)
class HeuristicTables:
    """Per-node lower bounds for searches targeting a fixed goal."""

    goal: NodeId
    h_t: np.ndarray
    h_ell: np.ndarray


def _check_node(graph: Graph, v: NodeId, what: str) -> None:
    if not (0 <= v < graph.n):
        raise ValueError(f"{what} node {v} out of range for graph with {graph.n} nodes")


def _enterable(graph: Graph) -> np.ndarray:
    return (graph.risk < 1.0).astype(np.uint8)


def reverse_dijkstra_time(graph: Graph, goal: NodeId, backend: str | None = None) -> np.ndarray:
    """Minimum travel time from every node to the goal (+inf if unreachable)."""
    _check_node(graph, goal, "goal")
    k = get_kernels(backend)
    return k.dijkstra_edge(
        graph.in_indptr, graph.in_src, graph.in_time,
        _enterable(graph), False, int(goal),
    )


def reverse_dijkstra_logrisk(graph: Graph, goal: NodeId, backend: str | None = None) -> np.ndarray:
    """Minimum remaining log-risk from every node to the goal, excluding the
    node's own cost (+inf if unreachable)."""
    _check_node(graph, goal, "goal")
    k = get_kernels(backend)
    return k.dijkstra_node_reverse(graph.in_indptr, graph.in_src, graph.log_risk, int(goal))


def forward_dijkstra_time(graph: Graph, start: NodeId, backend: str | None = None) -> np.ndarray:
    """Minimum travel time from the start to every node (+inf if unreachable)."""
    _check_node(graph, start, "start")
    k = get_kernels(backend)
    return k.dijkstra_edge(
        graph.out_indptr, graph.edge_dst, graph.edge_time,
        _enterable(graph), True, int(start),
    )


def compute_heuristics(graph: Graph, goal: NodeId, backend: str | None = None) -> HeuristicTables:
    """Run both reverse passes and bundle the tables."""
    return HeuristicTables(
        goal=goal,
        h_t=reverse_dijkstra_time(graph, goal, backend=backend),
        h_ell=reverse_dijkstra_logrisk(graph, goal, backend=backend),
    )
