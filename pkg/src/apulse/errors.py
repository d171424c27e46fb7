"""Exception types shared across the package."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Raised when a graph document violates the graph-JSON schema or invariants."""


class MissingEdgeError(ValueError):
    """Raised when a node sequence steps between nodes that are not connected."""

    def __init__(self, u: int, v: int):
        super().__init__(f"no edge between consecutive nodes ({u}, {v})")
        self.pair = (u, v)


class GenerationError(RuntimeError):
    """Raised when terrain generation produces an unusable graph (e.g. no edges)."""


class UnreachableGoalError(RuntimeError):
    """The goal cannot be reached from the start at any budget."""

    def __init__(self, start: int, goal: int):
        super().__init__(f"goal {goal} is unreachable from start {start}")
        self.start = start
        self.goal = goal


class NoFeasiblePathError(RuntimeError):
    """The goal is reachable, but no path satisfies the time budget."""

    def __init__(self, budget: float, t_min: float):
        super().__init__(
            f"no feasible path: budget {budget:g} s is below the minimum travel time {t_min:g} s"
        )
        self.budget = budget
        self.t_min = t_min


class ExpansionLimitError(RuntimeError):
    """The solver hit its expansion cap. Carries the best incumbent found so far."""

    def __init__(self, limit: int, incumbent=None):
        super().__init__(f"node expansion limit of {limit} exceeded")
        self.limit = limit
        self.incumbent = incumbent  # PathSolution or None


class OracleSizeError(RuntimeError):
    """The exhaustive oracle was asked to enumerate a graph beyond its size cap."""
