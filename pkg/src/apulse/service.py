"""HTTP/JSON service for interactive what-if planning.

Endpoints (all under /api):

- POST /solve   — one budget-constrained query; 422 with t_min when the
                  budget is below the minimum travel time (lets clients set
                  slider bounds), 404 for unknown graph ids, 400 malformed.
- POST /sweep   — the same query across several budgets, ordered ascending.
- POST /replan  — apply a risk patch, register the derived graph under a new
                  revision id, and solve on it; the original is untouched.
- GET  /graphs, POST /graphs, GET /graphs/{id}, GET /graphs/{id}/grid.

Graphs live in an in-memory registry, loaded at startup from a directory and
extendable by upload. All graphs are immutable; concurrent solves share them
freely, and the registry lock only guards registration. Solution bodies are
emitted through the same canonical serializer as the CLI, so identical
queries produce byte-identical JSON.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from .errors import (
    ExpansionLimitError, GraphFormatError, NoFeasiblePathError, UnreachableGoalError,
)
from .graph import Graph, graph_from_doc, graph_to_doc, grid_layout, with_risks
from .solver import SolverConfig, budget_sweep, solve_problem, sweep_entry_to_doc
from .terrain import GridSpec, generate_terrain


class GraphRegistry:
    """Named immutable graphs plus revision bookkeeping for replans."""

    def __init__(self):
        self._graphs: dict[str, Graph] = {}
        self._lock = threading.Lock()
        self._revisions = 0

    def register(self, graph_id: str, graph: Graph, replace: bool = False) -> str:
        with self._lock:
            if not replace and graph_id in self._graphs:
                raise KeyError(graph_id)
            self._graphs[graph_id] = graph
        return graph_id

    def register_revision(self, base_id: str, graph: Graph) -> str:
        with self._lock:
            self._revisions += 1
            rev_id = f"{base_id}-rev{self._revisions}"
            self._graphs[rev_id] = graph
        return rev_id

    def get(self, graph_id: str) -> Optional[Graph]:
        return self._graphs.get(graph_id)

    def ids(self) -> list[str]:
        return sorted(self._graphs)

    def load_directory(self, directory: Path) -> int:
        from .graph import load_graph

        count = 0
        for path in sorted(Path(directory).glob("*.json")):
            graph = load_graph(path.read_bytes())
            self.register(path.stem, graph, replace=True)
            count += 1
        return count


class SolveConfigModel(BaseModel):
    mode: str = "bucketed"
    target_buckets: int = 8192
    early_exit: bool = True
    node_expansion_limit: Optional[int] = None

    def to_solver_config(self) -> SolverConfig:
        return SolverConfig(
            mode=self.mode, target_buckets=self.target_buckets,
            early_exit=self.early_exit,
            node_expansion_limit=self.node_expansion_limit,
        )


class SolveRequest(BaseModel):
    graph_id: Optional[str] = None
    graph: Optional[dict] = None
    start: int
    goal: int
    budget: float
    config: SolveConfigModel = Field(default_factory=SolveConfigModel)

    @model_validator(mode="after")
    def _exactly_one_graph(self):
        if (self.graph_id is None) == (self.graph is None):
            raise ValueError("exactly one of 'graph_id' and 'graph' must be present")
        return self


class SweepRequest(BaseModel):
    graph_id: Optional[str] = None
    graph: Optional[dict] = None
    start: int
    goal: int
    budgets: list[float]
    config: SolveConfigModel = Field(default_factory=SolveConfigModel)

    @model_validator(mode="after")
    def _exactly_one_graph(self):
        if (self.graph_id is None) == (self.graph is None):
            raise ValueError("exactly one of 'graph_id' and 'graph' must be present")
        return self


class PatchEntry(BaseModel):
    node: int
    risk: float


class ReplanRequest(BaseModel):
    graph_id: str
    patch: list[PatchEntry]
    start: int
    goal: int
    budget: float
    config: SolveConfigModel = Field(default_factory=SolveConfigModel)


class UploadRequest(BaseModel):
    id: Optional[str] = None
    graph: dict


def _error(status: int, error: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, **extra})


def _graph_summary(graph_id: str, graph: Graph) -> dict:
    layout = grid_layout(graph)
    return {
        "id": graph_id,
        "nodes": graph.n,
        "edges": graph.num_edges,
        "grid": None if layout is None else {
            "width": layout.width, "height": layout.height,
            "cell_size": layout.cell_size,
        },
    }


def create_app(registry: GraphRegistry, ui_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="apulse planning service", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(p) for p in err.get("loc", ())], "msg": str(err.get("msg", ""))}
            for err in exc.errors()
        ]
        return _error(400, "malformed_request", detail=detail)

    def _resolve(req) -> Graph:
        if req.graph_id is not None:
            graph = registry.get(req.graph_id)
            if graph is None:
                raise KeyError(req.graph_id)
            return graph
        return graph_from_doc(req.graph)

    @app.post("/api/solve")
    def http_solve(req: SolveRequest) -> Response:
        try:
            graph = _resolve(req)
        except KeyError as exc:
            return _error(404, "unknown_graph", graph_id=str(exc.args[0]))
        except GraphFormatError as exc:
            return _error(400, "invalid_graph", detail=str(exc))
        try:
            solution = solve_problem(graph, req.start, req.goal, req.budget,
                                     req.config.to_solver_config())
        except NoFeasiblePathError as exc:
            return _error(422, "no_feasible_path", t_min=exc.t_min, budget=exc.budget)
        except UnreachableGoalError:
            return _error(422, "unreachable_goal")
        except ExpansionLimitError as exc:
            if exc.incumbent is None:
                return _error(422, "expansion_limit", detail=str(exc))
            doc = exc.incumbent.to_doc()
            doc["partial"] = True
            return JSONResponse(status_code=200, content=doc)
        except ValueError as exc:
            return _error(400, "invalid_request", detail=str(exc))
        return Response(content=solution.to_json_bytes(), media_type="application/json")

    @app.post("/api/sweep")
    def http_sweep(req: SweepRequest):
        if not req.budgets:
            return _error(400, "empty_budgets")
        try:
            graph = _resolve(req)
        except KeyError as exc:
            return _error(404, "unknown_graph", graph_id=str(exc.args[0]))
        except GraphFormatError as exc:
            return _error(400, "invalid_graph", detail=str(exc))
        try:
            entries = budget_sweep(graph, req.start, req.goal, req.budgets,
                                   req.config.to_solver_config())
        except ValueError as exc:
            return _error(400, "invalid_request", detail=str(exc))
        return {"results": [sweep_entry_to_doc(e) for e in entries]}

    @app.post("/api/replan")
    def http_replan(req: ReplanRequest):
        graph = registry.get(req.graph_id)
        if graph is None:
            return _error(404, "unknown_graph", graph_id=req.graph_id)
        try:
            patched = with_risks(graph, {p.node: p.risk for p in req.patch})
        except GraphFormatError as exc:
            return _error(400, "invalid_patch", detail=str(exc))
        revision = registry.register_revision(req.graph_id, patched)
        try:
            solution = solve_problem(patched, req.start, req.goal, req.budget,
                                     req.config.to_solver_config())
        except NoFeasiblePathError as exc:
            return _error(422, "no_feasible_path", t_min=exc.t_min,
                          budget=exc.budget, revision=revision)
        except UnreachableGoalError:
            return _error(422, "unreachable_goal", revision=revision)
        except ExpansionLimitError as exc:
            if exc.incumbent is None:
                return _error(422, "expansion_limit", revision=revision)
            doc = exc.incumbent.to_doc()
            doc["partial"] = True
            return {"revision": revision, "solution": doc}
        except ValueError as exc:
            return _error(400, "invalid_request", detail=str(exc))
        return {"revision": revision, "solution": solution.to_doc()}

    @app.get("/api/graphs")
    def list_graphs():
        return {"graphs": [_graph_summary(gid, registry.get(gid)) for gid in registry.ids()]}

    @app.post("/api/graphs")
    def upload_graph(req: UploadRequest):
        try:
            graph = graph_from_doc(req.graph)
        except GraphFormatError as exc:
            return _error(400, "invalid_graph", detail=str(exc))
        graph_id = req.id or f"graph-{len(registry.ids()) + 1}"
        try:
            registry.register(graph_id, graph)
        except KeyError:
            return _error(409, "graph_exists", graph_id=graph_id)
        return _graph_summary(graph_id, graph)

    @app.get("/api/graphs/{graph_id}")
    def get_graph(graph_id: str):
        graph = registry.get(graph_id)
        if graph is None:
            return _error(404, "unknown_graph", graph_id=graph_id)
        return graph_to_doc(graph)

    @app.get("/api/graphs/{graph_id}/grid")
    def get_grid(graph_id: str):
        graph = registry.get(graph_id)
        if graph is None:
            return _error(404, "unknown_graph", graph_id=graph_id)
        layout = grid_layout(graph)
        if layout is None:
            return _error(422, "not_a_grid", graph_id=graph_id)
        return {
            "id": graph_id,
            "width": layout.width,
            "height": layout.height,
            "cell_size": layout.cell_size,
            "risk": [float(r) for r in graph.risk],
            "terrain": graph.terrain,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def build_default_app(graph_dir: Optional[Path] = None,
                      ui_dir: Optional[Path] = None,
                      demo: bool = False) -> FastAPI:
    """App with registry populated from a directory and/or the demo grid."""
    registry = GraphRegistry()
    if graph_dir is None:
        env_dir = os.environ.get("APULSE_GRAPH_DIR")
        graph_dir = Path(env_dir) if env_dir else None
    if graph_dir is not None:
        registry.load_directory(Path(graph_dir))
    if demo:
        # parameters chosen so the survival/budget trade-off is visible on
        # the UI slider (roughly 15% -> 35% over alpha 0..1)
        spec = GridSpec(width=50, height=50, seed=11, risk_hotspots=3,
                        terrain_smoothness=12.0)
        registry.register("demo-50x50", generate_terrain(spec), replace=True)
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = candidate if candidate.is_dir() else None
    return create_app(registry, ui_dir=ui_dir)
