"""Weighted directed graph with per-node risk costs and per-edge traversal times.

Nodes carry a risk probability R in [0, 1], converted once to an additive
log-risk cost l = -ln(1 - R) (+inf for R = 1, which marks the node as
impassable). Edges carry a strictly positive traversal time in seconds.
Adjacency is stored in CSR form, together with its transpose, so search
kernels can run over flat numpy arrays.

Graphs are immutable after construction; risk updates go through
:func:`with_risks`, which returns a new graph.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import IO, Optional, Sequence, Union

import numpy as np

from .errors import GraphFormatError, MissingEdgeError

NodeId = int

GRAPH_FORMAT = "apulse-graph/1"


@dataclass(frozen=True)
class Node:
    """Read-only view of a single vertex."""

    id: NodeId
    x: float
    y: float
    risk: float
    log_risk: float
    terrain: Optional[str] = None


@dataclass(frozen=True)
class Edge:
    """Read-only view of a single directed edge."""

    src: NodeId
    dst: NodeId
    time: float


def log_risk(risk: float) -> float:
    """Convert a risk probability to its additive log-risk cost -ln(1 - risk).

    Returns +inf for risk = 1 (impassable). Raises ValueError outside [0, 1].
    """
    if not (0.0 <= risk <= 1.0):
        raise ValueError(f"risk must be in [0, 1], got {risk!r}")
    if risk == 1.0:
        return math.inf
    # log1p(-risk) is accurate for small risks where 1 - risk rounds badly
    return -math.log1p(-risk)


def _log_risk_array(risk: np.ndarray) -> np.ndarray:
    out = np.full(risk.shape, np.inf)
    passable = risk < 1.0
    out[passable] = -np.log1p(-risk[passable])
    return out


class Graph:
    """Immutable directed graph over dense node ids 0..n-1.

    Construction validates every invariant (risk range, positive finite edge
    times, no self loops, no duplicate edges) and builds both the forward CSR
    adjacency and its transpose.
    """

    __slots__ = (
        "n", "x", "y", "risk", "log_risk", "terrain",
        "edge_src", "edge_dst", "edge_time",
        "out_indptr", "in_indptr", "in_src", "in_time",
    )

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        risk: np.ndarray,
        edge_src: np.ndarray,
        edge_dst: np.ndarray,
        edge_time: np.ndarray,
        terrain: Optional[Sequence[Optional[str]]] = None,
    ):
        n = len(x)
        self.n = n
        self.x = np.asarray(x, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        self.risk = np.asarray(risk, dtype=np.float64)
        if len(self.y) != n or len(self.risk) != n:
            raise GraphFormatError("node attribute arrays have mismatched lengths")
        if terrain is not None and len(terrain) != n:
            raise GraphFormatError("terrain list length does not match node count")
        bad = np.where((self.risk < 0.0) | (self.risk > 1.0) | ~np.isfinite(self.risk))[0]
        if bad.size:
            i = int(bad[0])
            raise GraphFormatError(f"nodes[{i}]: risk {self.risk[i]!r} outside [0, 1]")
        self.log_risk = _log_risk_array(self.risk)
        # all-None terrain is indistinguishable from absent terrain on the
        # wire, so canonicalize it here to keep round-trips exact
        if terrain is not None and any(t is not None for t in terrain):
            self.terrain = list(terrain)
        else:
            self.terrain = None

        src = np.asarray(edge_src, dtype=np.int64)
        dst = np.asarray(edge_dst, dtype=np.int64)
        time = np.asarray(edge_time, dtype=np.float64)
        m = len(src)
        if len(dst) != m or len(time) != m:
            raise GraphFormatError("edge arrays have mismatched lengths")
        if m:
            if src.min(initial=0) < 0 or (n and src.max(initial=-1) >= n) or \
               dst.min(initial=0) < 0 or (n and dst.max(initial=-1) >= n):
                for i in range(m):
                    if not (0 <= src[i] < n and 0 <= dst[i] < n):
                        raise GraphFormatError(
                            f"edges[{i}]: endpoint ({src[i]}, {dst[i]}) out of range for {n} nodes"
                        )
            loops = np.where(src == dst)[0]
            if loops.size:
                i = int(loops[0])
                raise GraphFormatError(f"edges[{i}]: self-loop at node {src[i]}")
            bad_t = np.where(~(time > 0.0) | ~np.isfinite(time))[0]
            if bad_t.size:
                i = int(bad_t[0])
                raise GraphFormatError(f"edges[{i}]: non-positive edge time {time[i]!r}")

        # canonical order: ascending (src, dst); also detects duplicates
        order = np.lexsort((dst, src))
        src, dst, time = src[order], dst[order], time[order]
        if m > 1:
            dup = np.where((src[1:] == src[:-1]) & (dst[1:] == dst[:-1]))[0]
            if dup.size:
                i = int(dup[0])
                raise GraphFormatError(f"duplicate edge ({src[i]}, {dst[i]})")
        self.edge_src = src
        self.edge_dst = dst
        self.edge_time = time

        self.out_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.out_indptr, src + 1, 1)
        np.cumsum(self.out_indptr, out=self.out_indptr)

        # transpose adjacency, sorted by (dst, src), carrying edge times
        torder = np.lexsort((src, dst))
        self.in_src = src[torder]
        self.in_time = time[torder]
        self.in_indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.in_indptr, dst[torder] + 1, 1)
        np.cumsum(self.in_indptr, out=self.in_indptr)

    # -- accessors ---------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edge_src)

    def node(self, i: NodeId) -> Node:
        if not (0 <= i < self.n):
            raise IndexError(f"node id {i} out of range")
        return Node(
            id=i, x=float(self.x[i]), y=float(self.y[i]),
            risk=float(self.risk[i]), log_risk=float(self.log_risk[i]),
            terrain=self.terrain[i] if self.terrain is not None else None,
        )

    def out_edges(self, u: NodeId) -> list[Edge]:
        a, b = self.out_indptr[u], self.out_indptr[u + 1]
        return [Edge(int(self.edge_src[i]), int(self.edge_dst[i]), float(self.edge_time[i]))
                for i in range(a, b)]

    def in_edges(self, v: NodeId) -> list[Edge]:
        a, b = self.in_indptr[v], self.in_indptr[v + 1]
        return [Edge(int(self.in_src[i]), v, float(self.in_time[i])) for i in range(a, b)]

    def edge_time_between(self, u: NodeId, v: NodeId) -> float:
        """Time of edge (u, v); raises MissingEdgeError when absent."""
        a, b = self.out_indptr[u], self.out_indptr[u + 1]
        i = a + np.searchsorted(self.edge_dst[a:b], v)
        if i < b and self.edge_dst[i] == v:
            return float(self.edge_time[i])
        raise MissingEdgeError(int(u), int(v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.risk, other.risk)
            and self.terrain == other.terrain
            and np.array_equal(self.edge_src, other.edge_src)
            and np.array_equal(self.edge_dst, other.edge_dst)
            and np.array_equal(self.edge_time, other.edge_time)
        )

    __hash__ = None  # mutable ndarray payload

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"

    # -- derived graphs ------------------------------------------------------


def with_risks(graph: Graph, patch: dict[NodeId, float]) -> Graph:
    """Return a new graph with the given per-node risks replaced.

    The input graph is untouched; log-risk is recomputed for patched nodes.
    """
    risk = graph.risk.copy()
    for node_id, r in patch.items():
        if not (0 <= int(node_id) < graph.n):
            raise GraphFormatError(f"patch references unknown node {node_id}")
        if not (0.0 <= r <= 1.0):
            raise GraphFormatError(f"patch risk {r!r} for node {node_id} outside [0, 1]")
        risk[int(node_id)] = float(r)
    return Graph(
        graph.x, graph.y, risk,
        graph.edge_src, graph.edge_dst, graph.edge_time,
        terrain=graph.terrain,
    )


# -- path scoring ------------------------------------------------------------

@dataclass(frozen=True)
class PathMetrics:
    total_time: float
    total_log_risk: float
    survival: float


def path_metrics(graph: Graph, nodes: Sequence[NodeId]) -> PathMetrics:
    """Score a node sequence: summed edge times, summed log-risk, survival.

    Log-risk is charged on every node except the first, so a single-node path
    scores (0, 0, 1). Survival = exp(-total_log_risk).
    """
    if len(nodes) == 0:
        raise ValueError("path must contain at least one node")
    for v in nodes:
        if not (0 <= v < graph.n):
            raise ValueError(f"path references unknown node {v}")
    total_time = 0.0
    total_ell = 0.0
    prev = nodes[0]
    for v in nodes[1:]:
        total_time += graph.edge_time_between(prev, v)
        total_ell += float(graph.log_risk[v])
        prev = v
    survival = math.exp(-total_ell) if math.isfinite(total_ell) else 0.0
    return PathMetrics(total_time, total_ell, survival)


# -- serialization -----------------------------------------------------------

def _node_obj(doc_nodes: list, i: int, obj) -> dict:
    if not isinstance(obj, dict):
        raise GraphFormatError(f"nodes[{i}]: expected object, got {type(obj).__name__}")
    return obj


def _req(obj: dict, key: str, where: str):
    if key not in obj:
        raise GraphFormatError(f"{where}: missing required field {key!r}")
    return obj[key]


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFormatError(f"{where}: expected number, got {value!r}")
    return float(value)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(f"{where}: expected integer, got {value!r}")
    return value


def load_graph(source: Union[bytes, str, IO]) -> Graph:
    """Parse and validate a graph-JSON document into a Graph.

    Accepts bytes, str, or a readable binary/text stream. Every schema
    violation is reported with the offending location.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    return graph_from_doc(doc)


def graph_from_doc(doc) -> Graph:
    """Build a Graph from an already-parsed graph-JSON document."""
    if not isinstance(doc, dict):
        raise GraphFormatError("top level must be a JSON object")
    fmt = doc.get("format")
    if fmt != GRAPH_FORMAT:
        raise GraphFormatError(f"unsupported format {fmt!r}, expected {GRAPH_FORMAT!r}")
    nodes = doc.get("nodes")
    edges = doc.get("edges")
    if not isinstance(nodes, list):
        raise GraphFormatError("'nodes' must be an array")
    if not isinstance(edges, list):
        raise GraphFormatError("'edges' must be an array")

    n = len(nodes)
    x = np.empty(n)
    y = np.empty(n)
    risk = np.empty(n)
    terrain: list[Optional[str]] = [None] * n
    seen = set()
    any_terrain = False
    for i, obj in enumerate(nodes):
        obj = _node_obj(nodes, i, obj)
        where = f"nodes[{i}]"
        nid = _int(_req(obj, "id", where), where + ".id")
        if not (0 <= nid < n):
            raise GraphFormatError(f"{where}: id {nid} not in 0..{n - 1} (ids must be dense)")
        if nid in seen:
            raise GraphFormatError(f"{where}: duplicate node id {nid}")
        seen.add(nid)
        x[nid] = _num(_req(obj, "x", where), where + ".x")
        y[nid] = _num(_req(obj, "y", where), where + ".y")
        r = _num(_req(obj, "risk", where), where + ".risk")
        if not (0.0 <= r <= 1.0):
            raise GraphFormatError(f"{where}: risk {r!r} outside [0, 1]")
        risk[nid] = r
        if "terrain" in obj and obj["terrain"] is not None:
            if not isinstance(obj["terrain"], str):
                raise GraphFormatError(f"{where}: terrain must be a string")
            terrain[nid] = obj["terrain"]
            any_terrain = True

    m = len(edges)
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    time = np.empty(m)
    for i, obj in enumerate(edges):
        if not isinstance(obj, dict):
            raise GraphFormatError(f"edges[{i}]: expected object, got {type(obj).__name__}")
        where = f"edges[{i}]"
        u = _int(_req(obj, "from", where), where + ".from")
        v = _int(_req(obj, "to", where), where + ".to")
        if not (0 <= u < n) or not (0 <= v < n):
            raise GraphFormatError(f"{where}: endpoint ({u}, {v}) out of range for {n} nodes")
        t = _num(_req(obj, "time", where), where + ".time")
        src[i], dst[i], time[i] = u, v, t

    return Graph(x, y, risk, src, dst, time, terrain=terrain if any_terrain else None)


def _fmt_float(v: float) -> str:
    # repr gives the shortest digit string that round-trips exactly
    return repr(float(v))


def save_graph(graph: Graph) -> bytes:
    """Serialize a Graph to canonical graph-JSON bytes.

    Nodes are emitted in id order and edges ascending by (from, to), one
    element per line, so identical graphs always produce identical bytes.
    Derived fields (log_risk) are never serialized.
    """
    buf = io.StringIO()
    buf.write('{"format": "%s",\n "nodes": [\n' % GRAPH_FORMAT)
    for i in range(graph.n):
        buf.write(
            '  {"id": %d, "x": %s, "y": %s, "risk": %s'
            % (i, _fmt_float(graph.x[i]), _fmt_float(graph.y[i]), _fmt_float(graph.risk[i]))
        )
        if graph.terrain is not None and graph.terrain[i] is not None:
            buf.write(', "terrain": %s' % json.dumps(graph.terrain[i]))
        buf.write("}")
        buf.write(",\n" if i + 1 < graph.n else "\n")
    buf.write(' ],\n "edges": [\n')
    m = graph.num_edges
    for i in range(m):
        buf.write(
            '  {"from": %d, "to": %d, "time": %s}'
            % (graph.edge_src[i], graph.edge_dst[i], _fmt_float(graph.edge_time[i]))
        )
        buf.write(",\n" if i + 1 < m else "\n")
    buf.write(" ]}\n")
    return buf.getvalue().encode("utf-8")


def graph_to_doc(graph: Graph) -> dict:
    """Graph as a plain graph-JSON document (dict form)."""
    nodes = []
    for i in range(graph.n):
        obj = {"id": i, "x": float(graph.x[i]), "y": float(graph.y[i]),
               "risk": float(graph.risk[i])}
        if graph.terrain is not None and graph.terrain[i] is not None:
            obj["terrain"] = graph.terrain[i]
        nodes.append(obj)
    edges = [
        {"from": int(graph.edge_src[i]), "to": int(graph.edge_dst[i]),
         "time": float(graph.edge_time[i])}
        for i in range(graph.num_edges)
    ]
    return {"format": GRAPH_FORMAT, "nodes": nodes, "edges": edges}


# -- grid detection ----------------------------------------------------------

@dataclass(frozen=True)
class GridLayout:
    width: int
    height: int
    cell_size: float


def grid_layout(graph: Graph) -> Optional[GridLayout]:
    """Detect whether node coordinates form a row-major regular grid.

    Returns the layout when node k sits at column k % width, row k // width
    with uniform spacing; None otherwise. Used by the service's rendering
    endpoint; graphs that fail detection fall back to scatter rendering.
    """
    if graph.n < 2:
        return None
    xs = np.unique(graph.x)
    ys = np.unique(graph.y)
    w, h = len(xs), len(ys)
    if w * h != graph.n:
        return None
    if w > 1:
        steps = np.diff(xs)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-9):
            return None
        cell = float(steps[0])
    else:
        cell = float(np.diff(ys)[0]) if h > 1 else 0.0
    if h > 1:
        ysteps = np.diff(ys)
        if not np.allclose(ysteps, ysteps[0], rtol=1e-9, atol=1e-9):
            return None
        if w > 1 and not math.isclose(float(ysteps[0]), cell, rel_tol=1e-9):
            return None
    idx = np.arange(graph.n)
    if not (np.array_equal(graph.x, xs[idx % w]) and np.array_equal(graph.y, ys[idx // w])):
        return None
    return GridLayout(width=w, height=h, cell_size=cell)
