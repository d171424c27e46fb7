"""Synthetic terrain grids and benchmark instances.

Generates 8-connected directed grid graphs from seeded value-noise fields:
an elevation field drives slope bands, a class field assigns one of six
land-cover types, and Gaussian hotspots on a low base field produce the risk
layer. Edge traversal time is Euclidean centroid distance divided by the
velocity-matrix entry for the destination cell's terrain and the slope band
between the cells; a zero entry means impassable and the edge is omitted.

Instances pair a graph with a start/goal and a budget derived from the
minimum travel time: budget = t_min * (1 + alpha).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import GenerationError, UnreachableGoalError
from .graph import Graph, NodeId, graph_from_doc, graph_to_doc, load_graph

TERRAIN_NAMES = (
    "PavedAreas", "UrbanAreas", "OpenFields",
    "LightVegetation", "DenseScrub", "Forest",
)

# cumulative area fractions for the class-assignment field
_TERRAIN_FRACTIONS = (0.05, 0.12, 0.44, 0.72, 0.88, 1.0)

# slope band upper edges in degrees; beyond the last band is a fifth band
# that the default matrix marks impassable
SLOPE_BAND_EDGES_DEG = (5.0, 10.0, 20.0, 30.0)
NUM_SLOPE_BANDS = len(SLOPE_BAND_EDGES_DEG) + 1

_BASE_SPEEDS = {
    "PavedAreas": 8.0,
    "UrbanAreas": 5.0,
    "OpenFields": 5.0,
    "LightVegetation": 3.0,
    "DenseScrub": 1.5,
    "Forest": 1.0,
}
_SLOPE_FACTOR = 0.75


@dataclass(frozen=True)
class TerrainClass:
    name: str
    base_speed: float


TERRAIN_CLASSES = tuple(TerrainClass(name, _BASE_SPEEDS[name]) for name in TERRAIN_NAMES)


@dataclass(frozen=True)
class VelocityMatrix:
    """Max feasible speed (m/s) per terrain class and slope band.

    Entries must be non-increasing along slope bands; a zero entry marks the
    band impassable for that terrain.
    """

    speeds: dict

    def __post_init__(self):
        if set(self.speeds) != set(TERRAIN_NAMES):
            missing = set(TERRAIN_NAMES) - set(self.speeds)
            extra = set(self.speeds) - set(TERRAIN_NAMES)
            raise ValueError(f"velocity matrix classes mismatch: missing {sorted(missing)}, unknown {sorted(extra)}")
        fixed = {}
        for name, row in self.speeds.items():
            row = tuple(float(v) for v in row)
            if len(row) != NUM_SLOPE_BANDS:
                raise ValueError(f"{name}: expected {NUM_SLOPE_BANDS} slope-band speeds, got {len(row)}")
            if any(v < 0 or not math.isfinite(v) for v in row):
                raise ValueError(f"{name}: speeds must be finite and >= 0")
            if any(row[i + 1] > row[i] for i in range(len(row) - 1)):
                raise ValueError(f"{name}: speeds must be non-increasing along slope bands")
            fixed[name] = row
        object.__setattr__(self, "speeds", fixed)

    def speed(self, terrain: str, band: int) -> float:
        return self.speeds[terrain][band]

    @classmethod
    def default(cls) -> "VelocityMatrix":
        rows = {}
        for name, base in _BASE_SPEEDS.items():
            row = [base * _SLOPE_FACTOR ** b for b in range(NUM_SLOPE_BANDS - 1)]
            row.append(0.0)
            rows[name] = tuple(row)
        return cls(rows)

    def to_doc(self) -> dict:
        return {name: list(self.speeds[name]) for name in TERRAIN_NAMES}

    @classmethod
    def from_doc(cls, doc: dict) -> "VelocityMatrix":
        return cls({name: tuple(row) for name, row in doc.items()})

    @classmethod
    def load(cls, path: Union[str, Path]) -> "VelocityMatrix":
        return cls.from_doc(json.loads(Path(path).read_text()))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_doc(), indent=1) + "\n")


def slope_band(slope_deg: float) -> int:
    """Map an absolute slope in degrees to its band index."""
    s = abs(slope_deg)
    for i, edge in enumerate(SLOPE_BAND_EDGES_DEG):
        if s < edge:
            return i
    return NUM_SLOPE_BANDS - 1


@dataclass(frozen=True)
class GridSpec:
    """Parameters of a generated grid."""

    width: int
    height: int
    cell_size: float = 25.0
    seed: int = 0
    terrain_smoothness: float = 8.0
    risk_hotspots: int = 4
    elevation_range: tuple = (50.0, 150.0)

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.width * self.height < 2:
            raise ValueError("grid must contain at least 2 cells")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        if not self.terrain_smoothness > 0:
            raise ValueError("terrain_smoothness must be positive")
        if self.risk_hotspots < 0:
            raise ValueError("risk_hotspots must be >= 0")
        lo, hi = self.elevation_range
        if hi < lo:
            raise ValueError("elevation_range must be (min, max) with min <= max")


def _value_noise(rng: np.random.Generator, height: int, width: int, feature: float) -> np.ndarray:
    """Smooth random field in [0, 1]: coarse lattice, smoothstep interpolation."""
    ch = max(2, int(math.ceil(height / feature)) + 1)
    cw = max(2, int(math.ceil(width / feature)) + 1)
    coarse = rng.random((ch, cw))
    ys = np.linspace(0.0, ch - 1.0, height)
    xs = np.linspace(0.0, cw - 1.0, width)
    y0 = np.minimum(np.floor(ys).astype(np.int64), ch - 2)
    x0 = np.minimum(np.floor(xs).astype(np.int64), cw - 2)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    fy = fy * fy * (3.0 - 2.0 * fy)
    fx = fx * fx * (3.0 - 2.0 * fx)
    c00 = coarse[np.ix_(y0, x0)]
    c01 = coarse[np.ix_(y0, x0 + 1)]
    c10 = coarse[np.ix_(y0 + 1, x0)]
    c11 = coarse[np.ix_(y0 + 1, x0 + 1)]
    top = c00 * (1.0 - fx) + c01 * fx
    bot = c10 * (1.0 - fx) + c11 * fx
    return top * (1.0 - fy) + bot * fy


def _risk_field(rng: np.random.Generator, spec: GridSpec) -> np.ndarray:
    h, w = spec.height, spec.width
    base = 0.05 * _value_noise(rng, h, w, spec.terrain_smoothness)
    yy, xx = np.mgrid[0:h, 0:w]
    field = base
    span = max(2.0, min(h, w) / 2.0)
    for _ in range(spec.risk_hotspots):
        cy = rng.uniform(0, h - 1)
        cx = rng.uniform(0, w - 1)
        sigma = rng.uniform(max(1.5, span / 6.0), max(2.0, span / 2.5))
        amp = rng.uniform(0.35, 0.9)
        field = field + amp * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2.0 * sigma ** 2))
    return np.clip(field, 0.0, 0.98)


_NEIGHBOR_OFFSETS = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)


def generate_fields(spec: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw per-cell layers (elevation m, terrain class index, risk), row-major
    (height, width) arrays. Deterministic in the spec's seed."""
    rng = np.random.default_rng(spec.seed)
    h, w = spec.height, spec.width
    lo, hi = spec.elevation_range
    elevation = lo + (hi - lo) * _value_noise(rng, h, w, spec.terrain_smoothness)
    class_field = _value_noise(rng, h, w, spec.terrain_smoothness)
    thresholds = np.quantile(class_field, _TERRAIN_FRACTIONS[:-1])
    terrain_idx = np.searchsorted(thresholds, class_field, side="right")
    risk = _risk_field(rng, spec)
    return elevation, terrain_idx, risk


def generate_terrain(spec: GridSpec, velocity: Optional[VelocityMatrix] = None) -> Graph:
    """Generate the 8-connected grid graph for a spec, deterministically."""
    if velocity is None:
        velocity = VelocityMatrix.default()
    h, w = spec.height, spec.width
    elevation, terrain_idx, risk = generate_fields(spec)

    n = h * w
    cell = spec.cell_size
    idx = np.arange(n)
    x = (idx % w).astype(np.float64) * cell
    y = (idx // w).astype(np.float64) * cell
    terrain = [TERRAIN_NAMES[int(t)] for t in terrain_idx.ravel()]

    elev_flat = elevation.ravel()
    risk_flat = risk.ravel()
    diag = cell * math.sqrt(2.0)

    src_list: list[int] = []
    dst_list: list[int] = []
    time_list: list[float] = []
    speed_rows = [velocity.speeds[name] for name in TERRAIN_NAMES]
    tflat = terrain_idx.ravel()
    for r in range(h):
        for c in range(w):
            u = r * w + c
            for dr, dc in _NEIGHBOR_OFFSETS:
                r2, c2 = r + dr, c + dc
                if not (0 <= r2 < h and 0 <= c2 < w):
                    continue
                v = r2 * w + c2
                d = diag if (dr != 0 and dc != 0) else cell
                slope_deg = math.degrees(math.atan((elev_flat[v] - elev_flat[u]) / d))
                speed = speed_rows[tflat[v]][slope_band(slope_deg)]
                if speed <= 0.0:
                    continue
                src_list.append(u)
                dst_list.append(v)
                time_list.append(d / speed)

    if not src_list:
        raise GenerationError("generated grid has no traversable edges (all velocity entries zero?)")

    return Graph(
        x, y, risk_flat,
        np.array(src_list, dtype=np.int64),
        np.array(dst_list, dtype=np.int64),
        np.array(time_list, dtype=np.float64),
        terrain=terrain,
    )


@dataclass(frozen=True)
class Instance:
    """A solvable problem: graph, endpoints, and a slack-derived budget."""

    graph: Graph
    start: NodeId
    goal: NodeId
    budget: float
    t_min: float
    alpha: float

    def __post_init__(self):
        expected = self.t_min * (1.0 + self.alpha)
        if abs(self.budget - expected) > 1e-9 * max(1.0, abs(expected)):
            raise ValueError(
                f"budget {self.budget!r} does not match t_min*(1+alpha) = {expected!r}"
            )


def make_instance(graph: Graph, start: NodeId, goal: NodeId, alpha: float,
                  backend: Optional[str] = None) -> Instance:
    """Derive the budget from the minimum travel time: B = t_min * (1 + alpha)."""
    if start == goal:
        raise ValueError("start and goal must differ")
    for v, what in ((start, "start"), (goal, "goal")):
        if not (0 <= v < graph.n):
            raise ValueError(f"{what} node {v} out of range")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    from .heuristics import forward_dijkstra_time

    dist = forward_dijkstra_time(graph, start, backend=backend)
    t_min = float(dist[goal])
    if math.isinf(t_min):
        raise UnreachableGoalError(start, goal)
    return Instance(graph=graph, start=start, goal=goal,
                    budget=t_min * (1.0 + alpha), t_min=t_min, alpha=float(alpha))


Selector = Union[int, float]


def resolve_selector(graph: Graph, sel: Selector) -> NodeId:
    """Explicit id (int) or fraction of the node count (float in [0, 1])."""
    if isinstance(sel, bool):
        raise ValueError(f"invalid node selector {sel!r}")
    if isinstance(sel, int):
        if not (0 <= sel < graph.n):
            raise ValueError(f"node selector {sel} out of range")
        return sel
    if isinstance(sel, float):
        if not (0.0 <= sel <= 1.0):
            raise ValueError(f"fractional selector {sel!r} outside [0, 1]")
        return int(round(sel * (graph.n - 1)))
    raise ValueError(f"invalid node selector {sel!r}")


def benchmark_suite(spec: GridSpec, pair_specs: Sequence[tuple[Selector, Selector]],
                    alphas: Sequence[float],
                    velocity: Optional[VelocityMatrix] = None) -> list[Instance]:
    """Cartesian product of start/goal pairs and slack values, pairs outermost."""
    graph = generate_terrain(spec, velocity=velocity)
    instances = []
    for a_sel, b_sel in pair_specs:
        start = resolve_selector(graph, a_sel)
        goal = resolve_selector(graph, b_sel)
        for alpha in alphas:
            instances.append(make_instance(graph, start, goal, alpha))
    return instances


# -- instance manifests -------------------------------------------------------

def instance_to_manifest(instance: Instance, graph_ref: Optional[str] = None) -> dict:
    """Manifest document; the graph is referenced by path or inlined."""
    return {
        "graph": graph_ref if graph_ref is not None else graph_to_doc(instance.graph),
        "start": int(instance.start),
        "goal": int(instance.goal),
        "budget": float(instance.budget),
        "alpha": float(instance.alpha),
        "t_min": float(instance.t_min),
    }


def instance_from_manifest(doc: dict, base_dir: Union[str, Path] = ".") -> Instance:
    """Rebuild an instance; t_min is recomputed and checked against the manifest."""
    gram = doc.get("graph")
    if isinstance(gram, str):
        graph = load_graph((Path(base_dir) / gram).read_bytes())
    elif isinstance(gram, dict):
        graph = graph_from_doc(gram)
    else:
        raise ValueError("manifest 'graph' must be a path string or an inline document")
    start = int(doc["start"])
    goal = int(doc["goal"])
    inst = make_instance(graph, start, goal, float(doc["alpha"]))
    for key, fresh in (("t_min", inst.t_min), ("budget", inst.budget)):
        recorded = float(doc[key])
        if abs(fresh - recorded) > 1e-6 * max(1.0, abs(recorded)):
            raise ValueError(f"manifest {key} {recorded!r} is stale: recomputed {fresh!r}")
    return inst
