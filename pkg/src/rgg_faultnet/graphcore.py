"""Graph sampling from a point set and connectivity via union-find.

Candidate pairs come from a uniform cell grid.  Pairs closer than a split
radius ``R`` are decided directly; the remaining pairs all have edge
probability at most ``pbar = sup_{d > R} g(d)`` and are visited by
geometric skipping with thinning, which keeps sampling exact while
touching only ``O(N pbar)`` far pairs.  With a truncation tolerance
``tau > 0`` the far pass is dropped and ``R`` is the smallest radius with
``(n^2 / 2) g(R) <= tau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .geometry import Metric, PointSet, as_metric, max_distance
from .rng import as_generator

CELL_REACH = 2
_NO_EDGES = np.zeros((0, 2), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class GraphInstance:
    node_count: int
    edges: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if np.any(e[:, 0] >= e[:, 1]):
                raise ValueError("edges must be stored as (i, j) with i < j")
            if e.max() >= self.node_count or e.min() < 0:
                raise ValueError("edge index out of range")
            e = np.unique(e, axis=0)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    def __eq__(self, other):
        if not isinstance(other, GraphInstance):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(self.edges, other.edges)

    __hash__ = None

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    def with_edge(self, i: int, j: int) -> "GraphInstance":
        a, b = min(i, j), max(i, j)
        return GraphInstance(self.node_count, np.vstack([self.edges, [[a, b]]]), self.meta)


@dataclass(frozen=True)
class ConnectivityVerdict:
    connected: bool
    component_count: int
    isolated_count: int


@dataclass(frozen=True)
class SamplingPlan:
    radius: float
    cells: int
    reach: int
    pbar: float


def _grid(radius: float, s: int, torus: bool) -> tuple[int, int]:
    kcap = max(1, int(2.0 * math.sqrt(max(s, 1))))
    k = kcap if radius <= 0 else min(kcap, int(CELL_REACH / radius))
    if k <= 1 or (torus and k < 2 * CELL_REACH + 1):
        return 1, 0
    return k, CELL_REACH


@lru_cache(maxsize=8192)
def plan_sampling(model, s: int, metric, truncation: float = 0.0) -> SamplingPlan:
    """Pick the split radius and grid for sampling ``s`` nodes."""
    metric = as_metric(metric)
    torus = metric is Metric.TORUS
    dmax = max_distance(metric)
    if truncation > 0:
        r = min(model.truncation_radius(s, truncation), dmax)
        k, reach = _grid(r, s, torus)
        return SamplingPlan(r, k, reach, 0.0)

    npairs = 0.5 * s * max(s - 1, 0)
    cands = np.geomspace(1e-3 * model.length_scale, dmax, 240)
    cands = np.concatenate([cands, [b for b in model.breakpoints() if b < dmax], [dmax]])
    best = None
    for r in cands:
        k, reach = _grid(r, s, torus)
        near = 1.0 if k == 1 else min(1.0, (2 * reach + 1) ** 2 / k**2)
        pbar = 0.0 if r >= dmax else model.tail_bound(r)
        # rough per-pair costs: distance test, hashed draw, skipped far candidate
        cost = npairs * (0.3 * near + min(1.0, math.pi * r * r) + 3.0 * pbar) + 0.5 * k * k
        if best is None or cost < best[0]:
            best = (cost, SamplingPlan(float(r), k, reach, pbar))
    return best[1]


def _split_xy(points):
    if isinstance(points, PointSet):
        xy = points.xy
    else:
        xy = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return np.ascontiguousarray(xy[:, 0]), np.ascontiguousarray(xy[:, 1])


def count_components(xs, ys, model, metric, key, truncation: float = 0.0) -> int:
    """Components of one sampled graph; stops early once connected.

    A return value of 1 only certifies connectivity; larger values are the
    exact component count.
    """
    s = xs.size
    if s <= 1:
        return s
    plan = plan_sampling(model, s, as_metric(metric), float(truncation))
    kind, p0, p1, tr, tg = model.kernel_params()
    comps, _ = _kernels.scan_pairs(
        xs, ys, as_metric(metric) is Metric.TORUS, kind, p0, p1, tr, tg,
        plan.radius, plan.cells, plan.reach, plan.pbar, np.uint64(key), False, _NO_EDGES,
    )
    return comps


def sample_graph(points: PointSet, model, rng=None, truncation: float = 0.0,
                 plan: SamplingPlan | None = None) -> GraphInstance:
    """Draw one graph: each pair joined independently with probability ``g(d)``.

    ``truncation`` is the tolerated expected number of missed edges; 0
    samples exactly.  An explicit ``plan`` overrides the automatic choice
    of split radius; its ``pbar`` must bound ``g`` beyond ``radius``.
    """
    if truncation < 0:
        raise ValueError("truncation tolerance must be non-negative")
    metric = points.metric if isinstance(points, PointSet) else Metric.SQUARE
    xs, ys = _split_xy(points)
    s = xs.size
    key = as_generator(rng).integers(0, 2**64, dtype=np.uint64)
    meta = {**model.describe(), "metric": metric.value, "key": int(key), "truncation": truncation}
    if s <= 1:
        return GraphInstance(s, _NO_EDGES, meta)
    if plan is None:
        plan = plan_sampling(model, s, metric, float(truncation))
    kind, p0, p1, tr, tg = model.kernel_params()
    cap = max(64, 8 * s)
    while True:
        buf = np.empty((cap, 2), dtype=np.int64)
        _, m = _kernels.scan_pairs(
            xs, ys, metric is Metric.TORUS, kind, p0, p1, tr, tg,
            plan.radius, plan.cells, plan.reach, plan.pbar, key, True, buf,
        )
        if m >= 0:
            return GraphInstance(s, buf[:m], meta)
        cap *= 4


def is_connected(graph: GraphInstance) -> ConnectivityVerdict:
    """Union-find connectivity; graphs with at most one node are connected."""
    comps, isolated = _kernels.components(graph.node_count, graph.edges)
    return ConnectivityVerdict(comps <= 1, int(comps), int(isolated))


def write_edge_list(graph: GraphInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"n {graph.node_count}\n")
        for i, j in graph.edges:
            fh.write(f"{i} {j}\n")


def read_edge_list(path) -> GraphInstance:
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 2 or head[0] != "n":
            raise ValueError(f"{path}: missing 'n <node_count>' header")
        n = int(head[1])
        rows = [tuple(map(int, ln.split())) for ln in fh if ln.strip()]
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2)
    return GraphInstance(n, edges)
