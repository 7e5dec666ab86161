"""Point processes on the unit square and planar / toroidal distances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .rng import as_generator


class Metric(str, Enum):
    SQUARE = "square"
    TORUS = "torus"


def as_metric(metric) -> Metric:
    if isinstance(metric, Metric):
        return metric
    try:
        return Metric(str(metric).lower())
    except ValueError:
        raise ValueError(f"unknown metric {metric!r}; expected 'square' or 'torus'") from None


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class PointSet:
    """Node positions in ``[0, 1)^2`` together with the active metric.

    ``xy`` is an ``(n, 2)`` float array and is made read-only on
    construction, so instances can be shared between workers.
    """

    xy: np.ndarray
    metric: Metric = Metric.SQUARE
    process: str = field(default="uniform", compare=False)

    def __post_init__(self):
        xy = np.array(self.xy, dtype=np.float64, copy=True).reshape(-1, 2)
        if xy.size and (xy.min() < 0.0 or xy.max() >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")
        xy.setflags(write=False)
        object.__setattr__(self, "xy", xy)
        object.__setattr__(self, "metric", as_metric(self.metric))

    def __len__(self) -> int:
        return self.xy.shape[0]

    def __getitem__(self, i) -> Point:
        return Point(float(self.xy[i, 0]), float(self.xy[i, 1]))

    @property
    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.xy]

    def subset(self, mask_or_index) -> "PointSet":
        return PointSet(self.xy[mask_or_index], self.metric, self.process)


def sample_uniform(n: int, rng=None, metric=Metric.SQUARE) -> PointSet:
    """Draw ``n`` i.i.d. uniform points on the unit square."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    rng = as_generator(rng)
    return PointSet(rng.random((int(n), 2)), metric, "uniform")


def sample_poisson(density: float, rng=None, metric=Metric.SQUARE) -> PointSet:
    """Poisson point process of intensity ``density`` on the unit square.

    The node count is drawn first, then positions conditionally uniform.
    The result may be empty.
    """
    if not density > 0:
        raise ValueError(f"density must be positive, got {density!r}")
    rng = as_generator(rng)
    k = int(rng.poisson(density))
    return PointSet(rng.random((k, 2)), metric, "poisson")


def distance(a, b, metric=Metric.SQUARE) -> float:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    if as_metric(metric) is Metric.TORUS:
        dx = min(dx, 1.0 - dx)
        dy = min(dy, 1.0 - dy)
    return math.hypot(dx, dy)


def pairwise_distances(xy: np.ndarray, metric=Metric.SQUARE) -> np.ndarray:
    """Dense ``(n, n)`` distance matrix; intended for small ``n`` only."""
    xy = np.asarray(xy, dtype=np.float64)
    d = np.abs(xy[:, None, :] - xy[None, :, :])
    if as_metric(metric) is Metric.TORUS:
        d = np.minimum(d, 1.0 - d)
    return np.sqrt((d**2).sum(axis=-1))


def max_distance(metric) -> float:
    return math.sqrt(0.5) if as_metric(metric) is Metric.TORUS else math.sqrt(2.0)
