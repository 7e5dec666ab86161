"""Node faults and Monte Carlo estimates of the network breakdown probability.

Every trial resamples the whole ensemble: node positions, the fault set and
the edges.  Faults are drawn before edges and edges are only sampled among
survivors; the two processes commute, so this is the same distribution as
sampling the full graph and deleting nodes afterwards.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels
from .geometry import Metric, PointSet, as_metric, pairwise_distances
from .graphcore import count_components
from .rng import block_streams, trial_blocks


@dataclass(frozen=True)
class FaultModel:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"fault probability must lie in [0, 1), got {self.epsilon!r}")

    @property
    def kappa(self) -> float:
        return 1.0 - self.epsilon


@dataclass(frozen=True)
class BreakdownEstimate:
    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    master_seed: int
    disconnected_count: int

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


@dataclass(frozen=True)
class Lemma1Bounds:
    lower: float
    upper: float
    s_minus: int
    s_plus: int
    delta_n: float
    slack: float
    s_grid: tuple = ()
    p_by_s: tuple = ()

    @property
    def vacuous(self) -> bool:
        return self.slack >= 1.0


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes out of ``n``."""
    if n <= 0:
        raise ValueError("need at least one trial")
    z = float(stats.norm.ppf(0.5 + 0.5 * confidence))
    p = k / n
    z2n = z * z / n
    centre = (p + 0.5 * z2n) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n)
    lo = max(0.0, centre - half)
    hi = min(1.0, centre + half)
    # guard the endpoints against rounding
    return min(lo, p), max(hi, p)


def _as_fault(fault) -> FaultModel:
    return fault if isinstance(fault, FaultModel) else FaultModel(float(fault))


def _estimate(k: int, trials: int, seed: int) -> BreakdownEstimate:
    lo, hi = wilson_interval(k, trials)
    return BreakdownEstimate(k / trials, trials, lo, hi, seed, k)


def _run_blocks(job):
    """Worker entry point: count disconnected trials over a list of blocks."""
    (kind, n, model, epsilon, metric, seed, truncation, tag, blocks) = job
    torus_metric = as_metric(metric)
    bad = 0
    for block, size in blocks:
        st = block_streams(seed, block, *tag)
        for _ in range(size):
            if kind == "poisson":
                count = int(st.points.poisson(n))
            else:
                count = n
            xy = st.points.random((count, 2))
            if epsilon > 0.0:
                alive = st.faults.random(count) >= epsilon
                xy = xy[alive]
            key = st.edge_key()
            xs = np.ascontiguousarray(xy[:, 0])
            ys = np.ascontiguousarray(xy[:, 1])
            if count_components(xs, ys, model, torus_metric, key, truncation) > 1:
                bad += 1
    return bad


def _dispatch(job_head, trials: int, workers: int) -> int:
    blocks = trial_blocks(trials)
    if workers <= 1 or len(blocks) == 1:
        return _run_blocks((*job_head, blocks))
    chunks = [blocks[i::workers] for i in range(workers)]
    chunks = [c for c in chunks if c]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        return sum(pool.map(_run_blocks, [(*job_head, c) for c in chunks]))


def estimate_breakdown(
    n: int,
    model,
    fault,
    metric=Metric.TORUS,
    trials: int = 10_000,
    master_seed: int = 0,
    truncation: float = 0.0,
    workers: int = 1,
    process: str = "uniform",
) -> BreakdownEstimate:
    """Monte Carlo estimate of the expected network breakdown probability.

    Each trial draws ``n`` uniform nodes (or a Poisson number with mean
    ``n`` when ``process="poisson"``), deletes each node with probability
    ``epsilon`` and samples edges among the survivors.  The disconnected
    count is identical for any ``workers``.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if process not in ("uniform", "poisson"):
        raise ValueError(f"unknown point process {process!r}")
    if process == "uniform" and (int(n) != n or n < 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    fault = _as_fault(fault)
    tag = (0,) if process == "uniform" else (1,)
    head = (process, n if process == "poisson" else int(n), model, fault.epsilon,
            as_metric(metric), int(master_seed), float(truncation), tag)
    bad = _dispatch(head, int(trials), int(workers))
    return _estimate(bad, int(trials), int(master_seed))


def estimate_conditional(
    s: int,
    model,
    metric=Metric.TORUS,
    trials: int = 10_000,
    master_seed: int = 0,
    truncation: float = 0.0,
    workers: int = 1,
    tag: tuple = (0,),
) -> BreakdownEstimate:
    """Breakdown probability conditioned on exactly ``s`` survivors.

    Simulates the fault-free ensemble on ``s`` uniform nodes.  With the
    default ``tag`` the random streams coincide with those of
    :func:`estimate_breakdown` at ``epsilon = 0`` and ``n = s``.
    """
    if int(s) != s or s < 0:
        raise ValueError(f"s must be a non-negative integer, got {s!r}")
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if s <= 1:
        return _estimate(0, int(trials), int(master_seed))
    head = ("uniform", int(s), model, 0.0, as_metric(metric), int(master_seed), float(truncation), tuple(tag))
    bad = _dispatch(head, int(trials), int(workers))
    return _estimate(bad, int(trials), int(master_seed))


def estimate_fixed_points(
    points: PointSet,
    model,
    fault,
    trials: int = 100_000,
    master_seed: int = 0,
) -> BreakdownEstimate:
    """Breakdown probability of one frozen point set (faults and edges resampled).

    Uses a dense probability matrix, so it is meant for small graphs.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    fault = _as_fault(fault)
    gmat = np.ascontiguousarray(model.g(pairwise_distances(points.xy, points.metric)))
    bad = 0
    for block, size in trial_blocks(int(trials), 4096):
        st = block_streams(int(master_seed), block, 2)
        alive = st.faults.random((size, len(points))) >= fault.epsilon
        keys = st.edges.integers(0, 2**64, size=size, dtype=np.uint64)
        bad += _kernels.fixed_graph_trials(gmat, alive, keys)
    return _estimate(int(bad), int(trials), int(master_seed))


def default_delta(n: int) -> float:
    return float(n) ** (-1.0 / 3.0)


def survivor_range(n: int, epsilon: float, delta_n: float) -> tuple[int, int]:
    kappa = 1.0 - epsilon
    s_minus = math.ceil((kappa - delta_n) * n - 1e-9)
    s_plus = math.floor((kappa + delta_n) * n + 1e-9)
    return max(s_minus, 0), min(s_plus, n)


def survivor_grid(s_minus: int, s_plus: int) -> list[int]:
    if s_plus - s_minus + 1 <= 32:
        return list(range(s_minus, s_plus + 1))
    return sorted(set(int(round(v)) for v in np.linspace(s_minus, s_plus, 16)))


def lemma1_bounds(
    n: int,
    model,
    fault,
    metric=Metric.TORUS,
    trials_per_s: int = 1000,
    master_seed: int = 0,
    delta_rule=default_delta,
    truncation: float = 0.0,
    workers: int = 1,
) -> Lemma1Bounds:
    """Sandwich bound on the breakdown probability from conditional estimates.

    ``lower = (1 - slack) min_s P(eps; s)`` and ``upper = slack + max_s
    P(eps; s)`` with ``slack = 1 / (2 n delta_n)``, the extrema taken over
    survivor counts ``s`` in ``[(kappa - delta_n) n, (kappa + delta_n) n]``.
    """
    fault = _as_fault(fault)
    delta_n = float(delta_rule(n))
    if not 0.0 < delta_n < fault.kappa:
        raise ValueError(f"delta_n={delta_n} must lie in (0, kappa={fault.kappa})")
    s_minus, s_plus = survivor_range(n, fault.epsilon, delta_n)
    slack = 1.0 / (2.0 * n * delta_n)
    if slack >= 1.0:
        warnings.warn(f"slack 1/(2 n delta_n) = {slack:.3g} >= 1: bounds are vacuous", stacklevel=2)
    grid = survivor_grid(s_minus, s_plus)
    ps = [
        estimate_conditional(s, model, metric, trials_per_s, master_seed, truncation, workers, tag=(3, s)).p_hat
        for s in grid
    ]
    lower = (1.0 - slack) * min(ps)
    upper = slack + max(ps)
    return Lemma1Bounds(lower, upper, s_minus, s_plus, delta_n, slack, tuple(grid), tuple(ps))
