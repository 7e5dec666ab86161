"""Closed-form thresholds and approximations of the breakdown probability.

Everything here is a pure function of its arguments.  Exponents that can
overflow for large ``n`` are assembled in log space.  Passing a Poisson
density in place of ``n`` gives the Poisson-process versions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .connmodel import HardDisk, constant_C, moment, rayleigh_C

SQUARE_FULL = "square"
TORUS_BULK = "torus"


def _kappa(epsilon: float) -> float:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"fault probability must lie in [0, 1], got {epsilon!r}")
    return 1.0 - epsilon


def critical_radius(n: float, C: float, b: float = 0.0, epsilon: float = 0.0) -> float:
    """``sqrt((ln n + b) / (C kappa n))``."""
    top = math.log(n) + b
    if top <= 0:
        raise ValueError(f"ln n + b must be positive, got {top!r}")
    kappa = _kappa(epsilon)
    if kappa == 0:
        raise ValueError("kappa = 0 has no critical radius")
    return math.sqrt(top / (C * kappa * n))


def asymptotic_breakdown(b: float, epsilon: float = 0.0) -> float:
    """Limit ``1 - exp(-kappa e^{-b})`` at the critical radius."""
    kappa = _kappa(epsilon)
    if b == math.inf:
        return 0.0
    if b == -math.inf:
        return 1.0 if kappa > 0 else 0.0
    return -math.expm1(-kappa * math.exp(-b)) if -b < 700 else (1.0 if kappa > 0 else 0.0)


def beta_threshold(n: float, eta: float, epsilon: float = 0.0) -> float:
    """Rayleigh power threshold ``(C_eta kappa n / ln n)^(eta / 2)``."""
    if n < 2 or eta < 1:
        raise ValueError("need n >= 2 and eta >= 1")
    return (rayleigh_C(eta) * _kappa(epsilon) * n / math.log(n)) ** (eta / 2.0)


def beta_critical(n: float, eta: float = 4.0) -> float:
    """Fault-free threshold used to rescale ``beta = delta * beta_c``.

    For ``eta = 4`` this equals ``pi^3 n^2 / (4 ln^2 n)``.
    """
    return beta_threshold(n, eta, 0.0)


def epsilon_threshold(n: float, eta: float, beta: float) -> float:
    """``1 - (ln n / (C_eta n)) beta^(2 / eta)``.

    Not clamped: a negative value means the network is below the
    connectivity threshold even without faults.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    return 1.0 - math.log(n) / (rayleigh_C(eta) * n) * beta ** (2.0 / eta)


def epsilon_threshold_cor1(d: float) -> float:
    """Fault threshold ``1 / d`` at radius ``sqrt(d ln n / (C n))``."""
    if not d >= 1:
        raise ValueError(f"d must be >= 1, got {d!r}")
    return 1.0 / d


def fig1_threshold(eta):
    """Fault threshold at ``beta = pi (n / ln n)^(eta / 2)``; independent of n."""
    eta = np.asarray(eta, dtype=np.float64)
    c = np.vectorize(rayleigh_C)(eta)
    out = 1.0 - np.pi ** (2.0 / eta) / c
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ApproxTerms:
    bulk: float
    edge: float
    corner: float

    @property
    def exponent(self) -> float:
        return self.bulk + self.edge + self.corner

    @property
    def probability(self) -> float:
        return -math.expm1(-self.exponent)


def _safe_exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def approx_terms(n: float, epsilon: float, H0: float | None, H1: float, boundary=SQUARE_FULL) -> ApproxTerms:
    """Bulk, edge and corner terms of the isolated-node exponent."""
    kappa = _kappa(epsilon)
    if H1 <= 0:
        raise ValueError("H1 must be positive")
    if kappa == 0.0:
        if boundary == TORUS_BULK:
            return ApproxTerms(0.0, 0.0, 0.0)
        return ApproxTerms(0.0, 2.0 / H0, math.inf)
    a = math.pi * kappa * n * H1
    bulk = _safe_exp(math.log(kappa) + math.log(n) - 2.0 * a)
    if boundary == TORUS_BULK:
        return ApproxTerms(bulk, 0.0, 0.0)
    if boundary != SQUARE_FULL:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    if H0 is None or H0 <= 0:
        raise ValueError("H0 must be positive for the full-square formula")
    edge = _safe_exp(math.log(2.0) - math.log(H0) - a)
    corner = _safe_exp(math.log(4.0) - math.log(kappa) - math.log(n) - 2.0 * math.log(H0) - 0.5 * a)
    return ApproxTerms(bulk, edge, corner)


def approx_breakdown(n: float, epsilon: float, H0: float | None, H1: float, boundary=SQUARE_FULL) -> float:
    """Isolated-node approximation of the breakdown probability.

    ``H0`` and ``H1`` are moments of the *scaled* connection function.
    ``boundary="square"`` keeps the edge and corner terms of the unit
    square; ``"torus"`` keeps the bulk term only.
    """
    return approx_terms(n, epsilon, H0, H1, boundary).probability


def approx_breakdown_model(n: float, epsilon: float, model, boundary=SQUARE_FULL) -> float:
    return approx_breakdown(n, epsilon, moment(model, 0), moment(model, 1), boundary)


def approx_fig2(n: float, epsilon: float) -> float:
    """``1 - exp(-kappa n^(1 - 2 kappa))``: eta = 2, beta = pi n / (2 ln n), torus."""
    kappa = _kappa(epsilon)
    if kappa == 0:
        return 0.0
    return -math.expm1(-_safe_exp(math.log(kappa) + (1.0 - 2.0 * kappa) * math.log(n)))


def approx_breakdown_rayleigh_delta(n: float, epsilon: float, delta: float, eta: float = 4.0) -> float:
    """``1 - exp(-kappa n^(1 - kappa / sqrt(delta)))`` for ``beta = delta beta_c``."""
    if eta != 4.0:
        raise ValueError("the delta form is derived for eta = 4")
    if not delta > 0 or n < 2:
        raise ValueError("need delta > 0 and n >= 2")
    kappa = _kappa(epsilon)
    if kappa == 0:
        return 0.0
    return -math.expm1(-_safe_exp(math.log(kappa) + (1.0 - kappa / math.sqrt(delta)) * math.log(n)))


@dataclass(frozen=True)
class ConsistencyReport:
    n: tuple
    approx: tuple
    limit: float
    gaps: tuple

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.gaps, self.gaps[1:]))


def asymptotic_consistency_check(n_list, C: float | None = None, b: float = 0.0, epsilon: float = 0.0,
                                 model=None, boundary=SQUARE_FULL) -> ConsistencyReport:
    """Evaluate the approximation at the critical radius along ``n_list``.

    ``H1 = C r_n^2 / (2 pi)`` follows from ``C``; ``H0 = r_n H0(unscaled)``
    needs a profile shape, taken from ``model`` or else a hard disk.
    """
    base = (model if model is not None else HardDisk(1.0)).unscaled()
    if C is None:
        C = constant_C(base)
    h0 = moment(base, 0)
    h1 = C / (2.0 * math.pi)
    limit = asymptotic_breakdown(b, epsilon)
    vals, gaps = [], []
    for n in n_list:
        r = critical_radius(n, C, b, epsilon)
        v = approx_breakdown(n, epsilon, h0 * r, h1 * r * r, boundary)
        vals.append(v)
        gaps.append(abs(v - limit))
    return ConsistencyReport(tuple(n_list), tuple(vals), limit, tuple(gaps))
