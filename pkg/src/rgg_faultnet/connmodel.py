"""Connection functions, their moments and the integral constant C.

Three families are provided:

* :class:`HardDisk` -- connect iff the distance is at most ``r_n``.
* :class:`RayleighSISO` -- ``g(r) = exp(-beta * r**eta)``, Rayleigh fading
  with path loss exponent ``eta`` integrated over the channel gain.
* :class:`RescaledProfile` -- a tabulated base profile ``g`` used as
  ``g(r / scale)``.

Every model exposes the scaled connection probability ``g(r)`` and an
``unscaled()`` counterpart from which the constant ``C`` is computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, special

QUAD_TOL = 1e-12
_TAIL_TOL = 1e-14


class DivergentIntegralError(ArithmeticError):
    """Raised when a moment of the connection function does not converge."""


# kernel kind codes, shared with graphcore
KIND_HARD_DISK = 0
KIND_RAYLEIGH = 1
KIND_TABULATED = 2

_EMPTY = np.zeros(0)


@dataclass(frozen=True)
class HardDisk:
    r_n: float

    kind = "hard_disk"

    def __post_init__(self):
        if not self.r_n > 0:
            raise ValueError(f"r_n must be positive, got {self.r_n!r}")

    def g(self, r):
        r = np.asarray(r, dtype=np.float64)
        return np.where(r <= self.r_n, 1.0, 0.0)

    def unscaled(self) -> "HardDisk":
        return HardDisk(1.0)

    @property
    def length_scale(self) -> float:
        return self.r_n

    def closed_moment(self, m: int) -> float:
        return self.r_n ** (m + 1) / (m + 1)

    def tail_bound(self, radius: float) -> float:
        return 0.0 if radius >= self.r_n else 1.0

    def truncation_radius(self, n: int, tau: float) -> float:
        if tau <= 0:
            return math.inf
        return 0.0 if 0.5 * n * n <= tau else self.r_n

    def breakpoints(self) -> list[float]:
        return [self.r_n]

    def kernel_params(self):
        return KIND_HARD_DISK, float(self.r_n), 0.0, _EMPTY, _EMPTY

    def describe(self) -> dict:
        return {"model": "hard-disk", "r_n": self.r_n}


@dataclass(frozen=True)
class RayleighSISO:
    """``g(r) = exp(-beta r^eta)``.

    ``beta`` may be given directly or as ``snr_threshold * beta0``; if all
    three are supplied they must agree.
    """

    beta: float | None = None
    eta: float = 2.0
    snr_threshold: float | None = None
    beta0: float | None = None

    kind = "rayleigh"

    def __post_init__(self):
        beta = self.beta
        if self.snr_threshold is not None or self.beta0 is not None:
            if self.snr_threshold is None or self.beta0 is None:
                raise ValueError("snr_threshold and beta0 must be given together")
            if not (self.snr_threshold > 0 and self.beta0 > 0):
                raise ValueError("snr_threshold and beta0 must be positive")
            derived = self.snr_threshold * self.beta0
            if beta is None:
                beta = derived
            elif not math.isclose(beta, derived, rel_tol=1e-12):
                raise ValueError(f"beta={beta} disagrees with snr_threshold*beta0={derived}")
        if beta is None or not beta > 0:
            raise ValueError(f"beta must be positive, got {beta!r}")
        if not self.eta >= 1:
            raise ValueError(f"path loss exponent must be >= 1, got {self.eta!r}")
        object.__setattr__(self, "beta", float(beta))
        object.__setattr__(self, "eta", float(self.eta))

    def g(self, r):
        r = np.asarray(r, dtype=np.float64)
        return np.exp(-self.beta * r**self.eta)

    def unscaled(self) -> "RayleighSISO":
        return RayleighSISO(1.0, self.eta)

    @property
    def length_scale(self) -> float:
        return self.beta ** (-1.0 / self.eta)

    def closed_moment(self, m: int) -> float:
        a = (m + 1) / self.eta
        return special.gamma(a) / (self.eta * self.beta**a)

    def tail_bound(self, radius: float) -> float:
        return float(math.exp(-self.beta * radius**self.eta))

    def truncation_radius(self, n: int, tau: float) -> float:
        if tau <= 0:
            return math.inf
        thr = 2.0 * tau / (float(n) * n)
        if thr >= 1.0:
            return 0.0
        return (-math.log(thr) / self.beta) ** (1.0 / self.eta)

    def breakpoints(self) -> list[float]:
        return []

    def kernel_params(self):
        return KIND_RAYLEIGH, self.beta, self.eta, _EMPTY, _EMPTY

    def describe(self) -> dict:
        return {"model": "rayleigh", "beta": self.beta, "eta": self.eta}


@dataclass(frozen=True)
class RescaledProfile:
    """Tabulated base profile used as ``g(r / scale)``.

    Values between abscissas are linearly interpolated, values beyond the
    last abscissa are zero.  Monotonicity is *not* enforced here so that
    :func:`validate_conditions` can report violations.
    """

    r: tuple
    values: tuple
    scale: float = 1.0

    kind = "tabulated"
    _r: np.ndarray = field(init=False, repr=False, compare=False)
    _g: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=np.float64).ravel()
        g = np.asarray(self.values, dtype=np.float64).ravel()
        if r.size < 2 or r.size != g.size:
            raise ValueError("profile needs at least two (r, g) rows of equal length")
        if r[0] != 0.0:
            raise ValueError("profile abscissas must start at 0")
        if np.any(np.diff(r) <= 0):
            raise ValueError("profile abscissas must be strictly increasing")
        if not np.all(np.isfinite(g)):
            raise ValueError("profile values must be finite")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale!r}")
        object.__setattr__(self, "r", tuple(r.tolist()))
        object.__setattr__(self, "values", tuple(g.tolist()))
        object.__setattr__(self, "scale", float(self.scale))
        r.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "_r", r)
        object.__setattr__(self, "_g", g)

    def base(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.clip(np.interp(x, self._r, self._g, right=0.0), 0.0, 1.0)

    def g(self, r):
        return self.base(np.asarray(r, dtype=np.float64) / self.scale)

    def unscaled(self) -> "RescaledProfile":
        return RescaledProfile(self.r, self.values, 1.0)

    def with_scale(self, scale: float) -> "RescaledProfile":
        return RescaledProfile(self.r, self.values, scale)

    @property
    def length_scale(self) -> float:
        return self.scale

    def closed_moment(self, m: int):
        return None

    def tail_bound(self, radius: float) -> float:
        x = radius / self.scale
        beyond = self._g[self._r > x]
        cand = [float(self.base(x))]
        if beyond.size:
            cand.append(float(np.clip(beyond.max(), 0.0, 1.0)))
        return max(cand)

    def truncation_radius(self, n: int, tau: float) -> float:
        if tau <= 0:
            return math.inf
        thr = 2.0 * tau / (float(n) * n)
        # smallest r beyond which the profile never exceeds thr
        above = np.nonzero(np.clip(self._g, 0.0, 1.0) > thr)[0]
        if above.size == 0:
            return 0.0
        k = above[-1]
        if k == self._r.size - 1:
            return self._r[k] * self.scale
        r0, r1 = self._r[k], self._r[k + 1]
        g0, g1 = self._g[k], self._g[k + 1]
        x = r0 + (g0 - thr) / (g0 - g1) * (r1 - r0)
        return float(x * self.scale)

    def breakpoints(self) -> list[float]:
        return [x * self.scale for x in self.r[1:]]

    def kernel_params(self):
        return KIND_TABULATED, self.scale, 0.0, self._r, self._g

    def describe(self) -> dict:
        return {"model": "tabulated", "scale": self.scale, "rows": len(self.r)}


def connect_probability(model, r):
    """Edge probability at distance ``r`` (scalar or array)."""
    ra = np.asarray(r, dtype=np.float64)
    if np.any(ra < 0):
        raise ValueError("distance must be non-negative")
    out = model.g(ra)
    return float(out) if np.ndim(out) == 0 else out


def quadrature_moment(model_or_g, m: int, scale: float = 1.0, breakpoints=()) -> float:
    """``int_0^inf g(r) r^m dr`` by adaptive quadrature.

    The half-line is integrated on dyadic pieces ``[0, s], [s, 2s], ...``
    until a piece contributes less than ``1e-14`` of the running total.
    Accepts a model or a plain callable ``g``.
    """
    if hasattr(model_or_g, "g"):
        g = model_or_g.g
        breakpoints = model_or_g.breakpoints()
        scale = max([model_or_g.length_scale, *breakpoints])
    else:
        g = model_or_g

    def f(x):
        return float(g(x)) * x**m

    total = 0.0
    lo, hi = 0.0, float(scale)
    for _ in range(200):
        pts = [b for b in breakpoints if lo < b < hi]
        val, _err = integrate.quad(
            f, lo, hi, points=pts or None, epsabs=QUAD_TOL * 1e-2, epsrel=QUAD_TOL, limit=400
        )
        total += val
        if lo > 0 and abs(val) <= _TAIL_TOL * abs(total) and f(hi) * hi <= _TAIL_TOL * abs(total):
            return total
        lo, hi = hi, 2.0 * hi
    raise DivergentIntegralError(f"moment m={m} does not converge")


def moment(model, m: int) -> float:
    """``H_m`` of the scaled connection function."""
    if int(m) != m or m < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {m!r}")
    closed = model.closed_moment(int(m))
    if closed is not None:
        return float(closed)
    return quadrature_moment(model, int(m))


def constant_C(model) -> float:
    """``C = int_{R^2} g(|x|) dx`` of the unscaled profile."""
    c = 2.0 * math.pi * moment(model.unscaled(), 1)
    if not (0.0 < c < math.inf):
        raise DivergentIntegralError(f"C={c} is not a positive finite number")
    return c


def rayleigh_C(eta: float) -> float:
    """``C_eta = (2 pi / eta) Gamma(2 / eta)``."""
    return 2.0 * math.pi / eta * special.gamma(2.0 / eta)


@dataclass
class ConditionReport:
    monotone: bool
    in_range: bool
    finite_C: bool
    decay: str
    C: float | None = None
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.monotone and self.in_range and self.finite_C and self.decay != "fail"

    def lines(self) -> list[str]:
        out = [
            f"monotone = {'pass' if self.monotone else 'FAIL'}",
            f"range = {'pass' if self.in_range else 'FAIL'}",
            f"finite_C = {'pass' if self.finite_C else 'FAIL'}",
            f"decay = {self.decay}",
        ]
        if self.C is not None:
            out.append(f"C = {self.C:.10g}")
        out.extend(f"note: {d}" for d in self.details)
        return out


def validate_conditions(model, grid_points: int = 4001) -> ConditionReport:
    """Check monotonicity, range, finiteness of C and the decay rate."""
    details = []
    if isinstance(model, RescaledProfile):
        raw = np.asarray(model.values)
        in_range = bool(np.all((raw >= 0) & (raw <= 1)))
        if not in_range:
            details.append("tabulated values outside [0, 1]")
        x = np.union1d(np.asarray(model.r), np.linspace(0, model.r[-1], grid_points))
        vals = np.interp(x, model._r, model._g)
        decay = "unverified"
        details.append("decay beyond the last tabulated radius cannot be checked numerically")
    else:
        x = np.linspace(0.0, 8.0 * model.length_scale, grid_points)
        vals = model.g(x)
        in_range = bool(np.all((vals >= 0) & (vals <= 1)))
        decay = "pass"
    steps = np.diff(vals)
    monotone = bool(np.all(steps <= 1e-15))
    if not monotone:
        k = int(np.argmax(steps > 1e-15))
        details.append(f"g increases between r={x[k]:.6g} and r={x[k + 1]:.6g}")
    try:
        c = constant_C(model)
        finite_C = True
    except DivergentIntegralError as exc:
        c = None
        finite_C = False
        details.append(str(exc))
    return ConditionReport(monotone, in_range, finite_C, decay, c, details)


def load_profile(path, scale: float = 1.0) -> RescaledProfile:
    """Read a two-column ``r g(r)`` text table (``#`` starts a comment)."""
    data = np.loadtxt(Path(path), comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns, got {data.shape[1]}")
    return RescaledProfile(data[:, 0], data[:, 1], scale)


def save_profile(profile: RescaledProfile, path) -> None:
    with open(path, "w") as fh:
        fh.write("# r g(r)\n")
        for r, g in zip(profile.r, profile.values):
            fh.write(f"{r!r} {g!r}\n")


def make_model(kind: str, **params):
    kind = kind.replace("_", "-").lower()
    if kind == "hard-disk":
        return HardDisk(params["r_n"])
    if kind == "rayleigh":
        return RayleighSISO(params.get("beta"), params.get("eta", 2.0),
                            params.get("snr_threshold"), params.get("beta0"))
    if kind == "tabulated":
        return load_profile(params["path"], params.get("scale", 1.0))
    raise ValueError(f"unknown model kind {kind!r}")
