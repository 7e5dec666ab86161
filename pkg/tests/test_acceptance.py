"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict in ``VERDICTS``; ``conftest.py``
prints them at the end of the session.  Run on its own with

    pytest tests/test_acceptance.py -v -s
    python -m tests.test_acceptance
"""

import math
import time

import numpy as np
import pytest

from rgg_faultnet.analytics import (
    approx_breakdown_rayleigh_delta,
    approx_fig2,
    asymptotic_consistency_check,
    beta_critical,
    beta_threshold,
    critical_radius,
    epsilon_threshold,
    fig1_threshold,
)
from rgg_faultnet.connmodel import HardDisk, RayleighSISO, constant_C, moment, quadrature_moment, rayleigh_C
from rgg_faultnet.experiment import frange
from rgg_faultnet.faultsim import estimate_breakdown, estimate_fixed_points, wilson_interval
from rgg_faultnet.geometry import Metric, PointSet, sample_uniform
from rgg_faultnet.graphcore import GraphInstance, is_connected, sample_graph

from .oracles import c_eta_polar, dfs_components, exact_breakdown_hard_disk, quad_moment

pytestmark = pytest.mark.acceptance

VERDICTS: dict[int, str] = {}

SEED = 20240601


def _record(k: int, ok: bool, detail: str, started: float) -> None:
    VERDICTS[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}  ({time.perf_counter() - started:.1f}s)"


def fig2_beta(n):
    return math.pi * n / (2 * math.log(n))


# 1 -------------------------------------------------------------------------

def test_c01_exact_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    model = HardDisk(0.35)
    misses, worst = [], 0.0
    for k in range(10):
        ps = PointSet(sample_uniform(10, rng, Metric.SQUARE).xy, Metric.SQUARE)
        for eps in (0.1, 0.3, 0.5):
            exact = exact_breakdown_hard_disk(ps.xy, model.r_n, eps)
            est = estimate_fixed_points(ps, model, eps, trials=100_000, master_seed=SEED + k)
            lo, hi = wilson_interval(est.disconnected_count, est.trials, 0.99)
            worst = max(worst, abs(est.p_hat - exact))
            if not lo <= exact <= hi:
                misses.append((k, eps, exact, est.p_hat))
    ok = not misses
    _record(1, ok, f"30 comparisons, {len(misses)} outside 99% Wilson, max |p_hat - exact| = {worst:.4f}", t0)
    assert ok, misses


# 2 -------------------------------------------------------------------------

def _fig2_rows(n):
    model = RayleighSISO(fig2_beta(n), 2.0)
    rows = []
    for eps in frange(0.0, 0.6, 0.05):
        est = estimate_breakdown(n, model, eps, Metric.TORUS, trials=10_000, master_seed=SEED)
        rows.append((eps, est, approx_fig2(n, eps)))
    return rows


def test_c02_fig2_reproduction():
    t0 = time.perf_counter()
    bad, near = [], {}
    for n in (256, 1024):
        rows = _fig2_rows(n)
        for eps, est, ap in rows:
            tol = max(0.03, 3 * est.half_width)
            if abs(est.p_hat - ap) > tol:
                bad.append((n, eps, est.p_hat, ap))
        near[n] = np.mean([abs(est.p_hat - ap) for eps, est, ap in rows if abs(eps - 0.5) < 0.06])
    shrinks = near[1024] < near[256]
    ok = not bad and shrinks
    _record(2, ok, f"{len(bad)} grid points outside tolerance; mean gap near eps=0.5: "
                   f"n=256 {near[256]:.4f}, n=1024 {near[1024]:.4f}", t0)
    assert not bad, bad
    assert shrinks, near


# 3 -------------------------------------------------------------------------

def test_c03_fig3_reproduction():
    t0 = time.perf_counter()
    n = 4096
    worst = (0.0, None)
    for eps in (0.0, 0.1, 0.25):
        for d in frange(0.5, 2.0, 0.1):
            model = RayleighSISO(d * beta_critical(n, 4.0), 4.0)
            est = estimate_breakdown(n, model, eps, Metric.TORUS, trials=1000, master_seed=SEED, truncation=1e-4)
            dev = abs(est.p_hat - approx_breakdown_rayleigh_delta(n, eps, d))
            if dev > worst[0]:
                worst = (dev, (eps, d))
    ok = worst[0] <= 0.05
    _record(3, ok, f"max |p_hat - formula| = {worst[0]:.4f} at (eps, delta) = {worst[1]}", t0)
    assert ok, worst


# 4 -------------------------------------------------------------------------

def test_c04_fig1_curve():
    t0 = time.perf_counter()
    c4_quad = c_eta_polar(4.0)
    c4_ok = abs(c4_quad - rayleigh_C(4.0)) < 1e-9 and abs(constant_C(RayleighSISO(1.0, 4.0)) - c4_quad) < 1e-9
    e2 = fig1_threshold(2.0)
    e4 = 1 - math.sqrt(math.pi) / c4_quad
    curve = fig1_threshold(np.array(frange(2.0, 10.0, 0.1)))
    monotone = bool(np.all(np.diff(curve) > 0))
    gap50 = abs(fig1_threshold(50.0) - (1 - 1 / math.pi))
    checks = {
        "eps*(2)=0": e2 == 0.0,
        "eps*(4)=0.3634": abs(e4 - 0.3634) <= 1e-4 and abs(fig1_threshold(4.0) - e4) < 1e-12,
        "C4 by quadrature": c4_ok,
        "monotone": monotone,
        "eta=50 within 0.02": gap50 < 0.02,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    _record(4, ok, f"eps*(4)={e4:.6f}, gap to 1-1/pi at eta=50 = {gap50:.5f}; failed: {failed or 'none'}", t0)
    assert ok, checks


# 5 -------------------------------------------------------------------------

def test_c05_threshold_algebra():
    t0 = time.perf_counter()
    worst_rt = worst_ratio = 0.0
    for eta in (2.0, 3.0, 4.0, 6.0):
        for eps in frange(0.0, 0.8, 0.1):
            for n in (1e2, 1e3, 1e4, 1e6, 1e8):
                back = epsilon_threshold(n, eta, beta_threshold(n, eta, eps))
                worst_rt = max(worst_rt, abs(back - eps))
                ratio = critical_radius(n, rayleigh_C(eta), 0.0, eps) / critical_radius(n, rayleigh_C(eta), 0.0, 0.0)
                worst_ratio = max(worst_ratio, abs(ratio - (1 - eps) ** -0.5))
    ok = worst_rt <= 1e-12 and worst_ratio <= 1e-12
    _record(5, ok, f"180 points, max round-trip error {worst_rt:.2e}, max ratio error {worst_ratio:.2e}", t0)
    assert ok


# 6 -------------------------------------------------------------------------

def test_c06_asymptotic_consistency():
    t0 = time.perf_counter()
    ns = [1e4, 1e6, 1e8]
    not_decreasing, last = [], []
    for b in (-1.0, 0.0, 1.0):
        for eps in (0.0, 0.25, 0.5):
            rep = asymptotic_consistency_check(ns, b=b, epsilon=eps)
            if not rep.decreasing:
                not_decreasing.append((b, eps))
            last.append(rep.gaps[-1])
    small = max(last) < 0.03
    ok = not not_decreasing and small
    _record(6, ok, f"gaps decreasing in {9 - len(not_decreasing)}/9 cases; "
                   f"gap at n=1e8 ranges {min(last):.4f} to {max(last):.4f} (required < 0.03)", t0)
    assert not not_decreasing
    assert small, last


# 7 -------------------------------------------------------------------------

def test_c07_numerical_cross_checks():
    t0 = time.perf_counter()
    worst = 0.0
    models = [HardDisk(r) for r in (0.01, 0.1, 0.5, 2.0)]
    models += [RayleighSISO(b, e) for e in (2.0, 3.0, 4.0, 6.0) for b in (0.5, 1.0, 10.0)]
    for m in models:
        for k in (0, 1, 2):
            closed = moment(m, k)
            jumps = [m.r_n] if isinstance(m, HardDisk) and m.r_n < 1 else []
            for q in (quadrature_moment(m, k), quad_moment(m.g, k, jumps)):
                worst = max(worst, abs(q - closed) / closed)
    c_err = 0.0
    for m in models:
        ref = math.pi if isinstance(m, HardDisk) else rayleigh_C(m.eta)
        c_err = max(c_err, abs(constant_C(m) - 2 * math.pi * quad_moment(m.unscaled().g, 1)) / ref)
        c_err = max(c_err, abs(constant_C(m) - ref) / ref)
    ok = worst <= 1e-9 and c_err <= 1e-9
    _record(7, ok, f"{len(models) * 3} moments, max rel error {worst:.2e}; C max rel error {c_err:.2e}", t0)
    assert ok


# 8 -------------------------------------------------------------------------

def test_c08_determinism_across_workers():
    t0 = time.perf_counter()
    runs = [
        (256, RayleighSISO(fig2_beta(256), 2.0), 0.5, 10_000, 0.0),
        (4096, RayleighSISO(beta_critical(4096, 4.0), 4.0), 0.1, 1000, 1e-4),
    ]
    mismatches = []
    for n, model, eps, trials, tau in runs:
        counts = [estimate_breakdown(n, model, eps, Metric.TORUS, trials, SEED, tau, workers=w).disconnected_count
                  for w in (1, 2, 8)]
        if len(set(counts)) != 1:
            mismatches.append((n, counts))
    again = estimate_breakdown(256, runs[0][1], 0.5, Metric.TORUS, 10_000, SEED).disconnected_count
    ok = not mismatches and again == estimate_breakdown(256, runs[0][1], 0.5, Metric.TORUS, 10_000,
                                                        SEED, workers=8).disconnected_count
    _record(8, ok, f"fig2 and fig3 points under 1, 2, 8 workers; mismatches: {mismatches or 'none'}", t0)
    assert ok


# 9 -------------------------------------------------------------------------

def _random_instance(rng):
    n = int(rng.integers(1, 501))
    kind = rng.integers(0, 4)
    if kind == 0:
        # Erdos-Renyi around the connectivity threshold
        m = int(rng.poisson(0.5 * n * max(math.log(max(n, 2)), 0.5) * rng.uniform(0.5, 1.5)))
        e = rng.integers(0, n, size=(m, 2))
    elif kind == 1:
        # random forest
        parent = [int(rng.integers(0, i)) if i and rng.random() < 0.97 else -1 for i in range(n)]
        e = np.array([(p, i) for i, p in enumerate(parent) if p >= 0]).reshape(-1, 2)
    elif kind == 2:
        ps = sample_uniform(n, rng, Metric.TORUS if rng.random() < 0.5 else Metric.SQUARE)
        r = math.sqrt(max(math.log(max(n, 2)), 0.5) / (math.pi * n)) * rng.uniform(0.7, 1.3)
        return n, sample_graph(ps, HardDisk(r), rng).edges
    else:
        ps = sample_uniform(n, rng, Metric.TORUS)
        beta = max(n, 2) / max(math.log(max(n, 2)), 0.5) * rng.uniform(0.5, 4.0)
        return n, sample_graph(ps, RayleighSISO(beta, 2.0), rng).edges
    e = np.sort(e, axis=1)
    e = e[e[:, 0] != e[:, 1]]
    return n, e


def test_c09_union_find_vs_dfs():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    agree = connected = 0
    for _ in range(1000):
        n, e = _random_instance(rng)
        g = GraphInstance(n, e)
        v = is_connected(g)
        comps = dfs_components(n, [tuple(x) for x in g.edges.tolist()])
        agree += (v.connected == (comps <= 1)) and v.component_count == comps
        connected += v.connected
    ok = agree == 1000
    _record(9, ok, f"{agree}/1000 verdicts agree ({connected} connected instances)", t0)
    assert ok


# 10 ------------------------------------------------------------------------

def test_c10_truncation_bias():
    t0 = time.perf_counter()
    n = 4096
    details, ok = [], True
    for eps, d in ((0.0, 1.0), (0.1, 0.8), (0.25, 0.6)):
        model = RayleighSISO(d * beta_critical(n, 4.0), 4.0)
        exact = estimate_breakdown(n, model, eps, Metric.TORUS, 1000, SEED, truncation=0.0)
        trunc = estimate_breakdown(n, model, eps, Metric.TORUS, 1000, SEED, truncation=1e-4)
        diff = abs(exact.p_hat - trunc.p_hat)
        ok &= diff < exact.half_width
        details.append(f"({eps}, {d}): {diff:.4f} < {exact.half_width:.4f}")
    _record(10, ok, "; ".join(details), t0)
    assert ok


def main() -> int:
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
        print(list(VERDICTS.values())[-1], flush=True)
    print(f"{len(tests) - failed}/{len(tests)} criteria pass")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
