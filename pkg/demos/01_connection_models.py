"""Connection functions, their moments and the constant C.

Walks through the three connection models, checks the closed-form moments
against quadrature and shows how rescaling a profile leaves C unchanged.
"""

import math

import numpy as np

from rgg_faultnet.connmodel import (
    HardDisk,
    RayleighSISO,
    RescaledProfile,
    constant_C,
    moment,
    quadrature_moment,
    rayleigh_C,
    validate_conditions,
)

# A hard disk joins nodes within r_n; a Rayleigh link succeeds with exp(-beta r^eta).
disk = HardDisk(0.1)
fading = RayleighSISO(beta=400.0, eta=2.0)
r = np.array([0.0, 0.05, 0.1, 0.15])
print("r          ", r)
print("hard disk  ", disk.g(r))
print("rayleigh   ", np.round(fading.g(r), 4))

# Moments H_m = int g(r) r^m dr have closed forms; quadrature agrees.
for m in (0, 1, 2):
    print(f"H_{m}: closed {moment(fading, m):.12g}  quadrature {quadrature_moment(fading, m):.12g}")

# C is the integral of the unscaled profile over the plane.
for eta in (2, 3, 4, 6):
    print(f"eta={eta}: C = {constant_C(RayleighSISO(1.0, eta)):.10f}  (2 pi / eta) Gamma(2 / eta) = {rayleigh_C(eta):.10f}")
print("C4 = pi^(3/2) / 2 =", math.pi**1.5 / 2)

# A tabulated profile can be squeezed to any length scale; C does not move.
tri = RescaledProfile([0.0, 0.5, 1.0], [1.0, 0.6, 0.0])
for s in (1.0, 0.1, 0.01):
    p = tri.with_scale(s)
    print(f"scale {s:5}: H1 = {moment(p, 1):.3e}, C = {constant_C(p):.10f}")

# The sanity checks flag a profile that rises with distance.
bad = RescaledProfile([0.0, 0.1, 0.2, 0.3], [0.2, 0.2, 0.5, 0.0])
print("\n".join(validate_conditions(bad).lines()))
