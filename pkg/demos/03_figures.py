"""Reduced versions of the three figure presets.

The full presets are available from the command line::

    rgg-faultnet preset fig1
    rgg-faultnet preset fig2 --out fig2.csv
    rgg-faultnet preset fig3 --out fig3.csv

Here the grids are thinned so the script runs in well under a minute.
"""

import math

from rgg_faultnet.analytics import beta_critical, fig1_threshold
from rgg_faultnet.experiment import format_row, preset_plan, run_plan

# Fault threshold against path loss exponent: rises from 0 towards 1 - 1/pi.
for eta in (2, 3, 4, 6, 10, 50, 1000):
    print(f"eta={eta:5}: epsilon* = {fig1_threshold(eta):.4f}")
print(f"limit 1 - 1/pi = {1 - 1 / math.pi:.4f}")

# Breakdown probability against the fault rate (eta = 2).
plan = preset_plan("fig2", n=[256], epsilon=[0.3, 0.4, 0.5, 0.6], trials=2000)
print("\nfig2 rows (n, eta, beta, delta, epsilon, metric, trials, disconnected, p_hat, ci_low, ci_high, p_approx)")
for row in run_plan(plan):
    print(format_row(row))

# Breakdown probability against transmit power (eta = 4, beta = delta beta_c).
print(f"\nbeta_c for n=1024: {beta_critical(1024, 4.0):.4e}")
plan = preset_plan("fig3", n=[1024], delta=[0.6, 1.0, 1.4], epsilon=[0.1], trials=500)
for row in run_plan(plan):
    print(f"delta={row.delta:.1f}: p_hat={row.p_hat:.3f}  approx={row.p_approx:.3f}")
