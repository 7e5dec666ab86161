"""Monte Carlo breakdown probability under random node faults.

Samples one faulty network, estimates the breakdown probability at the
threshold epsilon* = 1/2 of the eta = 2 Rayleigh model, and compares it with
the isolated-node approximation.  Then brackets the estimate with the
conditional sandwich bound.
"""

import math

import numpy as np

from rgg_faultnet.analytics import approx_fig2, epsilon_threshold
from rgg_faultnet.connmodel import RayleighSISO
from rgg_faultnet.faultsim import estimate_breakdown, lemma1_bounds
from rgg_faultnet.geometry import Metric, sample_uniform
from rgg_faultnet.graphcore import is_connected, sample_graph

n = 512
model = RayleighSISO(math.pi * n / (2 * math.log(n)), 2.0)
print(f"n={n}, beta={model.beta:.2f}, threshold epsilon* = {epsilon_threshold(n, 2.0, model.beta):.3f}")

# One realisation: delete 40% of the nodes, join survivors, check connectivity.
rng = np.random.default_rng(1)
pts = sample_uniform(n, rng, Metric.TORUS)
alive = pts.subset(np.flatnonzero(rng.random(n) >= 0.4))
g = sample_graph(alive, model, rng)
v = is_connected(g)
print(f"{g.node_count} survivors, {g.edge_count} edges, {v.component_count} components, {v.isolated_count} isolated")

# Breakdown probability across the threshold.
for eps in (0.3, 0.4, 0.5, 0.6):
    est = estimate_breakdown(n, model, eps, Metric.TORUS, trials=2000, master_seed=7)
    print(f"eps={eps:.1f}: p_hat={est.p_hat:.3f} [{est.ci_low:.3f}, {est.ci_high:.3f}]  "
          f"approx={approx_fig2(n, eps):.3f}")

# The survivor count concentrates near kappa n; conditioning on it gives a bracket.
b = lemma1_bounds(n, model, 0.4, Metric.TORUS, trials_per_s=300, master_seed=7)
print(f"survivors in [{b.s_minus}, {b.s_plus}], slack {b.slack:.4f}: "
      f"{b.lower:.3f} <= P <= {b.upper:.3f}")
