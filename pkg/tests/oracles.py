"""Slow, independent reference implementations used by the tests.

Nothing here imports the package under test.
"""

import itertools
import math

import numpy as np
from scipy import integrate, special


def torus_distance(a, b):
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    dx = min(dx, 1 - dx)
    dy = min(dy, 1 - dy)
    return math.hypot(dx, dy)


def dfs_components(n, edges):
    """Component count by iterative depth-first search."""
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    comps = 0
    for start in range(n):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return comps


def exact_breakdown_hard_disk(xy, r_n, epsilon):
    """Exact fault-averaged breakdown probability by enumerating survivor sets.

    Hard-disk graphs are deterministic given the points, so the only
    randomness is the fault set: sum over all 2^n subsets.
    """
    n = len(xy)
    d = np.hypot(*(xy[:, None, :] - xy[None, :, :]).transpose(2, 0, 1))
    adj = d <= r_n
    kappa = 1.0 - epsilon
    total = 0.0
    for mask in itertools.product((0, 1), repeat=n):
        alive = [i for i in range(n) if mask[i]]
        s = len(alive)
        if s <= 1:
            continue
        edges = [(a, b) for a in range(s) for b in range(a + 1, s) if adj[alive[a], alive[b]]]
        if dfs_components(s, edges) > 1:
            total += kappa**s * epsilon ** (n - s)
    return total


def quad_moment(g, m, jumps=()):
    """int_0^inf g(r) r^m dr over [0, 1] and [1, inf); ``jumps`` lists discontinuities in (0, 1)."""
    a, _ = integrate.quad(lambda r: g(r) * r**m, 0, 1, points=list(jumps) or None,
                          epsabs=1e-14, epsrel=1e-13, limit=500)
    b, _ = integrate.quad(lambda r: g(r) * r**m, 1, np.inf, epsabs=1e-14, epsrel=1e-13, limit=500)
    return a + b


def rayleigh_moment_series(beta, eta, m):
    """Closed form via the substitution t = beta r^eta, written independently."""
    a = (m + 1.0) / eta
    return math.exp(math.lgamma(a) - a * math.log(beta)) / eta


def c_eta_polar(eta):
    """C_eta = int_{R^2} exp(-|x|^eta) dx evaluated as a 2D polar integral."""
    val, _ = integrate.dblquad(lambda r, th: math.exp(-r**eta) * r, 0, 2 * math.pi, 0, np.inf,
                               epsabs=1e-13, epsrel=1e-12)
    return val


def torus_expected_edges(n, g):
    """Expected edge count on the torus: C(n,2) * E[g(d)], d between two uniform points."""
    # density of the torus difference vector is uniform on [-1/2, 1/2]^2
    val, _ = integrate.dblquad(lambda y, x: g(math.hypot(x, y)), 0, 0.5, 0, 0.5,
                               epsabs=1e-12, epsrel=1e-10)
    return 0.5 * n * (n - 1) * 4 * val


def isolated_node_prob_torus(n, g):
    """P(a given node has no neighbour) on the torus; independent quadrature."""
    val, _ = integrate.dblquad(lambda y, x: g(math.hypot(x, y)), 0, 0.5, 0, 0.5,
                               epsabs=1e-12, epsrel=1e-10)
    return (1.0 - 4.0 * val) ** (n - 1)


def gamma(x):
    return float(special.gamma(x))
