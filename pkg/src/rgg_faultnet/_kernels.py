"""Compiled inner loops: edge sampling streamed into a union-find.

Edge randomness is counter based: the uniform deciding pair ``(i, j)`` is
``splitmix64(key + (i * s + j) * golden)``, so the decision for a pair does
not depend on the order in which pairs are visited.  Pairs farther apart
than ``radius`` are handled by a thinned geometric-skip pass over all
``s (s - 1) / 2`` pairs with acceptance bound ``pbar >= sup_{d > radius} g``.
"""

from math import exp, floor, log, log1p, sqrt

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TAIL_SALT = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@nb.njit(inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(inline="always")
def uniform(key, counter):
    """Uniform on [0, 1) from a 64-bit key and counter."""
    z = mix64(key + (counter + np.uint64(1)) * _GOLDEN)
    return float(z >> _S11) * _INV53


@nb.njit(inline="always")
def pair_counter(i, j, s):
    lo = min(i, j)
    hi = max(i, j)
    return np.uint64(lo) * np.uint64(s) + np.uint64(hi)


@nb.njit(inline="always")
def dist2(xs, ys, i, j, torus):
    dx = abs(xs[i] - xs[j])
    dy = abs(ys[i] - ys[j])
    if torus:
        if dx > 0.5:
            dx = 1.0 - dx
        if dy > 0.5:
            dy = 1.0 - dy
    return dx * dx + dy * dy


@nb.njit(inline="always")
def conn_prob(kind, p0, p1, tab_r, tab_g, d2):
    if kind == 0:
        return 1.0 if d2 <= p0 * p0 else 0.0
    if kind == 1:
        if p1 == 2.0:
            return exp(-p0 * d2)
        return exp(-p0 * d2 ** (0.5 * p1))
    x = sqrt(d2) / p0
    last = tab_r.size - 1
    if x > tab_r[last]:
        return 0.0
    k = np.searchsorted(tab_r, x, side="right") - 1
    if k >= last:
        v = tab_g[last]
    else:
        t = (x - tab_r[k]) / (tab_r[k + 1] - tab_r[k])
        v = tab_g[k] + t * (tab_g[k + 1] - tab_g[k])
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


@nb.njit(inline="always")
def uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@nb.njit(inline="always")
def uf_union(parent, rank, a, b):
    ra = uf_find(parent, a)
    rb = uf_find(parent, b)
    if ra == rb:
        return False
    if rank[ra] < rank[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    if rank[ra] == rank[rb]:
        rank[ra] += 1
    return True


@nb.njit(cache=True)
def scan_pairs(xs, ys, torus, kind, p0, p1, tab_r, tab_g, radius, K, m, pbar, key, record, edges):
    """Sample edges and merge them into a union-find.

    Returns ``(components, edge_count)``.  With ``record`` false the scan
    stops as soon as one component remains.  With ``record`` true edges are
    written to ``edges``; ``edge_count == -1`` signals the buffer was too
    small.
    """
    s = xs.size
    if s <= 1:
        return s, 0
    parent = np.arange(s)
    rank = np.zeros(s, dtype=np.int8)
    comps = s
    n_edges = 0
    r2 = radius * radius

    # counting sort into a K x K grid of cells
    ncell = K * K
    start = np.zeros(ncell + 1, dtype=np.int64)
    cell = np.empty(s, dtype=np.int64)
    for i in range(s):
        cx = min(int(xs[i] * K), K - 1)
        cy = min(int(ys[i] * K), K - 1)
        c = cx * K + cy
        cell[i] = c
        start[c + 1] += 1
    for c in range(ncell):
        start[c + 1] += start[c]
    fill = start[:-1].copy()
    order = np.empty(s, dtype=np.int64)
    for i in range(s):
        order[fill[cell[i]]] = i
        fill[cell[i]] += 1

    for cx in range(K):
        for cy in range(K):
            c = cx * K + cy
            a0 = start[c]
            a1 = start[c + 1]
            if a0 == a1:
                continue
            for ox in range(-m, m + 1):
                nx = cx + ox
                if torus:
                    nx = nx % K
                elif nx < 0 or nx >= K:
                    continue
                for oy in range(-m, m + 1):
                    ny = cy + oy
                    if torus:
                        ny = ny % K
                    elif ny < 0 or ny >= K:
                        continue
                    c2 = nx * K + ny
                    if c2 < c:
                        continue
                    b1 = start[c2 + 1]
                    for a in range(a0, a1):
                        i = order[a]
                        b0 = a + 1 if c2 == c else start[c2]
                        for b in range(b0, b1):
                            j = order[b]
                            d2 = dist2(xs, ys, i, j, torus)
                            if d2 > r2:
                                continue
                            gv = conn_prob(kind, p0, p1, tab_r, tab_g, d2)
                            if gv <= 0.0:
                                continue
                            if gv < 1.0:
                                if uniform(key, pair_counter(i, j, s)) >= gv:
                                    continue
                            if record:
                                if n_edges >= edges.shape[0]:
                                    return comps, -1
                                edges[n_edges, 0] = min(i, j)
                                edges[n_edges, 1] = max(i, j)
                                n_edges += 1
                            if uf_union(parent, rank, i, j):
                                comps -= 1
                                if comps == 1 and not record:
                                    return comps, n_edges

    if pbar > 0.0:
        npairs = s * (s - 1) // 2
        key2 = mix64(key ^ _TAIL_SALT)
        ctr = np.uint64(0)
        lq = log1p(-pbar) if pbar < 1.0 else 0.0
        k = -1
        while True:
            if pbar < 1.0:
                u = 1.0 - uniform(key2, ctr)
                ctr += np.uint64(1)
                skip = log(u) / lq
                if skip >= npairs:
                    break
                k += 1 + int(floor(skip))
            else:
                k += 1
            if k >= npairs:
                break
            j = int((1.0 + sqrt(1.0 + 8.0 * k)) / 2.0)
            while j * (j - 1) // 2 > k:
                j -= 1
            while (j + 1) * j // 2 <= k:
                j += 1
            i = k - j * (j - 1) // 2
            d2 = dist2(xs, ys, i, j, torus)
            if d2 <= r2:
                continue
            gv = conn_prob(kind, p0, p1, tab_r, tab_g, d2)
            if gv <= 0.0:
                continue
            u2 = uniform(key2, ctr)
            ctr += np.uint64(1)
            if u2 * pbar >= gv:
                continue
            if record:
                if n_edges >= edges.shape[0]:
                    return comps, -1
                edges[n_edges, 0] = i
                edges[n_edges, 1] = j
                n_edges += 1
            if uf_union(parent, rank, i, j):
                comps -= 1
                if comps == 1 and not record:
                    return comps, n_edges
    return comps, n_edges


@nb.njit(cache=True)
def components(n, edges):
    """Component count and isolated-node count of an edge list."""
    if n == 0:
        return 0, 0
    parent = np.arange(n)
    rank = np.zeros(n, dtype=np.int8)
    deg = np.zeros(n, dtype=np.int64)
    comps = n
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        deg[a] += 1
        deg[b] += 1
        if uf_union(parent, rank, a, b):
            comps -= 1
    isolated = 0
    for i in range(n):
        if deg[i] == 0:
            isolated += 1
    return comps, isolated


@nb.njit(cache=True)
def fixed_graph_trials(gmat, alive, keys):
    """Count disconnected survival graphs on a frozen point set.

    ``gmat`` holds pairwise edge probabilities, ``alive`` is a
    ``(trials, n)`` survivor mask and ``keys`` one edge key per trial.
    """
    trials, n = alive.shape
    parent = np.empty(n, dtype=np.int64)
    rank = np.zeros(n, dtype=np.int8)
    idx = np.empty(n, dtype=np.int64)
    bad = 0
    for t in range(trials):
        s = 0
        for i in range(n):
            if alive[t, i]:
                idx[s] = i
                s += 1
        if s <= 1:
            continue
        for a in range(s):
            parent[a] = a
            rank[a] = 0
        comps = s
        for a in range(s):
            i = idx[a]
            for b in range(a + 1, s):
                j = idx[b]
                gv = gmat[i, j]
                if gv <= 0.0:
                    continue
                if gv < 1.0 and uniform(keys[t], pair_counter(i, j, n)) >= gv:
                    continue
                if uf_union(parent, rank, a, b):
                    comps -= 1
            if comps == 1:
                break
        if comps > 1:
            bad += 1
    return bad
