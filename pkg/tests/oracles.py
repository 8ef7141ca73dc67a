"""Independent test oracles.

Everything here is deliberately implemented from scratch, without reusing
the library's code paths, so tests compare two unrelated routes to the same
quantity: a cyclic Jacobi eigensolver for spectral values, dict-of-sets
degree recounts for graph statistics, dense transition-matrix iteration for
walk distributions, and a Hill estimator for tail exponents.
"""

from __future__ import annotations

import numpy as np


def dense_adjacency(g) -> np.ndarray:
    """Dense adjacency rebuilt edge-by-edge from the CSR arrays."""
    a = np.zeros((g.n, g.n), dtype=np.float64)
    for u in range(g.n):
        for v in g.neighbors[g.offsets[u] : g.offsets[u + 1]]:
            a[u, int(v)] = 1.0
    return a


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return a.diagonal().copy()
    scale = max(1.0, float(np.abs(a).max()))
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, (a**2).sum() - (a.diagonal() ** 2).sum()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-30 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                rows = a[[p, q], :]
                a[[p, q], :] = rot.T @ rows
                cols = a[:, [p, q]]
                a[:, [p, q]] = cols @ rot
                a[p, q] = a[q, p] = 0.0  # annihilated exactly by construction
    return np.sort(a.diagonal())


def jacobi_spectral_radius(g) -> float:
    """Largest-magnitude adjacency eigenvalue via the dense Jacobi route."""
    eigs = jacobi_eigenvalues(dense_adjacency(g))
    return float(np.abs(eigs).max())


def recount_degree_sums(edges, n: int) -> tuple[int, int, list[int]]:
    """Brute-force m1, m2 and degree list from a raw edge list, using a
    dict of neighbor sets (no CSR involved)."""
    adjacency: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        if u == v:
            continue
        adjacency[u].add(v)
        adjacency[v].add(u)
    degrees = [len(adjacency[v]) for v in range(n)]
    m1 = sum(degrees)
    m2 = sum(d * d for d in degrees)
    return m1, m2, degrees


def exact_walk_distribution(g, start: int, steps: int) -> np.ndarray:
    """t-step distribution of the simple random walk by dense matrix products."""
    a = dense_adjacency(g)
    deg = a.sum(axis=1)
    transition = a / deg[:, None]
    q = np.zeros(g.n)
    q[start] = 1.0
    for _ in range(steps):
        q = q @ transition
    return q


def pi_weighted_mean_degree(g) -> float:
    """Expected sampled degree under the degree-proportional distribution,
    computed directly from the definition."""
    deg = g.degrees.astype(np.float64)
    pi = deg / deg.sum()
    return float((pi * deg).sum())


def hill_tail_exponent(samples: np.ndarray, top_fraction: float = 0.05) -> float:
    """Hill estimator of the Pareto tail index over the largest order statistics."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    k = max(10, int(len(x) * top_fraction))
    tail = x[-k:]
    return 1.0 / float(np.mean(np.log(tail / tail[0])))


def ccdf_slope(degrees: np.ndarray, d_low: int, d_high: int) -> float:
    """Log-log least-squares slope of the degree CCDF on [d_low, d_high]."""
    deg = np.asarray(degrees)
    ds = np.arange(d_low, d_high + 1)
    ccdf = np.array([(deg >= d).mean() for d in ds])
    keep = ccdf > 0
    x = np.log(ds[keep].astype(np.float64))
    y = np.log(ccdf[keep])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)
