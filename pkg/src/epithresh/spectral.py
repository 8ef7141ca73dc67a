"""Exact spectral baselines: spectral radius, walk spectral gap, mixing time.

The spectral radius is the reference quantity the cheap estimators are
judged against; the gap of the degree-normalized adjacency controls how
many random-walk samples are needed. Both use shifted power iteration so
bipartite +/- eigenvalue pairs cannot stall convergence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = [
    "SpectralResult",
    "SpectralGap",
    "BipartiteGraphError",
    "DisconnectedGraphError",
    "spectral_radius",
    "spectral_gap",
    "tv_mixing_time",
    "stationary_distribution",
    "adjacency_matvec",
    "is_connected",
    "bipartite_coloring",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 100_000

_MIXING_STEP_CAP = 1_000_000
_MIXING_DENSE_LIMIT = 5000


class DisconnectedGraphError(ValueError):
    """Operation requires a connected graph (top eigenvalue would be degenerate)."""


class BipartiteGraphError(ValueError):
    """Raised for walks that cannot mix; carries the detected 2-coloring."""

    def __init__(self, coloring: np.ndarray):
        self.coloring = coloring
        side_a = int((coloring == 0).sum())
        side_b = int((coloring == 1).sum())
        sample_a = np.flatnonzero(coloring == 0)[:5].tolist()
        sample_b = np.flatnonzero(coloring == 1)[:5].tolist()
        super().__init__(
            f"graph is bipartite with parts of size {side_a} and {side_b} "
            f"(e.g. {sample_a} vs {sample_b}); the walk distribution never converges"
        )


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalue estimate with iteration metadata.

    ``converged`` implies the final relative change ``residual`` met the
    tolerance; a False flag is an explicit non-answer, never a silently
    wrong value.
    """

    value: float
    iterations: int
    residual: float
    converged: bool


@dataclass(frozen=True)
class SpectralGap:
    """Second eigenvalue of the normalized adjacency and the gap 1 - lambda2."""

    lambda2: float
    gap: float
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True


def adjacency_matvec(g: Graph, x: np.ndarray) -> np.ndarray:
    """y = A x for the graph adjacency, via segmented reduction over CSR."""
    out = np.zeros(g.n, dtype=np.float64)
    if g.neighbors.size == 0:
        return out
    gathered = x[g.neighbors]
    nonzero = g.degrees > 0
    starts = g.offsets[:-1][nonzero]
    out[nonzero] = np.add.reduceat(gathered, starts)
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    if g.n == 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    reached = 1
    while frontier.size:
        starts = g.offsets[frontier]
        lens = g.offsets[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        pos = np.arange(total) + np.repeat(starts - (np.cumsum(lens) - lens), lens)
        fresh = np.unique(g.neighbors[pos])
        fresh = fresh[~seen[fresh]]
        seen[fresh] = True
        reached += fresh.size
        frontier = fresh
    return reached == g.n


def bipartite_coloring(g: Graph) -> np.ndarray | None:
    """BFS 2-coloring. Returns the color array (0/1 per node) or None if an
    odd cycle exists. Unreached nodes are colored 0."""
    color = np.full(g.n, -1, dtype=np.int8)
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            u = queue.pop()
            cu = color[u]
            for v in g.neighbors_of(u):
                if color[v] < 0:
                    color[v] = 1 - cu
                    queue.append(int(v))
                elif color[v] == cu:
                    return None
    return color.astype(np.int64)


def spectral_radius(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 0,
) -> SpectralResult:
    """Largest adjacency eigenvalue by power iteration on A + I.

    The +I shift makes the Perron value strictly dominant even on bipartite
    graphs, whose +/-lambda pairs stall plain power iteration. The reported
    value is the Rayleigh quotient of A + I minus one. Convergence means the
    relative change of the estimate dropped below ``tol``; on failure the
    result is returned with ``converged=False``.
    """
    if g.n == 0 or g.m == 0:
        raise ValueError("spectral_radius requires a nonempty graph with at least one edge")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.5, 1.5, g.n)
    x /= np.linalg.norm(x)
    estimate = 0.0
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iters + 1):
        y = adjacency_matvec(g, x) + x
        shifted = float(x @ y)  # Rayleigh quotient of A + I; ||x|| == 1
        new_estimate = shifted - 1.0
        residual = abs(new_estimate - estimate) / max(1.0, abs(new_estimate))
        estimate = new_estimate
        norm = np.linalg.norm(y)
        x = y / norm
        if iterations > 1 and residual < tol:
            return SpectralResult(estimate, iterations, residual, True)
    return SpectralResult(estimate, iterations, residual, False)


def spectral_gap(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 0,
) -> SpectralGap:
    """Second-largest eigenvalue of D^{-1/2} A D^{-1/2} and the gap 1 - lambda2.

    Power iteration runs on the shifted operator M + I after deflating the
    analytically known top eigenvector D^{1/2} 1 (eigenvalue exactly 1), so
    the dominant remaining direction is lambda2 + 1 >= 0 regardless of the
    bottom of the spectrum. Requires a connected graph; a disconnected one
    has a multiple top eigenvalue and no well-defined lambda2 this way.
    """
    if g.n == 0 or g.m == 0:
        raise ValueError("spectral_gap requires a nonempty graph with at least one edge")
    if not is_connected(g):
        raise DisconnectedGraphError(
            "graph is disconnected: top eigenvalue multiplicity > 1"
        )
    sqrt_d = np.sqrt(g.degrees.astype(np.float64))
    top = sqrt_d / np.linalg.norm(sqrt_d)

    def normalized_matvec(x: np.ndarray) -> np.ndarray:
        return adjacency_matvec(g, x / sqrt_d) / sqrt_d

    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, g.n)
    x -= (top @ x) * top
    norm = np.linalg.norm(x)
    if norm == 0.0:  # n == 1 cannot happen (m >= 1), but stay safe
        return SpectralGap(0.0, 1.0)
    x /= norm

    estimate = 0.0
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iters + 1):
        y = normalized_matvec(x) + x
        y -= (top @ y) * top  # re-deflate against floating drift
        shifted = float(x @ y)
        new_estimate = shifted - 1.0
        residual = abs(new_estimate - estimate) / max(1.0, abs(new_estimate))
        estimate = new_estimate
        norm = float(np.linalg.norm(y))
        if norm < 1e-300:
            # Deflated operator annihilated x: lambda2 + 1 == 0 exactly.
            return SpectralGap(-1.0, 2.0, iterations, 0.0, True)
        x = y / norm
        if iterations > 1 and residual < tol:
            break
    lambda2 = float(np.clip(estimate, -1.0, 1.0))
    return SpectralGap(
        lambda2, 1.0 - lambda2, iterations, residual, residual < tol
    )


def stationary_distribution(g: Graph) -> np.ndarray:
    """Stationary distribution of the simple random walk: pi_v = d_v / sum(d).

    Isolated nodes get probability zero; extract the component first if the
    walk is meant to be irreducible.
    """
    if g.m == 0:
        raise ValueError("stationary distribution undefined on an edgeless graph")
    deg = g.degrees.astype(np.float64)
    return deg / deg.sum()


def tv_mixing_time(g: Graph, start: int, threshold: float | None = None) -> int:
    """Smallest t with ||q_t - pi||_1 <= threshold for the exact walk distribution.

    q_t is propagated exactly by iterated sparse transition application from
    a point mass at ``start``. The default threshold is the literal value
    1/n^2. Errors on bipartite graphs (the distribution oscillates forever)
    naming the 2-coloring, and if the threshold is not reached within 1e6
    steps.
    """
    if threshold is None:
        threshold = 1.0 / (g.n * g.n) if g.n else 1.0
    if g.n > _MIXING_DENSE_LIMIT:
        raise ValueError(
            f"tv_mixing_time supports n <= {_MIXING_DENSE_LIMIT}, got {g.n}"
        )
    if g.m == 0:
        raise ValueError("mixing time undefined on an edgeless graph")
    if not (0 <= start < g.n):
        raise ValueError(f"start node {start} out of range [0, {g.n})")
    if not is_connected(g):
        raise DisconnectedGraphError("mixing time undefined on a disconnected graph")
    coloring = bipartite_coloring(g)
    if coloring is not None:
        raise BipartiteGraphError(coloring)

    pi = stationary_distribution(g)
    deg = g.degrees.astype(np.float64)
    q = np.zeros(g.n, dtype=np.float64)
    q[start] = 1.0
    for t in range(_MIXING_STEP_CAP + 1):
        if float(np.abs(q - pi).sum()) <= threshold:
            return t
        q = adjacency_matvec(g, q / deg)  # A is symmetric: q Q == A (q / d)
    raise RuntimeError(
        f"TV distance did not reach {threshold} within {_MIXING_STEP_CAP} steps"
    )
