"""Immutable sparse undirected graphs with degree statistics and edge-list I/O.

Graphs are stored in compressed sparse row form: a flat, per-node-sorted
neighbor array plus an offsets array. Node ids are dense 0-based integers;
external ids must be mapped before construction. All downstream determinism
(generators, walks, experiments) relies on the canonical sorted storage here.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Graph",
    "DegreeStats",
    "BuildReport",
    "EdgeListParseError",
    "build_graph",
    "build_graph_with_report",
    "degree_stats",
    "largest_component",
    "read_edge_list",
    "write_edge_list",
]

# Chunk size for overflow-safe integer reductions; each chunk's int64 partial
# sum stays far below 2**63 even at n = 1e7, d_max = 1e7.
_SUM_CHUNK = 10_000


class EdgeListParseError(ValueError):
    """Raised when an edge-list file cannot be parsed; carries the line number."""

    def __init__(self, path: str, line_no: int, message: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in compressed sparse form.

    Attributes
    ----------
    n : int
        Node count.
    m : int
        Undirected edge count; ``len(neighbors) == 2 * m``.
    offsets : ndarray of int64, shape (n + 1,)
        Nondecreasing start indices into ``neighbors``; ``offsets[n] == 2m``.
    neighbors : ndarray of int64, shape (2m,)
        Flat adjacency, sorted ascending within each node's slice. Symmetric:
        u appears in v's slice iff v appears in u's. No self-loops, no
        duplicate entries.
    degrees : ndarray of int64, shape (n,)
        Per-node degree, ``offsets[v+1] - offsets[v]``.
    """

    n: int
    m: int
    offsets: np.ndarray
    neighbors: np.ndarray
    degrees: np.ndarray

    def neighbors_of(self, v: int) -> np.ndarray:
        """Sorted neighbor slice of node v (a read-only view)."""
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def edge_pairs(self) -> np.ndarray:
        """All undirected edges as an (m, 2) array with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.neighbors
        return np.column_stack((src[keep], self.neighbors[keep]))

    def identical(self, other: "Graph") -> bool:
        """Structural equality: same n, m, offsets, and neighbor arrays."""
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
        )


@dataclass(frozen=True)
class BuildReport:
    """Cleanup counts from canonicalizing a raw edge list."""

    self_loops_removed: int
    duplicates_removed: int


@dataclass(frozen=True)
class DegreeStats:
    """Exact integer degree statistics of a graph.

    ``m1 = sum(d_i)`` and ``m2 = sum(d_i**2)`` are Python ints computed with
    chunked 64-bit partial sums, so they stay exact up to n = 1e7 with
    d_max up to n. ``d_min`` ranges over nodes with positive degree only.
    """

    n: int
    degrees: np.ndarray
    m1: int
    m2: int
    d_max: int
    d_min: int
    isolated_count: int

    @property
    def mean_degree(self) -> float:
        return self.m1 / self.n if self.n else 0.0


def _exact_sum(values: np.ndarray) -> int:
    """Exact integer sum, safe against int64 overflow of the grand total."""
    total = 0
    for start in range(0, len(values), _SUM_CHUNK):
        total += int(values[start : start + _SUM_CHUNK].sum())
    return total


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _from_canonical_pairs(pairs: np.ndarray, n: int) -> Graph:
    """Assemble CSR arrays from deduplicated (u < v) pairs."""
    if pairs.size:
        src = np.concatenate((pairs[:, 0], pairs[:, 1]))
        dst = np.concatenate((pairs[:, 1], pairs[:, 0]))
        order = np.lexsort((dst, src))
        neighbors = dst[order]
        degrees = np.bincount(src, minlength=n).astype(np.int64)
    else:
        neighbors = np.empty(0, dtype=np.int64)
        degrees = np.zeros(n, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=offsets[1:])
    return Graph(
        n=n,
        m=int(len(pairs)),
        offsets=_freeze(offsets),
        neighbors=_freeze(np.ascontiguousarray(neighbors, dtype=np.int64)),
        degrees=_freeze(degrees),
    )


def build_graph_with_report(
    edges: Iterable[tuple[int, int]] | np.ndarray, n: int
) -> tuple[Graph, BuildReport]:
    """Canonicalize a raw edge list into a Graph, reporting removal counts.

    Input pairs may repeat, appear in either orientation, or be self-loops;
    the result is the simple undirected graph on those edges. Raises
    ValueError for ids outside [0, n).
    """
    if n < 0:
        raise ValueError(f"node count must be nonnegative, got {n}")
    if isinstance(edges, np.ndarray):
        arr = edges.astype(np.int64, copy=False)
    else:
        arr = np.asarray(list(edges), dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edge list must be a sequence of (u, v) pairs")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        bad = arr[(arr < 0) | (arr >= n)]
        raise ValueError(f"edge endpoint {int(bad.flat[0])} out of range [0, {n})")

    loops = arr[:, 0] == arr[:, 1]
    self_loops = int(loops.sum())
    arr = arr[~loops]
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    codes = lo * np.int64(n) + hi
    unique_codes = np.unique(codes)
    duplicates = int(len(codes) - len(unique_codes))
    pairs = np.column_stack((unique_codes // n, unique_codes % n))
    return _from_canonical_pairs(pairs, n), BuildReport(self_loops, duplicates)


def build_graph(edges: Iterable[tuple[int, int]] | np.ndarray, n: int) -> Graph:
    """Canonical Graph from a raw edge list (see build_graph_with_report)."""
    graph, _ = build_graph_with_report(edges, n)
    return graph


def degree_stats(g: Graph) -> DegreeStats:
    """Exact degree moments m1, m2 plus extremes and isolated-node count."""
    deg = g.degrees
    m1 = _exact_sum(deg)
    m2 = _exact_sum(deg * deg)
    positive = deg[deg > 0]
    return DegreeStats(
        n=g.n,
        degrees=deg,
        m1=m1,
        m2=m2,
        d_max=int(deg.max()) if g.n else 0,
        d_min=int(positive.min()) if positive.size else 0,
        isolated_count=int((deg == 0).sum()),
    )


def _component_labels(g: Graph) -> tuple[np.ndarray, int]:
    """Label nodes by connected component via BFS, in ascending root order."""
    labels = np.full(g.n, -1, dtype=np.int64)
    count = 0
    offsets, neighbors = g.offsets, g.neighbors
    for root in range(g.n):
        if labels[root] >= 0:
            continue
        labels[root] = count
        frontier = np.array([root], dtype=np.int64)
        while frontier.size:
            starts = offsets[frontier]
            lens = offsets[frontier + 1] - starts
            total = int(lens.sum())
            if total == 0:
                break
            pos = np.arange(total) + np.repeat(starts - (np.cumsum(lens) - lens), lens)
            nbrs = neighbors[pos]
            fresh = np.unique(nbrs[labels[nbrs] < 0])
            labels[fresh] = count
            frontier = fresh
        count += 1
    return labels, count


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest connected component.

    Returns the subgraph (node ids relabeled densely, order-preserving) and
    the old-to-new id map (-1 for excluded nodes). Ties between equal-size
    components go to the one containing the smallest node id.
    """
    if g.n == 0:
        raise ValueError("cannot extract a component from an empty graph")
    labels, count = _component_labels(g)
    sizes = np.bincount(labels, minlength=count)
    # argmax keeps the first (smallest-root) component on ties
    best = int(np.argmax(sizes))
    keep = labels == best
    mapping = np.full(g.n, -1, dtype=np.int64)
    mapping[keep] = np.arange(int(keep.sum()), dtype=np.int64)
    pairs = g.edge_pairs()
    if pairs.size:
        pairs = pairs[keep[pairs[:, 0]]]
        pairs = np.column_stack((mapping[pairs[:, 0]], mapping[pairs[:, 1]]))
    sub = _from_canonical_pairs(pairs.reshape(-1, 2), int(keep.sum()))
    return sub, mapping


def read_edge_list(path: str) -> Graph:
    """Parse a whitespace-separated "u v" edge-list file into a Graph.

    Lines starting with '#' are ignored, except that a writer-emitted
    "# n=<count>" comment raises the node count above max(id)+1 so graphs
    with trailing isolated nodes round-trip. Blank lines are skipped.
    """
    edges: list[tuple[int, int]] = []
    declared_n = 0
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                body = stripped[1:].strip()
                if body.startswith("n="):
                    try:
                        declared_n = max(declared_n, int(body[2:]))
                    except ValueError:
                        pass  # free-form comment, not our sidecar
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise EdgeListParseError(
                    path, line_no, f"expected 'u v', got {len(parts)} fields"
                )
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(path, line_no, f"non-integer ids {parts!r}") from None
            if u < 0 or v < 0:
                raise EdgeListParseError(path, line_no, f"negative node id in {parts!r}")
            if max(u, v) >= 2**62:
                raise EdgeListParseError(path, line_no, "node id overflows 62-bit range")
            edges.append((u, v))
            max_id = max(max_id, u, v)
    n = max(declared_n, max_id + 1)
    return build_graph(edges, n)


def write_edge_list(g: Graph, path: str) -> None:
    """Write one "u v" line per edge (u < v, sorted); read_edge_list inverts it."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={g.n}\n")
        offsets, neighbors = g.offsets, g.neighbors
        for u in range(g.n):
            for v in neighbors[offsets[u] : offsets[u + 1]]:
                if u < v:
                    fh.write(f"{u} {v}\n")
