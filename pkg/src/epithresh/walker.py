"""Random-walk estimation of the degree-moment ratio over a graph oracle.

The estimator never touches a whole graph: it sees the network only through
degree / neighbor / node-count queries, so its cost is measured in oracle
queries and distinct nodes seen rather than in nodes or edges. After a
burn-in of ``t_star`` uniform-neighbor steps, it averages r degree samples
spaced ``thin`` steps apart; the ergodic limit of that average is m2/m1.

Step accounting contract: every walk step issues exactly one degree query
(for the node being left, reused as the sample value when sampling there)
and one neighbor query, so a T-step walk costs T degree + T neighbor
queries and touches at most T + 1 distinct nodes.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .graph import Graph

__all__ = [
    "GraphOracle",
    "LocalOracle",
    "WalkConfig",
    "WalkReport",
    "CurvePoint",
    "ZeroDegreeNodeError",
    "local_oracle",
    "random_walk_estimate",
    "error_curve",
]


class ZeroDegreeNodeError(RuntimeError):
    """The walk reached a node with no neighbors and cannot continue."""

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"random walk stuck: node {node} has degree 0")


class GraphOracle(ABC):
    """Query interface to a graph: degrees, indexed neighbors, node count.

    Implementations keep monotone counters: ``total_queries`` counts every
    degree/neighbor call, and ``distinct_nodes_seen`` counts node ids that
    appeared in any query or answer. ``neighbor(v, k)`` must be stable
    across calls for the same (v, k).
    """

    @abstractmethod
    def node_count(self) -> int: ...

    @abstractmethod
    def degree(self, v: int) -> int: ...

    @abstractmethod
    def neighbor(self, v: int, k: int) -> int: ...

    @property
    @abstractmethod
    def total_queries(self) -> int: ...

    @property
    @abstractmethod
    def distinct_nodes_seen(self) -> int: ...

    @abstractmethod
    def reset_counters(self) -> None: ...


class LocalOracle(GraphOracle):
    """In-memory adapter over a Graph; neighbor(v, k) is the k-th sorted neighbor."""

    def __init__(self, g: Graph):
        if g.m == 0:
            raise ValueError("oracle requires a graph with at least one edge")
        self._n = g.n
        # Plain lists keep per-query overhead minimal on long walks.
        self._deg = g.degrees.tolist()
        self._off = g.offsets.tolist()
        self._nbr = g.neighbors.tolist()
        self._queries = 0
        self._seen = bytearray(g.n)
        self._seen_count = 0

    def node_count(self) -> int:
        return self._n

    def _mark(self, v: int) -> None:
        if not self._seen[v]:
            self._seen[v] = 1
            self._seen_count += 1

    def degree(self, v: int) -> int:
        if not 0 <= v < self._n:
            raise IndexError(f"node {v} out of range [0, {self._n})")
        self._queries += 1
        self._mark(v)
        return self._deg[v]

    def neighbor(self, v: int, k: int) -> int:
        if not 0 <= v < self._n:
            raise IndexError(f"node {v} out of range [0, {self._n})")
        if not 0 <= k < self._deg[v]:
            raise IndexError(f"neighbor index {k} out of range [0, {self._deg[v]}) at node {v}")
        self._queries += 1
        u = self._nbr[self._off[v] + k]
        self._mark(v)
        self._mark(u)
        return u

    @property
    def total_queries(self) -> int:
        return self._queries

    @property
    def distinct_nodes_seen(self) -> int:
        return self._seen_count

    def reset_counters(self) -> None:
        self._queries = 0
        self._seen = bytearray(self._n)
        self._seen_count = 0


def local_oracle(g: Graph) -> LocalOracle:
    """Wrap a Graph as an in-memory oracle with fresh counters."""
    return LocalOracle(g)


@dataclass(frozen=True)
class WalkConfig:
    """Walk parameters: burn-in, sample count, thinning, seed, start node.

    ``thin=1`` reproduces the literal consecutive-step estimator; the
    default experiment protocol samples every 10th step instead of using
    independent restarts.
    """

    t_star: int
    r: int
    thin: int = 1
    seed: int = 0
    start: int = 0

    def __post_init__(self):
        if self.t_star < 0:
            raise ValueError("burn-in must be nonnegative")
        if self.r < 1:
            raise ValueError("need at least one sample")
        if self.thin < 1:
            raise ValueError("thinning must be at least 1")

    @property
    def total_steps(self) -> int:
        return self.t_star + (self.r - 1) * self.thin + 1


@dataclass(frozen=True)
class WalkReport:
    """Outcome of one walk: the estimate plus full query accounting."""

    estimate: float
    r: int
    total_steps: int
    total_queries: int
    distinct_nodes_seen: int
    start: int
    seed: int
    nodes: tuple[int, ...] | None = None


def random_walk_estimate(
    oracle: GraphOracle, cfg: WalkConfig, trace: bool = False
) -> WalkReport:
    """Estimate m2/m1 by averaging degree samples along a uniform random walk.

    Burn-in runs ``cfg.t_star`` steps from ``cfg.start``; then each of the
    r sampling rounds records the current node's degree and walks on
    (``thin`` steps between samples, one trailing step after the last), so
    the walk takes t_star + (r-1)*thin + 1 steps total. Fully deterministic
    given (oracle contents, cfg). Raises ZeroDegreeNodeError if the walk
    reaches an isolated node.

    With ``trace=True`` the report also carries the visited node sequence
    (start plus one node per step).
    """
    rng = random.Random(cfg.seed)
    randrange = rng.randrange
    degree = oracle.degree
    neighbor = oracle.neighbor

    x = cfg.start
    queries = 0
    seen: set[int] = {x}
    path: list[int] | None = [x] if trace else None

    def step() -> int:
        """Advance one step; returns the degree of the node being left."""
        nonlocal x, queries
        d = degree(x)
        if d == 0:
            raise ZeroDegreeNodeError(x)
        x = neighbor(x, randrange(d))
        queries += 2
        seen.add(x)
        if path is not None:
            path.append(x)
        return d

    for _ in range(cfg.t_star):
        step()
    acc = 0
    for i in range(cfg.r):
        acc += step()  # sample = degree of the node the step leaves
        if i < cfg.r - 1:
            for _ in range(cfg.thin - 1):
                step()

    return WalkReport(
        estimate=acc / cfg.r,
        r=cfg.r,
        total_steps=cfg.total_steps,
        total_queries=queries,
        distinct_nodes_seen=len(seen),
        start=cfg.start,
        seed=cfg.seed,
        nodes=tuple(path) if path is not None else None,
    )


@dataclass(frozen=True)
class CurvePoint:
    """Running estimate of one walk when its distinct-nodes budget was crossed."""

    seed: int
    budget: int
    nodes_seen: int
    steps: int
    samples: int
    estimate: float
    eps_t1: float
    eps_lambda: float


def error_curve(
    make_oracle,
    t1_reference: float,
    lambda_reference: float,
    seeds: list[int],
    budgets: list[int],
    t_star: int,
    thin: int = 10,
    start: int = 0,
    max_steps: int | None = None,
) -> list[CurvePoint]:
    """Walk-estimate error versus distinct-nodes-seen budget, one walk per seed.

    ``make_oracle`` is called once per seed so each walk carries fresh
    counters. Each walk runs with the given burn-in and thinning, recording
    its running degree average whenever the number of distinct nodes seen
    first reaches a budget; relative errors are taken against the supplied
    references. If the step cap is hit before the last budget, the remaining
    budgets are reported with the walk's final state.
    """
    if not seeds:
        raise ValueError("need at least one walk seed")
    if not budgets or any(b <= 0 for b in budgets):
        raise ValueError("budgets must be positive node counts")
    budgets = sorted(budgets)
    points: list[CurvePoint] = []
    for seed in seeds:
        oracle = make_oracle()
        cap = max_steps if max_steps is not None else 1000 * oracle.node_count()
        rng = random.Random(seed)
        randrange = rng.randrange
        degree = oracle.degree
        neighbor = oracle.neighbor

        x = start
        seen: set[int] = {x}
        steps = 0
        acc = 0
        samples = 0
        pending = iter(budgets)
        next_budget = next(pending)

        def snapshot(budget: int) -> CurvePoint:
            est = acc / samples if samples else float("nan")
            return CurvePoint(
                seed=seed,
                budget=budget,
                nodes_seen=len(seen),
                steps=steps,
                samples=samples,
                estimate=est,
                eps_t1=abs(est - t1_reference) / t1_reference,
                eps_lambda=abs(est - lambda_reference) / lambda_reference,
            )

        done = False
        while not done:
            d = degree(x)
            if d == 0:
                raise ZeroDegreeNodeError(x)
            if steps >= t_star and (steps - t_star) % thin == 0:
                acc += d
                samples += 1
            x = neighbor(x, randrange(d))
            steps += 1
            seen.add(x)
            while len(seen) >= next_budget:
                points.append(snapshot(next_budget))
                nxt = next(pending, None)
                if nxt is None:
                    done = True
                    break
                next_budget = nxt
            if steps >= cap and not done:
                # Budget unreachable in the step cap: emit the final state.
                points.append(snapshot(next_budget))
                for leftover in pending:
                    points.append(snapshot(leftover))
                done = True
    return points
