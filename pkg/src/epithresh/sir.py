"""Discrete-time synchronous SIR contagion over a graph.

One step evaluates everything from the same snapshot: a susceptible node
with k currently infected neighbors becomes infected with probability
1 - (1 - beta)^k, and each currently infected node independently recovers
with probability mu. A node infected this step cannot recover this step.
The threshold sweep exercises the critical ratio beta/mu around the inverse
spectral radius of the graph.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .spectral import spectral_radius


def _worker_count() -> int:
    raw = os.environ.get("EPITHRESH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

__all__ = [
    "SirParams",
    "SirTrajectory",
    "SweepRow",
    "sir_simulate",
    "threshold_sweep",
]

_SUSCEPTIBLE, _INFECTED, _RECOVERED = 0, 1, 2


@dataclass(frozen=True)
class SirParams:
    """Per-step infection probability beta, recovery probability mu, seeds."""

    beta: float
    mu: float
    initial_infected: tuple[int, ...]
    max_steps: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mu must lie in (0, 1], got {self.mu}")
        if not self.initial_infected:
            raise ValueError("need at least one initially infected node")


@dataclass(frozen=True)
class SirTrajectory:
    """Per-step compartment counts; index 0 is the initial state.

    ``final_size`` counts everyone ever infected (recovered plus still
    infected at cutoff). S + I + R equals n at every step.
    """

    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    final_size: int
    steps: int

    @property
    def final_fraction(self) -> float:
        n = int(self.s[0] + self.i[0] + self.r[0])
        return self.final_size / n


def _infected_neighbor_counts(g: Graph, infected: np.ndarray) -> np.ndarray:
    starts = g.offsets[infected]
    lens = g.offsets[infected + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.zeros(g.n, dtype=np.int64)
    pos = np.arange(total) + np.repeat(starts - (np.cumsum(lens) - lens), lens)
    return np.bincount(g.neighbors[pos], minlength=g.n)


def sir_simulate(g: Graph, p: SirParams) -> SirTrajectory:
    """Run the synchronous SIR dynamics until extinction or the step cap.

    Deterministic for a fixed seed: each step draws infection uniforms for
    the exposed susceptibles (ascending node order) and then recovery
    uniforms for the infected.
    """
    for v in p.initial_infected:
        if not 0 <= v < g.n:
            raise ValueError(f"initial infected node {v} out of range [0, {g.n})")
    max_steps = p.max_steps if p.max_steps is not None else 10 * g.n
    rng = np.random.default_rng(p.seed)

    state = np.zeros(g.n, dtype=np.int8)
    state[list(p.initial_infected)] = _INFECTED
    s_counts = [int((state == _SUSCEPTIBLE).sum())]
    i_counts = [int((state == _INFECTED).sum())]
    r_counts = [int((state == _RECOVERED).sum())]

    steps = 0
    while steps < max_steps:
        infected = np.flatnonzero(state == _INFECTED)
        if infected.size == 0:
            break
        counts = _infected_neighbor_counts(g, infected)
        exposed = np.flatnonzero((state == _SUSCEPTIBLE) & (counts > 0))
        if p.beta > 0.0 and exposed.size:
            p_inf = 1.0 - (1.0 - p.beta) ** counts[exposed]
            newly_infected = exposed[rng.random(exposed.size) < p_inf]
        else:
            newly_infected = exposed[:0]
        newly_recovered = infected[rng.random(infected.size) < p.mu]

        state[newly_infected] = _INFECTED
        state[newly_recovered] = _RECOVERED
        steps += 1
        s_counts.append(int((state == _SUSCEPTIBLE).sum()))
        i_counts.append(int((state == _INFECTED).sum()))
        r_counts.append(int((state == _RECOVERED).sum()))

    final_size = int((state != _SUSCEPTIBLE).sum())
    return SirTrajectory(
        s=np.asarray(s_counts, dtype=np.int64),
        i=np.asarray(i_counts, dtype=np.int64),
        r=np.asarray(r_counts, dtype=np.int64),
        final_size=final_size,
        steps=steps,
    )


@dataclass(frozen=True)
class SweepRow:
    """Mean outbreak size at one transmissibility multiple of the threshold."""

    ratio: float
    beta: float
    mu: float
    mean_final_fraction: float
    sd_final_fraction: float
    reps: int


def threshold_sweep(
    g: Graph,
    ratios: list[float],
    reps: int,
    seed: int,
    mu: float = 0.2,
    lam: float | None = None,
) -> list[SweepRow]:
    """Mean final-size fraction at beta/mu = ratio / lambda(A), per ratio.

    Each replication infects one uniformly random initial node. ``lam``
    short-circuits the spectral radius if the caller already has it.
    """
    if not ratios:
        raise ValueError("need at least one ratio")
    if reps < 1:
        raise ValueError("need at least one replication")
    if lam is None:
        lam = spectral_radius(g).value
    master = np.random.default_rng(seed)
    # Replication seeds are drawn up front so results do not depend on how
    # many workers execute them.
    draws = [
        [
            (int(master.integers(g.n)), int(master.integers(2**63 - 1)))
            for _ in range(reps)
        ]
        for _ in ratios
    ]

    def one_rep(beta: float, start: int, rep_seed: int) -> float:
        traj = sir_simulate(
            g, SirParams(beta=beta, mu=mu, initial_infected=(start,), seed=rep_seed)
        )
        return traj.final_fraction

    workers = _worker_count()
    rows: list[SweepRow] = []
    for ratio, ratio_draws in zip(ratios, draws):
        beta = min(1.0, ratio * mu / lam)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                fractions = np.array(
                    list(
                        pool.map(lambda d: one_rep(beta, d[0], d[1]), ratio_draws)
                    )
                )
        else:
            fractions = np.array([one_rep(beta, s, rs) for s, rs in ratio_draws])
        rows.append(
            SweepRow(
                ratio=float(ratio),
                beta=float(beta),
                mu=float(mu),
                mean_final_fraction=float(fractions.mean()),
                sd_final_fraction=float(fractions.std(ddof=1)) if reps > 1 else 0.0,
                reps=reps,
            )
        )
    return rows
