"""Experiment harness: the moment-estimator benchmark, synthetic-network
error-curve experiments, and self-describing CSV output.

Every experiment embeds its full configuration and seeds as '#' comment
lines in its CSV outputs, and all summary statistics are recomputable from
the raw per-replication records. Identical (config, seed) runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .estimators import relative_error, t1_estimate
from .generators import (
    ExpectedDegrees,
    chung_lu_sample_fast,
    expected_degrees,
    power_law_expected_degrees,
    preferential_attachment,
    uniform_expected_degrees,
)
from .graph import Graph, largest_component
from .spectral import bipartite_coloring, spectral_radius
from .walker import CurvePoint, error_curve, local_oracle

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "BenchmarkSummary",
    "CurveSummary",
    "ExperimentResult",
    "DEFAULT_BUDGET_FRACTIONS",
    "THREADS_ENV_VAR",
    "theta_product_expected_degrees",
    "run_t1_benchmark",
    "run_synthetic_experiment",
    "write_records_csv",
    "write_curve_csv",
    "worker_count",
]

THREADS_ENV_VAR = "EPITHRESH_THREADS"

DEFAULT_BUDGET_FRACTIONS = (0.01, 0.02, 0.05, 0.10, 0.20, 0.50, 1.00)


def worker_count() -> int:
    """Replication worker count from the environment (default 1)."""
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment byte-for-byte."""

    experiment: str
    model: str
    n: int
    seed: int
    params: dict = field(default_factory=dict)
    walk_seeds: tuple[int, ...] = ()
    budget_fractions: tuple[float, ...] = DEFAULT_BUDGET_FRACTIONS
    thin: int = 10

    def comment_lines(self) -> list[str]:
        lines = [f"# experiment={self.experiment}", f"# model={self.model}"]
        lines.append(f"# n={self.n} seed={self.seed} thin={self.thin}")
        if self.params:
            kv = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
            lines.append(f"# params: {kv}")
        if self.walk_seeds:
            lines.append(f"# walk_seeds={','.join(map(str, self.walk_seeds))}")
        if self.budget_fractions:
            lines.append(
                f"# budget_fractions={','.join(map(str, self.budget_fractions))}"
            )
        return lines


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row of per-replication results; walk fields are blank for
    replications without a walk."""

    seed: int
    n: int
    m: int
    lambda_a: float
    t1: float
    t2: float | None
    e1: float
    eps_t1_t2: float | None
    eps_lambda_t2: float | None
    nodes_seen: int | None
    runtime_lambda: float | None
    runtime_t1: float | None
    runtime_t2: float | None


@dataclass(frozen=True)
class BenchmarkSummary:
    reps: int
    mean_e1: float
    sd_e1: float
    mean_runtime_lambda: float
    mean_runtime_t1: float
    runtime_ratio: float


@dataclass(frozen=True)
class CurveSummary:
    """Across-seed means at one distinct-nodes budget."""

    budget: int
    budget_fraction: float
    mean_nodes_seen: float
    mean_eps_t1: float
    mean_eps_lambda: float
    seeds_used: int


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: list[ExperimentRecord]
    curve_points: list[CurvePoint]
    curve: list[CurveSummary]
    lambda_a: float
    t1: float
    component_n: int
    component_t1: float
    component_lambda: float
    # Wall-clock timings stay out of the records so output files are
    # byte-reproducible under a fixed (config, seed).
    runtime_lambda: float = 0.0
    runtime_t1: float = 0.0


def theta_product_expected_degrees(n: int, seed: int) -> ExpectedDegrees:
    """Product-form edge model P(i,j) = theta_i theta_j with theta ~ U(0, 0.25).

    Expressed as an expected-degree vector delta_i = theta_i * sum(theta),
    which gives exactly delta_i delta_j / S = theta_i theta_j, so the
    Chung-Lu samplers draw from the product model unchanged.
    """
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 0.25, n)
    while np.any(theta <= 0.0):  # measure-zero, but delta must stay positive
        zero = theta <= 0.0
        theta[zero] = rng.uniform(0.0, 0.25, int(zero.sum()))
    return expected_degrees(theta * theta.sum())


def run_t1_benchmark(
    n: int, reps: int, seed: int
) -> tuple[list[ExperimentRecord], BenchmarkSummary, ExperimentConfig]:
    """Moment-ratio versus spectral-radius benchmark on the product model.

    One theta vector is drawn from the master seed; ``reps`` graphs are then
    sampled from the same model and both estimators are computed and timed
    on each.
    """
    if reps < 1:
        raise ValueError("need at least one replication")
    config = ExperimentConfig(
        experiment="bench-t1", model="theta-product", n=n, seed=seed
    )
    master = np.random.default_rng(seed)
    theta_seed = int(master.integers(2**63 - 1))
    ed = theta_product_expected_degrees(n, theta_seed)
    records: list[ExperimentRecord] = []
    for _ in range(reps):
        rep_seed = int(master.integers(2**63 - 1))
        g = chung_lu_sample_fast(ed, rep_seed)

        start = time.perf_counter()
        lam = spectral_radius(g)
        runtime_lambda = time.perf_counter() - start

        start = time.perf_counter()
        moment = t1_estimate(g)
        runtime_t1 = time.perf_counter() - start

        records.append(
            ExperimentRecord(
                seed=rep_seed,
                n=g.n,
                m=g.m,
                lambda_a=lam.value,
                t1=moment.t1,
                t2=None,
                e1=relative_error(moment.t1, lam.value),
                eps_t1_t2=None,
                eps_lambda_t2=None,
                nodes_seen=None,
                runtime_lambda=runtime_lambda,
                runtime_t1=runtime_t1,
                runtime_t2=None,
            )
        )
    errors = np.array([rec.e1 for rec in records])
    mean_lambda_rt = float(np.mean([rec.runtime_lambda for rec in records]))
    mean_t1_rt = float(np.mean([rec.runtime_t1 for rec in records]))
    summary = BenchmarkSummary(
        reps=reps,
        mean_e1=float(errors.mean()),
        sd_e1=float(errors.std(ddof=1)) if reps > 1 else 0.0,
        mean_runtime_lambda=mean_lambda_rt,
        mean_runtime_t1=mean_t1_rt,
        runtime_ratio=mean_lambda_rt / mean_t1_rt if mean_t1_rt > 0 else math.inf,
    )
    return records, summary, config


def _generate_model_graph(
    model: str, n: int, seed: int, params: dict
) -> tuple[Graph, dict]:
    if model == "chung-lu":
        dist = params.get("deg_dist", "powerlaw")
        if dist == "powerlaw":
            beta = float(params.get("beta", 2.5))
            d_min = float(params.get("d_min", 1.0))
            ed = power_law_expected_degrees(n, beta, d_min, seed)
            used = {"deg_dist": "powerlaw", "beta": beta, "d_min": d_min}
        elif dist == "uniform":
            low = float(params.get("low", 20.0))
            high = float(params.get("high", 80.0))
            ed = uniform_expected_degrees(n, low, high, seed)
            used = {"deg_dist": "uniform", "low": low, "high": high}
        else:
            raise ValueError(f"unknown degree distribution {dist!r}")
        graph_seed = seed + 1
        return chung_lu_sample_fast(ed, graph_seed), used
    if model == "pa":
        epn = int(params.get("edges_per_node", 5))
        return preferential_attachment(n, epn, seed), {"edges_per_node": epn}
    raise ValueError(f"unknown model {model!r} (expected 'chung-lu' or 'pa')")


def run_synthetic_experiment(
    model: str,
    n: int,
    seed: int,
    params: dict | None = None,
    walk_seeds: int | tuple[int, ...] = 10,
    budget_fractions: tuple[float, ...] = DEFAULT_BUDGET_FRACTIONS,
    thin: int = 10,
    t_star: int | None = None,
) -> ExperimentResult:
    """One synthetic graph, its exact references, and seeded walk error curves.

    The graph is generated once; the spectral radius and moment ratio are
    computed on the full graph (the headline record) and again on the
    largest component, which is what the walks can actually reach and what
    the error curves are measured against. Budgets are fractions of the
    component's node count; walks sample every ``thin``-th step after a
    burn-in that defaults to ceil(10 ln n_component).
    """
    params = dict(params or {})
    if isinstance(walk_seeds, int):
        master = np.random.default_rng(seed)
        seeds = tuple(int(master.integers(2**63 - 1)) for _ in range(walk_seeds))
    else:
        seeds = tuple(walk_seeds)
    graph, used_params = _generate_model_graph(model, n, seed, params)
    config = ExperimentConfig(
        experiment="error-curve",
        model=model,
        n=n,
        seed=seed,
        params=used_params,
        walk_seeds=seeds,
        budget_fractions=tuple(budget_fractions),
        thin=thin,
    )

    start = time.perf_counter()
    lam_full = spectral_radius(graph)
    runtime_lambda = time.perf_counter() - start
    start = time.perf_counter()
    t1_full = t1_estimate(graph)
    runtime_t1 = time.perf_counter() - start

    component, _ = largest_component(graph)
    if bipartite_coloring(component) is not None:
        warnings.warn(
            "walked component is bipartite: burn-in cannot reach the "
            "stationary distribution, only the thinned time-average converges",
            RuntimeWarning,
            stacklevel=2,
        )
    comp_t1 = t1_estimate(component).t1
    comp_lambda = spectral_radius(component).value
    burn_in = t_star if t_star is not None else math.ceil(10.0 * math.log(component.n))
    budgets = sorted({max(1, math.ceil(f * component.n)) for f in budget_fractions})

    def one_walk(walk_seed: int) -> list[CurvePoint]:
        return error_curve(
            make_oracle=lambda: local_oracle(component),
            t1_reference=comp_t1,
            lambda_reference=comp_lambda,
            seeds=[walk_seed],
            budgets=budgets,
            t_star=burn_in,
            thin=thin,
        )

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_seed = list(pool.map(one_walk, seeds))
    else:
        per_seed = [one_walk(s) for s in seeds]
    points = [p for chunk in per_seed for p in chunk]

    records: list[ExperimentRecord] = []
    final_budget = budgets[-1]
    for walk_seed in seeds:
        final = [p for p in points if p.seed == walk_seed and p.budget == final_budget]
        last = final[-1]
        records.append(
            ExperimentRecord(
                seed=walk_seed,
                n=graph.n,
                m=graph.m,
                lambda_a=lam_full.value,
                t1=t1_full.t1,
                t2=last.estimate,
                e1=relative_error(t1_full.t1, lam_full.value),
                eps_t1_t2=last.eps_t1,
                eps_lambda_t2=last.eps_lambda,
                nodes_seen=last.nodes_seen,
                runtime_lambda=None,
                runtime_t1=None,
                runtime_t2=None,
            )
        )

    frac_of = {b: f for f, b in zip(sorted(budget_fractions), budgets)}
    curve: list[CurveSummary] = []
    for budget in budgets:
        at_budget = [p for p in points if p.budget == budget]
        valid = [p for p in at_budget if not math.isnan(p.estimate)]
        curve.append(
            CurveSummary(
                budget=budget,
                budget_fraction=frac_of.get(budget, budget / component.n),
                mean_nodes_seen=float(np.mean([p.nodes_seen for p in at_budget])),
                mean_eps_t1=float(np.mean([p.eps_t1 for p in valid]))
                if valid
                else float("nan"),
                mean_eps_lambda=float(np.mean([p.eps_lambda for p in valid]))
                if valid
                else float("nan"),
                seeds_used=len(valid),
            )
        )

    return ExperimentResult(
        config=config,
        records=records,
        curve_points=points,
        curve=curve,
        lambda_a=lam_full.value,
        t1=t1_full.t1,
        component_n=component.n,
        component_t1=comp_t1,
        component_lambda=comp_lambda,
        runtime_lambda=runtime_lambda,
        runtime_t1=runtime_t1,
    )


def _write_csv(path: str, comments: list[str], header: list[str], rows: list[list]) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(path: str, config: ExperimentConfig, records: list[ExperimentRecord]) -> None:
    header = list(ExperimentRecord.__dataclass_fields__)
    rows = [[_cell(v) for v in asdict(rec).values()] for rec in records]
    _write_csv(path, config.comment_lines(), header, rows)


def write_curve_csv(
    path: str,
    config: ExperimentConfig,
    curve: list[CurveSummary],
    points: list[CurvePoint] | None = None,
) -> None:
    """Aggregated curve CSV; optionally appends the per-seed raw points file
    alongside it (same name with a .raw.csv suffix)."""
    header = list(CurveSummary.__dataclass_fields__)
    rows = [[_cell(v) for v in asdict(row).values()] for row in curve]
    _write_csv(path, config.comment_lines(), header, rows)
    if points is not None:
        raw_header = list(CurvePoint.__dataclass_fields__)
        raw_rows = [[_cell(v) for v in asdict(p).values()] for p in points]
        raw_path = path[:-4] + ".raw.csv" if path.endswith(".csv") else path + ".raw"
        _write_csv(raw_path, config.comment_lines(), raw_header, raw_rows)
