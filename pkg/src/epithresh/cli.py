"""Unified command-line interface.

Subcommands: generate, exact, estimate, bounds, walk, serve, sir, sweep,
bench-t1, experiment. All emit JSON or CSV on stdout (or to --out), exit 0
on success, 1 on usage errors, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .estimators import (
    chung_radcliffe_bound,
    chunglu_condition,
    hoeffding_m1_bound,
    relative_error,
    sample_size,
    t1_estimate,
)
from .generators import (
    chung_lu_sample_fast,
    chung_lu_sample_naive,
    count_clamped_pairs,
    expected_degrees,
    power_law_expected_degrees,
    preferential_attachment,
    uniform_expected_degrees,
)
from .graph import degree_stats, largest_component, read_edge_list, write_edge_list
from .harness import (
    run_synthetic_experiment,
    run_t1_benchmark,
    write_curve_csv,
    write_records_csv,
)
from .service import remote_oracle, serve_oracle
from .sir import SirParams, sir_simulate, threshold_sweep
from .spectral import bipartite_coloring, spectral_gap, spectral_radius
from .walker import WalkConfig, local_oracle, random_walk_estimate

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_addr(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"address must look like host:port, got {text!r}")
    return host, int(port)


def _cmd_generate(args) -> int:
    if args.model == "chung-lu":
        if args.deg_dist == "powerlaw":
            ed = power_law_expected_degrees(args.n, args.beta, args.dmin, args.seed)
            params = {"deg_dist": "powerlaw", "beta": args.beta, "d_min": args.dmin}
        else:
            ed = uniform_expected_degrees(args.n, args.low, args.high, args.seed)
            params = {"deg_dist": "uniform", "low": args.low, "high": args.high}
        sampler = chung_lu_sample_naive if args.sampler == "naive" else chung_lu_sample_fast
        g = sampler(ed, args.seed + 1)
        sidecar = {
            "model": "chung-lu",
            **params,
            "n": g.n,
            "m": g.m,
            "S": ed.S,
            "delta_max": ed.delta_max,
            "feasible": ed.feasible,
            "clamped_entries": ed.clamped,
            "clamped_pairs": count_clamped_pairs(ed),
            "sampler": args.sampler,
            "seed": args.seed,
        }
    else:
        g = preferential_attachment(args.n, args.edges_per_node, args.seed)
        sidecar = {
            "model": "pa",
            "edges_per_node": args.edges_per_node,
            "n": g.n,
            "m": g.m,
            "seed": args.seed,
        }
    write_edge_list(g, args.out)
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} (n={g.n}, m={g.m}) and {args.out}.json")
    return 0


def _cmd_exact(args) -> int:
    g = read_edge_list(args.infile)
    result = spectral_radius(g, tol=args.tol, max_iters=args.max_iters, seed=args.seed)
    payload = {
        "lambda": result.value,
        "iterations": result.iterations,
        "residual": result.residual,
        "converged": result.converged,
    }
    if args.gap:
        component, _ = largest_component(g)
        gap = spectral_gap(component, tol=args.tol, max_iters=args.max_iters, seed=args.seed)
        payload.update(
            {
                "lambda2": gap.lambda2,
                "gap": gap.gap,
                "gap_iterations": gap.iterations,
                "gap_converged": gap.converged,
                "component_n": component.n,
            }
        )
    _emit(payload, args.out)
    return 0


def _cmd_estimate(args) -> int:
    if args.quantity != "t1":
        raise ValueError(f"unknown estimate quantity {args.quantity!r}")
    g = read_edge_list(args.infile)
    moment = t1_estimate(g)
    _emit({"t1": moment.t1, "m1": moment.m1, "m2": moment.m2}, args.out)
    return 0


def _cmd_bounds(args) -> int:
    g = read_edge_list(args.infile)
    stats = degree_stats(g)
    positive = stats.degrees[stats.degrees > 0].astype(np.float64)
    ed = expected_degrees(positive)
    hoeffding = hoeffding_m1_bound(ed, args.eps)
    radcliffe = chung_radcliffe_bound(ed, args.delta)
    condition = chunglu_condition(ed)
    component, _ = largest_component(g)
    gap = spectral_gap(component)
    plan = sample_size(degree_stats(component), gap, args.eps, args.delta)
    _emit(
        {
            "note": "expected degrees taken as the observed positive degrees",
            "hoeffding_m1": asdict(hoeffding),
            "chung_radcliffe": asdict(radcliffe),
            "chunglu_condition": condition._asdict(),
            "spectral_gap": {"lambda2": gap.lambda2, "gap": gap.gap},
            "sample_size_plan": asdict(plan),
            "component_n": component.n,
        },
        args.out,
    )
    return 0


def _cmd_walk(args) -> int:
    if (args.infile is None) == (args.remote is None):
        raise ValueError("provide exactly one of --in or --remote")
    start = args.start
    if args.remote is not None:
        oracle = remote_oracle(_parse_addr(args.remote))
        plan_note = None
        if args.r is None:
            raise ValueError("--r is required with --remote (no graph to plan from)")
        r, t_star = args.r, args.tstar if args.tstar is not None else 0
    else:
        g = read_edge_list(args.infile)
        component, mapping = largest_component(g)
        if bipartite_coloring(component) is not None:
            print(
                "warning: graph is bipartite; burn-in cannot reach the "
                "stationary distribution (the thinned average still converges)",
                file=sys.stderr,
            )
        if not 0 <= start < g.n or mapping[start] < 0:
            raise ValueError(
                f"start node {start} is not in the walked component "
                f"({component.n} of {g.n} nodes)"
            )
        start = int(mapping[start])
        oracle = local_oracle(component)
        plan_note = None
        if args.r is None:
            gap = spectral_gap(component)
            plan = sample_size(degree_stats(component), gap, args.eps, args.delta)
            r, t_star = plan.r, plan.t_star if args.tstar is None else args.tstar
            plan_note = asdict(plan)
        else:
            r = args.r
            t_star = args.tstar if args.tstar is not None else math.ceil(
                10.0 * math.log(max(2, oracle.node_count()))
            )
    cfg = WalkConfig(t_star=t_star, r=r, thin=args.thin, seed=args.seed, start=start)
    report = random_walk_estimate(oracle, cfg)
    payload = {
        "t2": report.estimate,
        "r": report.r,
        "t_star": cfg.t_star,
        "thin": cfg.thin,
        "seed": cfg.seed,
        "start": args.start,
        "component_start": cfg.start,
        "total_steps": report.total_steps,
        "total_queries": report.total_queries,
        "distinct_nodes_seen": report.distinct_nodes_seen,
    }
    if plan_note:
        payload["sample_size_plan"] = plan_note
    _emit(payload, args.out)
    return 0


def _cmd_serve(args) -> int:
    g = read_edge_list(args.infile)
    host, port = _parse_addr(args.addr)
    server = serve_oracle(g, (host, port))
    bound_host, bound_port = server.address
    print(f"serving oracle for n={g.n}, m={g.m} on {bound_host}:{bound_port}", flush=True)
    try:
        import threading

        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
    return 0


def _cmd_sir(args) -> int:
    g = read_edge_list(args.infile)
    init = tuple(int(v) for v in args.init.split(","))
    params = SirParams(
        beta=args.beta,
        mu=args.mu,
        initial_infected=init,
        max_steps=args.max_steps,
        seed=args.seed,
    )
    traj = sir_simulate(g, params)
    lines = [
        f"# sir beta={args.beta} mu={args.mu} seed={args.seed} "
        f"init={args.init} update=synchronous-snapshot contact=1-(1-beta)^k",
        "step,s,i,r",
    ]
    for t in range(len(traj.s)):
        lines.append(f"{t},{traj.s[t]},{traj.i[t]},{traj.r[t]}")
    lines.append(f"# final_size={traj.final_size} steps={traj.steps}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    g = read_edge_list(args.infile)
    ratios = [float(x) for x in args.ratios.split(",")]
    rows = threshold_sweep(g, ratios, reps=args.reps, seed=args.seed, mu=args.mu)
    lines = [
        f"# sweep mu={args.mu} reps={args.reps} seed={args.seed} "
        f"update=synchronous-snapshot contact=1-(1-beta)^k",
        "ratio,beta,mu,mean_final_fraction,sd_final_fraction,reps",
    ]
    for row in rows:
        lines.append(
            f"{row.ratio},{row.beta!r},{row.mu},{row.mean_final_fraction!r},"
            f"{row.sd_final_fraction!r},{row.reps}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench_t1(args) -> int:
    records, summary, config = run_t1_benchmark(args.n, args.reps, args.seed)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_records_csv(os.path.join(args.out, "records.csv"), config, records)
    _emit(asdict(summary), None)
    return 0


def _cmd_experiment(args) -> int:
    params: dict = {}
    if args.model == "chung-lu":
        params["deg_dist"] = args.deg_dist
        if args.deg_dist == "powerlaw":
            params.update({"beta": args.beta, "d_min": args.dmin})
        else:
            params.update({"low": args.low, "high": args.high})
    else:
        params["edges_per_node"] = args.edges_per_node
    result = run_synthetic_experiment(
        args.model,
        args.n,
        seed=args.seed,
        params=params,
        walk_seeds=args.walk_seeds,
        thin=args.thin,
    )
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_records_csv(os.path.join(args.out, "records.csv"), result.config, result.records)
        write_curve_csv(
            os.path.join(args.out, "curve.csv"),
            result.config,
            result.curve,
            points=result.curve_points,
        )
    _emit(
        {
            "lambda": result.lambda_a,
            "t1": result.t1,
            "e1": relative_error(result.t1, result.lambda_a),
            "component_n": result.component_n,
            "component_t1": result.component_t1,
            "component_lambda": result.component_lambda,
            "curve": [asdict(row) for row in result.curve],
        },
        None,
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="epithresh",
        description="Epidemic-threshold estimation: exact spectral radius, "
        "degree-moment and random-walk estimators, generators, SIR simulation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic graph edge list")
    p.add_argument("--model", choices=["chung-lu", "pa"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, default=2.5, help="power-law tail exponent")
    p.add_argument("--dmin", type=float, default=1.0, help="minimum expected degree")
    p.add_argument("--deg-dist", choices=["powerlaw", "uniform"], default="powerlaw")
    p.add_argument("--low", type=float, default=20.0, help="uniform degree low end")
    p.add_argument("--high", type=float, default=80.0, help="uniform degree high end")
    p.add_argument("--edges-per-node", type=int, default=5)
    p.add_argument("--sampler", choices=["fast", "naive"], default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("exact", help="exact spectral radius (and optional gap)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gap", action="store_true", help="also compute the walk spectral gap")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("estimate", help="closed-form estimators")
    p.add_argument("quantity", choices=["t1"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("bounds", help="concentration bounds and walk sampling plan")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("walk", help="random-walk estimate over a local or remote oracle")
    p.add_argument("--in", dest="infile")
    p.add_argument("--remote", help="host:port of a served oracle")
    p.add_argument("--r", type=int)
    p.add_argument("--tstar", type=int)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.1, help="accuracy for auto-planned r")
    p.add_argument("--delta", type=float, default=0.1, help="failure prob for auto-planned r")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("serve", help="serve a graph oracle over TCP")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--addr", default="127.0.0.1:0")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("sir", help="simulate one SIR trajectory")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--init", default="0", help="comma-separated initially infected nodes")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sir)

    p = sub.add_parser("sweep", help="threshold sweep: outbreak size vs beta/mu ratio")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ratios", default="0.25,0.5,0.75,1.0,1.5,2.0,3.0,4.0")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--mu", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bench-t1", help="moment estimator vs spectral radius benchmark")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for the raw records CSV")
    p.set_defaults(func=_cmd_bench_t1)

    p = sub.add_parser("experiment", help="full synthetic experiment with error curves")
    p.add_argument("--model", choices=["chung-lu", "pa"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deg-dist", choices=["powerlaw", "uniform"], default="powerlaw")
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--dmin", type=float, default=1.0)
    p.add_argument("--low", type=float, default=20.0)
    p.add_argument("--high", type=float, default=80.0)
    p.add_argument("--edges-per-node", type=int, default=5)
    p.add_argument("--walk-seeds", type=int, default=10)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--out", help="directory for records.csv and curve.csv")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BrokenPipeError, KeyboardInterrupt):
        return RUNTIME_ERROR
    except Exception as exc:  # surface runtime failures as exit code 2
        print(f"epithresh: error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
