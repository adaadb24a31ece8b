"""Command-line harness: graph generation, filter dumps, single recovery
runs, the recovery-table and bipartite experiments, and the bipartite
sampling-identity verification.

Exit codes: 0 on success, 2 on configuration errors, 3 on numerical
failures.
"""

import argparse
import json
import sys
from dataclasses import fields

import numpy as np

from . import __version__
from .bipartite import build_system, reduction_identity_residual, verify_corollary1
from .errors import (
    ConnectivityFailure,
    DsConditionViolated,
    EigensolveFailure,
    InvalidParameter,
    IoFailure,
    IsolatedVertex,
    NotBipartite,
    PairingFailure,
    SingularCorrelation,
    SingularInteriorBlock,
    SpecSampError,
    UnequalParts,
)
from .experiments import (
    BipartiteExperimentConfig,
    ExperimentConfig,
    basis_for_config,
    build_experiment_graph,
    emit_report,
    run_bipartite_experiment,
    run_recovery_experiment,
    run_recovery_table,
)
from .filters import (
    bandlimit,
    cosine_taper,
    exponential_decay,
    identity_filter,
    inverted_ramp,
    linear_decay,
    save_filter,
    smoothness_ramp,
)
from .graphs import complete_bipartite, gen_circular, gen_random_bipartite, gen_random_sensor, save_graph
from .sampling import SamplingConfig

_CONFIG_ERRORS = (InvalidParameter, IoFailure, KeyError, ValueError, json.JSONDecodeError)
_NUMERICAL_ERRORS = (DsConditionViolated, SingularCorrelation, EigensolveFailure,
                     PairingFailure, ConnectivityFailure, SingularInteriorBlock,
                     IsolatedVertex, NotBipartite, UnequalParts)


def _load_config_overrides(path):
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _experiment_config(args, overrides) -> ExperimentConfig:
    allowed = {f.name for f in fields(ExperimentConfig)}
    bad = set(overrides) - allowed
    if bad:
        raise InvalidParameter(f"unknown config keys: {sorted(bad)}")
    base = dict(
        graph_kind=args.kind, n=args.n, graph_seed=args.seed, m=args.m,
        trials=args.trials, noise_variance=args.noise, rng_seed=args.rng_seed,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def _cmd_gen_graph(args) -> int:
    if args.kind == "circular":
        g = gen_circular(args.n)
    elif args.kind == "sensor":
        g = gen_random_sensor(args.n, args.seed)
    elif args.kind == "bipartite":
        g = gen_random_bipartite(args.n // 2, args.seed, p=args.p)
    elif args.kind == "complete-bipartite":
        g = complete_bipartite(args.n // 2)
    else:
        raise InvalidParameter(f"unknown graph kind {args.kind!r}")
    save_graph(g, args.out)
    print(f"wrote {args.kind} graph with n={g.n} to {args.out}")
    return 0


def _cmd_filters_dump(args) -> int:
    cfg = ExperimentConfig(graph_kind=args.kind, n=args.n, graph_seed=args.seed,
                           m=args.m, eps=args.eps)
    graph = build_experiment_graph(cfg)
    basis = basis_for_config(cfg, graph)
    scfg = SamplingConfig(args.n, args.m)
    named = {
        "bl": bandlimit(basis, scfg.k),
        "ir": inverted_ramp(basis),
        "gen1": linear_decay(basis, args.eps),
        "gen2": exponential_decay(basis),
        "cos": cosine_taper(basis, args.eps),
        "smooth": smoothness_ramp(basis),
        "identity": identity_filter(args.n),
    }
    import os

    os.makedirs(args.out, exist_ok=True)
    for name, filt in named.items():
        save_filter(filt, basis, os.path.join(args.out, f"{name}.txt"))
    print(f"wrote {len(named)} filter tables to {args.out}")
    return 0


def _cmd_recover(args) -> int:
    overrides = _load_config_overrides(args.config)
    overrides.setdefault("generator", args.generator)
    overrides.setdefault("sampling_filter", args.sampling)
    overrides.setdefault("prior", args.prior)
    overrides.setdefault("mode", args.mode)
    overrides.setdefault("strategy", args.strategy)
    cfg = _experiment_config(args, overrides)
    rows = run_recovery_experiment(cfg)
    if args.out:
        emit_report(rows, args.format, args.out)
    print(f"mean_mse_db={rows[0]['mean_mse_db']!r} over {cfg.trials} trial(s)")
    return 0


def _cmd_exp_table2(args) -> int:
    overrides = _load_config_overrides(args.config)
    base = _experiment_config(args, overrides)
    rows = run_recovery_table(base, noises=(0.0, args.noise) if args.noise > 0 else (0.0,))
    emit_report(rows, args.format, args.out)
    means = sorted({(r["prior"], r["mode"], r["strategy"], r["sampling_filter"],
                     r["generator"], r["noise"], r["mean_mse_db"]) for r in rows})
    for rec in means:
        print(" ".join(str(v) for v in rec))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_exp_bipartite(args) -> int:
    overrides = _load_config_overrides(args.config)
    cfg = BipartiteExperimentConfig(
        n_half=args.n // 2, graph_seed=args.seed, graph_kind=args.graph, p=args.p,
        orders=tuple(int(p) for p in args.orders.split(",")),
        trials=args.trials, rng_seed=args.rng_seed,
        coeff_mean=args.coeff_mean, **overrides)
    rows = run_bipartite_experiment(cfg)
    emit_report(rows, args.format, args.out)
    means = sorted({(r["mode"], r["mean_mse_db"]) for r in rows})
    for mode, db in means:
        print(f"{mode}: {db:.2f} dB")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_verify_theorem1(args) -> int:
    rng = np.random.default_rng(args.seed)
    cases = [("K_{2,2}", complete_bipartite(2)), ("K_{4,4}", complete_bipartite(4))]
    for i in range(args.count):
        n_half = int(rng.integers(4, 65))
        cases.append((f"random(n_half={n_half})",
                      gen_random_bipartite(n_half, int(rng.integers(0, 2**32)))))
    worst = 0.0
    for name, graph in cases:
        system = build_system(graph)
        res = reduction_identity_residual(system)
        x = np.random.default_rng(args.seed + 1).normal(size=graph.n)
        filt = inverted_ramp(system.basis_b)
        cres = verify_corollary1(system, filt, x)
        worst = max(worst, res, cres)
        print(f"{name}: identity residual {res:.3e}, filtered residual {cres:.3e}")
    if worst > 1e-8:
        print(f"FAIL: worst residual {worst:.3e} exceeds 1e-8")
        return 3
    print(f"OK: worst residual {worst:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specsamp",
        description="Generalized sampling and recovery of graph signals in the "
                    "graph frequency domain.")
    parser.add_argument("--version", action="version", version=f"specsamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a graph and write its edge list")
    p.add_argument("--kind", default="sensor",
                   choices=["sensor", "circular", "bipartite", "complete-bipartite"])
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gen_graph)

    p = sub.add_parser("filters", help="filter table utilities")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    fd = fsub.add_parser("dump", help="write two-column (lambda, value) filter tables")
    fd.add_argument("--kind", default="sensor", choices=["sensor", "circular", "bipartite"])
    fd.add_argument("--n", type=int, default=64)
    fd.add_argument("--seed", type=int, default=0)
    fd.add_argument("--m", type=int, default=8)
    fd.add_argument("--eps", type=float, default=0.1)
    fd.add_argument("--out", required=True)
    fd.set_defaults(fn=_cmd_filters_dump)

    p = sub.add_parser("recover", help="run a single recovery pipeline")
    p.add_argument("--kind", default="sensor", choices=["sensor", "circular", "bipartite"])
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--generator", default="gen1", choices=["gen1", "gen2"])
    p.add_argument("--sampling", default="bl", choices=["bl", "ir"])
    p.add_argument("--prior", default="subspace", choices=["subspace", "smoothness", "baseline"])
    p.add_argument("--mode", default="unconstrained", choices=["unconstrained", "predefined"])
    p.add_argument("--strategy", default="ds", choices=["ds", "ls", "mx"])
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(fn=_cmd_recover)

    p = sub.add_parser("exp", help="experiment harness")
    esub = p.add_subparsers(dest="subcommand", required=True)
    t2 = esub.add_parser("table2", help="full recovery method/filter/noise matrix")
    t2.add_argument("--kind", default="sensor", choices=["sensor", "circular"])
    t2.add_argument("--n", type=int, default=256)
    t2.add_argument("--seed", type=int, default=0)
    t2.add_argument("--m", type=int, default=8)
    t2.add_argument("--trials", type=int, default=1000)
    t2.add_argument("--noise", type=float, default=0.1)
    t2.add_argument("--rng-seed", type=int, default=0)
    t2.add_argument("--config", default=None)
    t2.add_argument("--out", required=True)
    t2.add_argument("--format", default="csv", choices=["csv", "json"])
    t2.set_defaults(fn=_cmd_exp_table2)

    bp = esub.add_parser("bipartite", help="one-branch Chebyshev-order sweep")
    bp.add_argument("--n", type=int, default=256)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--graph", default="matched", choices=["matched", "random"])
    bp.add_argument("--p", type=float, default=0.5)
    bp.add_argument("--orders", default="2,4,8,16,24,32")
    bp.add_argument("--trials", type=int, default=100)
    bp.add_argument("--rng-seed", type=int, default=0)
    bp.add_argument("--coeff-mean", type=float, default=1.0)
    bp.add_argument("--config", default=None)
    bp.add_argument("--out", required=True)
    bp.add_argument("--format", default="csv", choices=["csv", "json"])
    bp.set_defaults(fn=_cmd_exp_bipartite)

    p = sub.add_parser("verify", help="numerical identity checks")
    vsub = p.add_subparsers(dest="subcommand", required=True)
    th = vsub.add_parser("theorem1",
                         help="bipartite vertex/frequency sampling identity residuals")
    th.add_argument("--seed", type=int, default=0)
    th.add_argument("--count", type=int, default=20)
    th.set_defaults(fn=_cmd_verify_theorem1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SpecSampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
