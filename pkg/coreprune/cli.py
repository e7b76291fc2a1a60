#!/usr/bin/env python3
"""
CorePrune CLI
=============

Command-line interface for running coreprune features on-demand.

Usage:
------
    python -m coreprune.cli <command> [options]

Commands:
---------
    mvee         Löwner ellipsoid of a point matrix + containment stats
    cara         Carathéodory set of a target point
    linf         ℓ∞-coreset indices + ratio diagnostic
    coreset      Sensitivity-sampled coreset (signed weights via --weights)
    complexity   Lower bound on the regression complexity measure
    eval         Relative error of a coreset on random queries
    prune        Prune a network manifest to per-layer budgets
    status       Show resolved configuration and validation problems

Every command accepts --seed, --output, --format {json,csv} and --config.
Results go to stdout (or --output); progress banners go to stderr.
Exit codes: 0 success, 2 input error, 3 numerical failure.

Examples:
---------
    # Coreset of 100 rows, reproducible
    python -m coreprune.cli coreset P.npy -m 100 --seed 7

    # Check a coreset on 1000 ReLU queries
    python -m coreprune.cli eval P.npy --coreset C.json --activation relu

    # Prune a 784-300-100-10 network to 30 and 10 neurons
    python -m coreprune.cli prune net.json --budgets 30,10 --format csv
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from dotenv import load_dotenv

from coreprune import __version__
from coreprune.config import (
    get_caratheodory_config,
    get_cli_config,
    get_complexity_config,
    get_config,
    get_evaluation_config,
    get_geometry_config,
    get_linf_config,
    get_pruning_config,
    get_sampling_config,
    validate_config,
)
from coreprune.errors import CorePruneError, InvalidParameter
from coreprune.utils import dumps_json, setup_logging

logger = logging.getLogger("coreprune.cli")


# =============================================================================
# OUTPUT HELPERS
# =============================================================================

def _banner(title: str) -> None:
    print("=" * 60, file=sys.stderr)
    print(f"COREPRUNE - {title}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)


def _results(lines: Sequence[str]) -> None:
    print("\n" + "-" * 40, file=sys.stderr)
    print("RESULTS:", file=sys.stderr)
    print("-" * 40, file=sys.stderr)
    for line in lines:
        print(f"  {line}", file=sys.stderr)


def _emit(
    args: argparse.Namespace,
    payload: dict[str, Any],
    csv_records: Sequence[dict[str, Any]],
    csv_columns: Sequence[str],
    csv_text: str | None = None,
) -> None:
    """Write the command result as JSON or CSV to --output or stdout."""
    from coreprune.artifacts.reports import records_to_csv

    if args.format == "csv":
        text = csv_text if csv_text is not None else records_to_csv(csv_records, csv_columns)
    else:
        text = dumps_json(payload)

    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"\nWrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _load_points(path: str) -> np.ndarray:
    from coreprune.artifacts.npy_format import read_array

    P = read_array(path)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.ndim != 2:
        raise InvalidParameter(f"{path}: expected a matrix, got {P.ndim} dimensions")
    return P


def _load_weights(path: str | None) -> np.ndarray | None:
    if path is None:
        return None
    from coreprune.artifacts.npy_format import read_array

    return read_array(path).reshape(-1)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_mvee(args: argparse.Namespace) -> int:
    """
    Löwner ellipsoid of the rows of an array.

    Rank-deficient inputs are projected onto their affine hull first; the
    ellipsoid is then reported in basis coordinates along with the basis.

    Returns:
        int: Exit code (0=success)
    """
    from coreprune.geometry import lift, mvee, project, rank_and_basis, shrunk_vertices

    _banner("LÖWNER ELLIPSOID")
    geometry = get_geometry_config(args.config)
    eps = args.eps if args.eps is not None else geometry["eps_mvee"]
    max_iter = args.max_iter if args.max_iter is not None else geometry["max_iter"]

    P = _load_points(args.array)
    basis = rank_and_basis(P, geometry["rank_tol"])
    projected = basis.r < P.shape[1]
    coords = project(P, basis).data if projected else P
    print(f"\nPoints: {P.shape[0]} x {P.shape[1]} (affine rank {basis.r})", file=sys.stderr)

    E = mvee(coords, eps_mvee=eps, max_iter=max_iter)
    membership = np.atleast_1d(E.membership(coords))
    vertices = shrunk_vertices(E, 1.0 / E.r)
    if projected:
        vertices = lift(vertices, basis).data

    payload = {
        "G": E.G,
        "c": E.c,
        "r": E.r,
        "iterations": E.iterations,
        "gap": E.gap,
        "volume_factor": E.volume_factor(),
        "membership": {
            "max": float(membership.max()),
            "mean": float(membership.mean()),
            "outside": int(np.count_nonzero(membership > 1.0 + eps)),
        },
        "shrunk_vertices": vertices,
        "projected": projected,
        "basis": basis.as_dict() if projected else None,
    }
    _results([
        f"Iterations: {E.iterations}",
        f"Gap: {E.gap:.3g}",
        f"Max membership: {membership.max():.9f}",
    ])
    _emit(args, payload,
          [{"row": i, "membership": float(v)} for i, v in enumerate(membership)],
          ["row", "membership"])
    return 0


def cmd_cara(args: argparse.Namespace) -> int:
    """Carathéodory set of --target inside the hull of the rows."""
    from coreprune.coresets.caratheodory import cara
    from coreprune.artifacts.npy_format import read_array

    _banner("CARATHÉODORY")
    P = _load_points(args.array)
    v = read_array(args.target).reshape(-1)
    settings = get_caratheodory_config(args.config)

    D = cara(v, P, feasibility_tol=settings["feasibility_tol"], max_condition=settings["max_condition"])
    payload = {**D.as_dict(), "support_size": D.support_size, "residual": D.residual(P, v)}
    _results([f"Support: {D.support_size} of {P.shape[0]} rows", f"Residual: {payload['residual']:.3g}"])
    _emit(args, payload,
          [{"index": int(i), "coefficient": float(c)} for i, c in zip(D.indices, D.coefficients)],
          ["index", "coefficient"])
    return 0


def cmd_linf(args: argparse.Namespace) -> int:
    """ℓ∞-coreset of the rows and the worst observed ratio."""
    from coreprune.coresets.linf_coreset import inf_coreset, ratio_diagnostic
    from coreprune.geometry import affine_rank

    _banner("L-INFINITY CORESET")
    geometry = get_geometry_config(args.config)
    linf = get_linf_config(args.config)
    trials = args.trials if args.trials is not None else linf["trials"]
    j = args.j if args.j is not None else linf["query_columns"]

    P = _load_points(args.array)
    S = inf_coreset(P, rank_tol=geometry["rank_tol"], eps_mvee=geometry["eps_mvee"],
                    max_iter=geometry["max_iter"])
    r = affine_rank(P, geometry["rank_tol"])
    observed = ratio_diagnostic(P, S, trials=trials, j=j, seed=args.seed)

    payload = {
        "indices": S,
        "size": int(S.size),
        "rank": r,
        "size_bound": 2 * r * (r + 1),
        "ratio": {
            "max_observed": observed,
            "bound": 2.0 * r ** 1.5,
            "trials": trials,
            "j": j,
        },
    }
    _results([f"|S| = {S.size} (bound {2 * r * (r + 1)})", f"Max ratio: {observed:.4f} (bound {2.0 * r ** 1.5:.4f})"])
    _emit(args, payload, [{"index": int(i)} for i in S], ["index"])
    return 0


def cmd_coreset(args: argparse.Namespace) -> int:
    """Sensitivity-sampled coreset, signed-weight path when --weights is given."""
    from coreprune.coresets.sensitivity import gen_coreset, onion_sensitivities, sample_coreset
    from coreprune.geometry import PointSet

    _banner("SENSITIVITY CORESET")
    geometry = get_geometry_config(args.config)
    sampling = get_sampling_config(args.config)
    peel = {"rank_tol": geometry["rank_tol"], "eps_mvee": geometry["eps_mvee"], "max_iter": geometry["max_iter"]}
    m = args.m if args.m is not None else sampling["coreset_size"]
    if (args.eps is None) != (args.delta is None):
        raise InvalidParameter("--eps and --delta must be given together")

    P = PointSet(_load_points(args.array), _load_weights(args.weights))
    if P.is_weighted:
        C = gen_coreset(P, m, seed=args.seed, **peel)
        total = None
    else:
        sens = onion_sensitivities(P, **peel)
        C = sample_coreset(P, sens, m, seed=args.seed)
        total = sens.total

    payload = {**C.as_dict(), "m": m, "n": P.n, "weighted": P.is_weighted, "total_sensitivity": total}
    lines = [f"Rows: {P.n}", f"Draws: {m} ({np.unique(C.indices).size} distinct)"]
    if args.eps is not None:
        payload["size_bound"] = _size_bound(args, P, geometry, sampling)
        lines.append(f"Sufficient m for eps={args.eps}, delta={args.delta}: {payload['size_bound']['m']}")
    _results(lines)
    _emit(args, payload,
          [{"index": int(i), "u": float(u)} for i, u in zip(C.indices, C.u)],
          ["index", "u"])
    return 0


def _size_bound(args: argparse.Namespace, P, geometry: dict, sampling: dict) -> dict[str, Any]:
    """Sample-size bound for --eps/--delta; μ is estimated when --mu is absent."""
    from coreprune.activation import complexity_estimate
    from coreprune.coresets.sensitivity import sample_size_bound
    from coreprune.geometry import affine_rank

    mu = args.mu
    if mu is None:
        complexity = get_complexity_config(args.config)
        biased = np.hstack([P.data, np.ones((P.n, 1))])
        mu = complexity_estimate(biased, n_random=complexity["queries"],
                                 refine_steps=complexity["refine_steps"], seed=args.seed).mu_hat
    r = affine_rank(P.data, geometry["rank_tol"]) if P.n > 1 else 1
    c = float(sampling["bound_constant"])
    return {
        "m": sample_size_bound(P.n, P.d, r, mu, args.eps, args.delta, c),
        "eps": args.eps,
        "delta": args.delta,
        "mu": mu,
        "mu_estimated": args.mu is None,
        "rank": r,
        "c": c,
    }


def cmd_complexity(args: argparse.Namespace) -> int:
    """Lower bound on the regression complexity measure."""
    from coreprune.activation import complexity_estimate

    _banner("COMPLEXITY MEASURE")
    settings = get_complexity_config(args.config)
    queries = args.queries if args.queries is not None else settings["queries"]
    refine = args.refine if args.refine is not None else settings["refine_steps"]

    P = _load_points(args.array)
    if args.append_bias:
        P = np.hstack([P, np.ones((P.shape[0], 1))])

    estimate = complexity_estimate(P, n_random=queries, refine_steps=refine, seed=args.seed)
    payload = {**estimate.as_dict(), "lower_bound": True}
    _results([f"mu_hat >= {estimate.mu_hat:.6g}", f"Evaluated: {estimate.evaluated}, skipped: {estimate.skipped}"])
    row = {k: payload[k] for k in ("mu_hat", "evaluated", "skipped", "refine_steps")}
    _emit(args, payload, [row], list(row))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    """Relative error of a stored coreset against the full point set."""
    from coreprune.activation import coreset_rel_error, gaussian_queries
    from coreprune.coresets.sensitivity import WeightedCoreset
    from coreprune.geometry import PointSet

    _banner("CORESET ERROR")
    settings = get_evaluation_config(args.config)
    activation = args.activation or settings["activation"]
    count = args.queries if args.queries is not None else settings["queries"]

    P = PointSet(_load_points(args.array), _load_weights(args.weights))
    try:
        with open(args.coreset, encoding="utf-8") as f:
            C = WeightedCoreset.from_dict(json.load(f))
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{args.coreset}: invalid JSON ({exc})") from exc
    if C.size and (C.indices.min() < 0 or C.indices.max() >= P.n):
        raise InvalidParameter(f"coreset indices fall outside 0..{P.n - 1}")

    stats = coreset_rel_error(P, C, gaussian_queries(P.d, count, args.seed), activation)
    payload = {**stats.as_dict(), "activation": activation, "queries": count}
    _results([f"Max error: {stats.max:.6g}", f"Mean error: {stats.mean:.6g}", f"Skipped: {stats.skipped}"])
    row = {k: payload[k] for k in ("max", "mean", "evaluated", "skipped")}
    _emit(args, payload, [row], list(row))
    return 0


def cmd_prune(args: argparse.Namespace) -> int:
    """Prune a network manifest; writes the pruned manifest and emits the report."""
    from coreprune.artifacts.manifest import load_manifest, save_network
    from coreprune.artifacts.reports import report_to_csv
    from coreprune.pruning import budgets_for_ratio, prune_network

    _banner("NEURON PRUNING")
    settings = get_pruning_config(args.config)
    source = Path(args.manifest)
    net, manifest = load_manifest(source)

    match_widths = args.match_widths
    if args.target_pr is not None:
        budgets = budgets_for_ratio(net, args.target_pr)
        match_widths = True
    else:
        try:
            budgets = [int(b) for b in args.budgets.split(",") if b.strip()]
        except ValueError as exc:
            raise InvalidParameter(f"--budgets must be comma-separated integers, got {args.budgets!r}") from exc
    print(f"\nNetwork: {manifest.name} widths {net.widths}", file=sys.stderr)
    print(f"Budgets: {budgets}", file=sys.stderr)

    pruned, report = prune_network(
        net,
        budgets,
        seed=args.seed,
        probe_inputs=args.probes if args.probes is not None else settings["probe_inputs"],
        reduce_method=args.reduce_method or settings["reduce_method"],
        reduce_dim=args.reduce_dim if args.reduce_dim is not None else settings["reduce_dim"],
        match_widths=match_widths,
    )

    target = Path(args.pruned_manifest) if args.pruned_manifest else source.with_name(f"{source.stem}_pruned.json")
    save_network(pruned, target, name=f"{manifest.name}-pruned", seed=args.seed,
                 created=manifest.created, pruned_from=source.name)

    payload = {**report.as_dict(), "pruned_manifest": target.name}
    _results([
        f"Widths: {net.widths} -> {pruned.widths}",
        f"Parameters: {report.params_before} -> {report.params_after}",
        f"PR: {report.pr_percent:.2f}%",
    ])
    _emit(args, payload, [], [], csv_text=report_to_csv(report))
    return 0


def cmd_status(args: argparse.Namespace) -> int:
    """Show resolved configuration and validation problems."""
    from coreprune.utils import LOG_ENV_VAR

    _banner("STATUS")
    errors = validate_config(args.config)
    if errors:
        print("\nConfiguration errors:", file=sys.stderr)
        for error in errors:
            print(f"  - {error}", file=sys.stderr)
    else:
        print("\nConfiguration: OK", file=sys.stderr)

    payload = {
        "version": __version__,
        "config": get_config(args.config),
        "problems": errors,
        "log_level": os.environ.get(LOG_ENV_VAR, "error"),
    }
    rows = [{"problem": e} for e in errors]
    _emit(args, payload, rows, ["problem"])
    return 2 if errors else 0


# =============================================================================
# ENTRY POINT
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Root seed for all randomness (default: from config, 0)")
    common.add_argument("--output", "-o", help="Write the result here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], help="Result format (default: from config, json)")
    common.add_argument("--config", help="Alternate config.yaml")

    parser = argparse.ArgumentParser(
        prog="coreprune",
        description="CorePrune - Data-independent coresets and neuron pruning",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s mvee P.npy                    Löwner ellipsoid
  %(prog)s linf P.npy --trials 1000      ℓ∞-coreset + ratio check
  %(prog)s coreset P.npy -m 100          Sensitivity sampling
  %(prog)s prune net.json --budgets 30,10
  %(prog)s status                        Show configuration
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # mvee command
    mvee_parser = subparsers.add_parser("mvee", parents=[common], help="Löwner ellipsoid + containment stats")
    mvee_parser.add_argument("array", help="NPY matrix, one point per row")
    mvee_parser.add_argument("--eps", type=float, help="Gap target (default: from config)")
    mvee_parser.add_argument("--max-iter", type=int, help="Iteration cap (default: from config)")

    # cara command
    cara_parser = subparsers.add_parser("cara", parents=[common], help="Carathéodory set of a target point")
    cara_parser.add_argument("array", help="NPY matrix, one point per row")
    cara_parser.add_argument("--target", required=True, help="NPY vector inside the hull")

    # linf command
    linf_parser = subparsers.add_parser("linf", parents=[common], help="ℓ∞-coreset + ratio diagnostic")
    linf_parser.add_argument("array", help="NPY matrix, one point per row")
    linf_parser.add_argument("--trials", type=int, help="Random (X, v) trials (default: from config)")
    linf_parser.add_argument("--j", type=int, help="Columns of X (default: from config)")

    # coreset command
    coreset_parser = subparsers.add_parser("coreset", parents=[common], help="Sensitivity-sampled coreset")
    coreset_parser.add_argument("array", help="NPY matrix, one point per row")
    coreset_parser.add_argument("-m", type=int, help="Sample size (default: from config)")
    coreset_parser.add_argument("--weights", help="NPY vector of signed row weights")
    coreset_parser.add_argument("--eps", type=float, help="Also report the sample size sufficient for this error")
    coreset_parser.add_argument("--delta", type=float, help="Failure probability for --eps")
    coreset_parser.add_argument("--mu", type=float, help="Complexity measure for --eps (default: estimated)")

    # complexity command
    complexity_parser = subparsers.add_parser("complexity", parents=[common], help="Complexity-measure lower bound")
    complexity_parser.add_argument("array", help="NPY matrix whose rows end in 1")
    complexity_parser.add_argument("--queries", type=int, help="Random queries (default: from config)")
    complexity_parser.add_argument("--refine", type=int, help="Golden-section steps (default: from config)")
    complexity_parser.add_argument("--append-bias", action="store_true", help="Append the bias column of ones")

    # eval command
    eval_parser = subparsers.add_parser("eval", parents=[common], help="Coreset relative error")
    eval_parser.add_argument("array", help="NPY matrix, one point per row")
    eval_parser.add_argument("--coreset", required=True, help="Coreset JSON (indices, u)")
    eval_parser.add_argument("--activation", choices=["relu", "hinge", "logloss", "softplus", "abs"],
                             help="Cost function (default: from config)")
    eval_parser.add_argument("--queries", type=int, help="Standard normal queries (default: from config)")
    eval_parser.add_argument("--weights", help="NPY vector of row weights")

    # prune command
    prune_parser = subparsers.add_parser("prune", parents=[common], help="Prune a network manifest")
    prune_parser.add_argument("manifest", help="Network manifest JSON")
    budget_group = prune_parser.add_mutually_exclusive_group(required=True)
    budget_group.add_argument("--budgets", help="Comma-separated budget per hidden layer")
    budget_group.add_argument("--target-pr", type=float,
                              help="Pruning ratio in percent; widths from parameter arithmetic, met exactly")
    prune_parser.add_argument("--match-widths", action="store_true",
                              help="Treat --budgets as exact kept widths instead of draw counts")
    prune_parser.add_argument("--probes", type=int, help="Probe inputs per layer (default: from config)")
    prune_parser.add_argument("--reduce-method", choices=["pca", "gaussian_projection"],
                              help="Neuron-point preprocessing (default: from config)")
    prune_parser.add_argument("--reduce-dim", type=int, help="Target dimension for --reduce-method")
    prune_parser.add_argument("--pruned-manifest", help="Where to write the pruned manifest")

    # status command
    subparsers.add_parser("status", parents=[common], help="Show configuration and validation problems")

    return parser


def _apply_cli_defaults(args: argparse.Namespace) -> None:
    cli_config = get_cli_config(args.config)
    if args.seed is None:
        try:
            args.seed = int(cli_config.get("seed", 0))
        except (TypeError, ValueError) as exc:
            raise InvalidParameter(f"cli: seed must be an integer, got {cli_config.get('seed')!r}") from exc
    if args.format is None:
        args.format = cli_config.get("format", "json")


def main(argv: Sequence[str] | None = None) -> int:
    """
    Main entry point for the CLI.

    Returns:
        int: Exit code
    """
    load_dotenv()
    setup_logging()

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    # Dispatch to command handler
    commands = {
        "mvee": cmd_mvee,
        "cara": cmd_cara,
        "linf": cmd_linf,
        "coreset": cmd_coreset,
        "complexity": cmd_complexity,
        "eval": cmd_eval,
        "prune": cmd_prune,
        "status": cmd_status,
    }

    handler = commands[args.command]
    try:
        _apply_cli_defaults(args)
        return handler(args)
    except CorePruneError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"ERROR: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
