"""Command-line front end: simulate, exact, verify, sweep.

Exit codes: 0 on success, 1 when verification finds a failing check, and
2 for invalid input (bad flags, malformed edge lists, out-of-range
sizes). Every randomized command requires an explicit --seed; reruns with
the same arguments produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import os
import sys

from .dynamics import ModelKind, derive_seed
from .engine import (
    AllAtVertexInit,
    CustomInit,
    EqualInit,
    SimParams,
    atomic_write_text,
    histogram_csv_text,
    run_simulation,
    write_json,
)
from .exact import asymptotic_density, exact_marginal
from .graph import GRAPH_FAMILIES, Graph, GraphError, build, from_edge_list
from .oracle import StateSpaceTooLarge, run_verification

__all__ = ["main", "parse_args", "execute"]

MAX_STATES_ENV = "MONEYCHAINS_MAX_STATES"


def _add_graph_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--graph",
        choices=[family.replace("_", "-") for family in GRAPH_FAMILIES],
        help="named graph family",
    )
    group.add_argument("--edges", metavar="FILE", help="edge-list file (u v per line)")
    parser.add_argument("--n", type=int, help="vertex count for named families")
    parser.add_argument("--width", type=int, help="grid width")
    parser.add_argument("--height", type=int, help="grid height")
    parser.add_argument("--p", type=float, help="edge probability for erdos-renyi")


def _add_init_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--coins-per-vertex", type=int, help="start every vertex with this many coins"
    )
    group.add_argument(
        "--all-at-vertex",
        type=int,
        metavar="VERTEX",
        help="start with the whole supply on one vertex (requires --total-coins)",
    )
    group.add_argument(
        "--init-custom",
        metavar="C0,C1,...",
        help="explicit comma-separated starting configuration",
    )
    parser.add_argument(
        "--total-coins", type=int, help="coin supply for --all-at-vertex"
    )


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="moneychains",
        description="Conservative coin-exchange chains on connected graphs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser(
        "simulate", help="run one seeded trajectory and write its histogram"
    )
    simulate.add_argument("--model", required=True, help="reshuffle, exchange, or saving")
    _add_graph_flags(simulate)
    _add_init_flags(simulate)
    simulate.add_argument("--steps", type=int, required=True, help="number of updates")
    simulate.add_argument("--seed", type=int, required=True, help="master RNG seed")
    simulate.add_argument(
        "--burn-in", type=int, default=0, help="steps to discard before sampling"
    )
    simulate.add_argument(
        "--sample-every",
        type=int,
        default=0,
        help="snapshot cadence after burn-in (0 = final configuration only)",
    )
    simulate.add_argument("--out", metavar="CSV", help="histogram CSV path")
    simulate.add_argument("--report", metavar="JSON", help="full run report path")

    exact = commands.add_parser(
        "exact", help="write the closed-form stationary law as CSV"
    )
    exact.add_argument("--model", required=True)
    exact.add_argument("--n", type=int, required=True, help="vertex count")
    exact.add_argument("--m", type=int, required=True, help="total coins")
    exact.add_argument("--out", metavar="CSV", required=True)

    verify = commands.add_parser(
        "verify", help="exhaustively audit small instances against the exact laws"
    )
    verify.add_argument(
        "--models", default="all", help="'all' or comma-separated model names"
    )
    verify.add_argument(
        "--graphs",
        default="complete,path,cycle,star",
        help="comma-separated graph families",
    )
    verify.add_argument("--n-min", type=int, default=2)
    verify.add_argument("--n-max", type=int, default=4)
    verify.add_argument("--m-min", type=int, default=0)
    verify.add_argument("--m-max", type=int, default=6)
    verify.add_argument("--out", metavar="JSON", help="verification report path")
    verify.add_argument(
        "--max-states",
        type=int,
        help=f"state-space cap (also read from ${MAX_STATES_ENV})",
    )

    sweep = commands.add_parser(
        "sweep", help="run a parameter grid, one histogram CSV per point"
    )
    sweep.add_argument("--models", required=True, help="comma-separated model names")
    sweep.add_argument(
        "--graph",
        required=True,
        choices=[f.replace("_", "-") for f in ("complete", "path", "cycle", "star")],
    )
    sweep.add_argument("--n-list", required=True, help="comma-separated vertex counts")
    sweep.add_argument(
        "--coins-per-vertex-list", required=True, help="comma-separated initial loads"
    )
    sweep.add_argument("--steps-list", required=True, help="comma-separated step counts")
    sweep.add_argument("--seed", type=int, required=True, help="master seed")
    sweep.add_argument("--burn-in", type=int, default=0)
    sweep.add_argument("--sample-every", type=int, default=0)
    sweep.add_argument("--out-dir", required=True, help="directory for CSVs and index.json")

    return parser.parse_args(argv)


def _parse_int_list(text: str, label: str) -> list[int]:
    try:
        values = [int(token) for token in text.split(",") if token.strip() != ""]
    except ValueError:
        raise ValueError(f"{label} must be a comma-separated list of integers") from None
    if not values:
        raise ValueError(f"{label} is empty")
    return values


def _parse_models(text: str) -> list[ModelKind]:
    if text.strip().lower() == "all":
        return list(ModelKind)
    return [ModelKind.parse(token) for token in text.split(",") if token.strip()]


def _graph_from_args(args: argparse.Namespace) -> Graph:
    if args.edges is not None:
        with open(args.edges, "r", encoding="utf-8") as handle:
            return from_edge_list(handle.read())
    family = args.graph.replace("-", "_")
    if family == "erdos_renyi":
        # The graph draw must not disturb the trajectory stream, so it
        # runs on a seed derived from the master seed.
        return build(
            family, args.n, p=args.p, seed=derive_seed(args.seed, "graph")
        )
    return build(family, args.n, width=args.width, height=args.height)


def _init_from_args(args: argparse.Namespace) -> EqualInit | AllAtVertexInit | CustomInit:
    if args.coins_per_vertex is not None:
        return EqualInit(args.coins_per_vertex)
    if args.all_at_vertex is not None:
        if args.total_coins is None:
            raise ValueError("--all-at-vertex requires --total-coins")
        return AllAtVertexInit(args.all_at_vertex, args.total_coins)
    return CustomInit(tuple(_parse_int_list(args.init_custom, "--init-custom")))


def _cmd_simulate(args: argparse.Namespace) -> int:
    model = ModelKind.parse(args.model)
    graph = _graph_from_args(args)
    params = SimParams(
        model=model,
        graph=graph,
        init=_init_from_args(args),
        steps=args.steps,
        seed=args.seed,
        burn_in=args.burn_in,
        sample_every=args.sample_every,
    )
    report = run_simulation(params)
    if args.out:
        atomic_write_text(args.out, histogram_csv_text(report))
    if args.report:
        write_json(args.report, report.to_json_dict())
    chi = "n/a" if report.chi_square is None else f"{report.chi_square:.2f}"
    dof = "n/a" if report.chi_square_dof is None else str(report.chi_square_dof)
    print(
        f"{model.value} on {graph.n} vertices, {sum(report.final_config)} coins, "
        f"{args.steps} steps: tv_to_exact={report.tv_to_exact:.5f} "
        f"chi_square={chi} (dof={dof}) observations={report.histogram.total}"
    )
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    model = ModelKind.parse(args.model)
    marginal = exact_marginal(model, args.n, args.m)
    temperature = args.m / args.n
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["coins", "probability", "asymptotic"])
    probs = marginal.probs_float()
    for c in range(args.m + 1):
        limit = asymptotic_density(model, c, temperature) if temperature > 0 else 0.0
        writer.writerow([c, repr(probs[c]), repr(limit)])
    atomic_write_text(args.out, buffer.getvalue())
    print(f"wrote exact {model.value} marginal for n={args.n}, m={args.m} to {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    models = _parse_models(args.models)
    families = [token.strip().replace("-", "_") for token in args.graphs.split(",") if token.strip()]
    if not families:
        raise ValueError("--graphs is empty")
    if args.n_min < 2 or args.n_max < args.n_min:
        raise ValueError("need 2 <= n-min <= n-max")
    if args.m_min < 0 or args.m_max < args.m_min:
        raise ValueError("need 0 <= m-min <= m-max")

    cap = args.max_states
    if cap is None and os.environ.get(MAX_STATES_ENV):
        try:
            cap = int(os.environ[MAX_STATES_ENV])
        except ValueError:
            raise ValueError(
                f"${MAX_STATES_ENV} must be an integer, got "
                f"{os.environ[MAX_STATES_ENV]!r}"
            ) from None
    caps: dict = {}
    if cap is not None:
        if cap < 1:
            raise ValueError("--max-states must be positive")
        caps = {"max_configs": cap, "max_entries": cap * cap}

    report = run_verification(
        models,
        families,
        range(args.n_min, args.n_max + 1),
        range(args.m_min, args.m_max + 1),
        **caps,
    )
    if args.out:
        write_json(args.out, report.to_json_dict())
    failed = [
        (instance, check)
        for instance in report.instances
        for check in instance.checks
        if not check.passed
    ] + [(None, check) for check in report.cross_checks if not check.passed]
    total_checks = sum(len(instance.checks) for instance in report.instances) + len(
        report.cross_checks
    )
    if report.passed:
        print(
            f"verification passed: {total_checks} checks over "
            f"{len(report.instances)} instances"
        )
        return 0
    for instance, check in failed:
        where = (
            f"{instance.model} {instance.graph} n={instance.n_vertices} "
            f"m={instance.total_coins}"
            if instance is not None
            else "cross-check"
        )
        print(f"FAILED {check.name} [{where}]: {check.detail}", file=sys.stderr)
    print(f"verification failed: {len(failed)} of {total_checks} checks", file=sys.stderr)
    return 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    models = _parse_models(args.models)
    n_list = _parse_int_list(args.n_list, "--n-list")
    coins_list = _parse_int_list(args.coins_per_vertex_list, "--coins-per-vertex-list")
    steps_list = _parse_int_list(args.steps_list, "--steps-list")
    os.makedirs(args.out_dir, exist_ok=True)

    points = []
    grid = itertools.product(models, n_list, coins_list, steps_list)
    for index, (model, n, coins, steps) in enumerate(grid):
        seed = derive_seed(args.seed, f"sweep:{index}")
        params = SimParams(
            model=model,
            graph=build(args.graph.replace("-", "_"), n),
            init=EqualInit(coins),
            steps=steps,
            seed=seed,
            burn_in=args.burn_in,
            sample_every=args.sample_every,
        )
        report = run_simulation(params)
        filename = f"sim_{model.value}_n{n}_c{coins}_s{steps}.csv"
        atomic_write_text(
            os.path.join(args.out_dir, filename), histogram_csv_text(report)
        )
        points.append(
            {
                "model": model.value,
                "graph": args.graph,
                "n_vertices": n,
                "coins_per_vertex": coins,
                "steps": steps,
                "seed": seed,
                "csv": filename,
                "tv_to_exact": report.tv_to_exact,
                "chi_square": report.chi_square,
                "chi_square_dof": report.chi_square_dof,
            }
        )
        print(f"[{index + 1}] {filename}: tv_to_exact={report.tv_to_exact:.5f}")
    write_json(
        os.path.join(args.out_dir, "index.json"),
        {
            "master_seed": args.seed,
            "burn_in": args.burn_in,
            "sample_every": args.sample_every,
            "points": points,
        },
    )
    return 0


def execute(args: argparse.Namespace) -> int:
    handlers = {
        "simulate": _cmd_simulate,
        "exact": _cmd_exact,
        "verify": _cmd_verify,
        "sweep": _cmd_sweep,
    }
    return handlers[args.command](args)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    try:
        return execute(args)
    except (ValueError, StateSpaceTooLarge, OSError) as exc:
        # GraphError subclasses ValueError; all are input problems.
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
