"""Calibration runs behind the frozen thresholds in the test suite.

Prints the observed statistic for every configuration the tests pin
down, over a spread of seeds, so the committed tolerances can be checked
against fresh evidence at any time. Expect a few minutes of runtime.

Protocol: thresholds in tests keep at least a 2x margin over the worst
value seen here across seeds 0..9.
"""

from __future__ import annotations

import argparse

from moneychains import (
    AllAtVertexInit,
    EqualInit,
    ModelKind,
    SimParams,
    build,
    exact_marginal,
    asymptotic_density,
    run_simulation,
)

FIGURE_STEPS = 1_000_000
FIGURE_BURN_IN = 200_000
FIGURE_SAMPLE_EVERY = 400


def figure_reproduction(seeds: range) -> None:
    print("== figure reproduction: equal init at T=100, 1e6 steps, sampled histogram")
    for model in ModelKind:
        for n in (100, 500):
            worst = 0.0
            for seed in seeds:
                params = SimParams(
                    model=model,
                    graph=build("complete", n),
                    init=EqualInit(100),
                    steps=FIGURE_STEPS,
                    seed=seed,
                    burn_in=FIGURE_BURN_IN,
                    sample_every=FIGURE_SAMPLE_EVERY,
                )
                worst = max(worst, run_simulation(params).tv_to_exact)
            print(f"  {model.value:9s} n={n}: max tv over {len(seeds)} seeds = {worst:.4f}")


def asymptotic_agreement() -> None:
    print("== exact marginal vs discretized limit density, n=1000, T=100 (no seeds)")
    n, total = 1000, 100_000
    for model in ModelKind:
        marginal = exact_marginal(model, n, total)
        density = [asymptotic_density(model, c, 100.0) for c in range(total + 1)]
        mass = sum(density)
        tv = 0.5 * sum(
            abs(p - d / mass) for p, d in zip(marginal.probs_float(), density)
        )
        print(f"  {model.value:9s}: tv = {tv:.6f}")


def structure_insensitivity(seeds: range) -> None:
    print("== cycle graph and lopsided init reach the same law (1e7 steps)")
    for seed in seeds:
        params = SimParams(
            model=ModelKind.RESHUFFLE,
            graph=build("cycle", 100),
            init=EqualInit(100),
            steps=10_000_000,
            seed=seed,
            burn_in=2_000_000,
            sample_every=400,
        )
        print(f"  cycle n=100 seed={seed}: tv = {run_simulation(params).tv_to_exact:.4f}")
    for seed in seeds:
        params = SimParams(
            model=ModelKind.RESHUFFLE,
            graph=build("complete", 100),
            init=AllAtVertexInit(0, 10_000),
            steps=10_000_000,
            seed=seed,
            burn_in=2_000_000,
            sample_every=400,
        )
        print(f"  all-at-vertex seed={seed}: tv = {run_simulation(params).tv_to_exact:.4f}")


def equilibrium_chi_square(seeds: range) -> None:
    print("== chi-square at equilibrium: reshuffle complete n=50, T=20, 1e6 steps")
    try:
        from scipy.stats import chi2
    except ImportError:
        chi2 = None
    for seed in seeds:
        params = SimParams(
            model=ModelKind.RESHUFFLE,
            graph=build("complete", 50),
            init=EqualInit(20),
            steps=1_000_000,
            seed=seed,
            burn_in=200_000,
            sample_every=500,
        )
        report = run_simulation(params)
        line = f"  seed={seed}: stat = {report.chi_square:.1f} dof = {report.chi_square_dof}"
        if chi2 is not None:
            line += f" (99.9% quantile = {chi2.ppf(0.999, report.chi_square_dof):.1f})"
        print(line)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10, help="seeds 0..N-1 per config")
    parser.add_argument(
        "--section",
        choices=["figure", "asymptotic", "structure", "chi2", "all"],
        default="all",
    )
    args = parser.parse_args()
    seeds = range(args.seeds)
    if args.section in ("figure", "all"):
        figure_reproduction(seeds)
    if args.section in ("asymptotic", "all"):
        asymptotic_agreement()
    if args.section in ("structure", "all"):
        structure_insensitivity(range(min(3, args.seeds)))
    if args.section in ("chi2", "all"):
        equilibrium_chi_square(range(min(5, args.seeds)))


if __name__ == "__main__":
    main()
