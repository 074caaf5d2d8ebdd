"""Seeded simulation runs, empirical histograms, and fit statistics.

A run walks one trajectory of the chosen model: each step draws an edge
(index, then orientation), then the model's per-edge amounts, all from a
single :class:`RngStream`. The histogram aggregates cross-sectional
vertex counts; by default only the final configuration is counted, and
enabling sampling (``sample_every > 0``) adds a snapshot every
``sample_every`` steps once ``burn_in`` steps have passed. Identical
parameters give identical reports, wall time aside.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass
from typing import Sequence

from .dynamics import ModelKind, MoneyConfig, RngStream, apply_step
from .exact import ExactMarginal, asymptotic_density, exact_marginal
from .graph import Graph, sample_edge

__all__ = [
    "AllAtVertexInit",
    "CustomInit",
    "EqualInit",
    "Histogram",
    "SimParams",
    "SimReport",
    "atomic_write_text",
    "chi_square_stat",
    "initial_config",
    "run_simulation",
    "histogram_csv_text",
    "tv_distance",
    "write_histogram_csv",
    "write_json",
]


@dataclass(frozen=True)
class EqualInit:
    """Every vertex starts with the same number of coins."""

    coins_per_vertex: int

    def __post_init__(self) -> None:
        if self.coins_per_vertex < 0:
            raise ValueError("coins per vertex must be nonnegative")


@dataclass(frozen=True)
class AllAtVertexInit:
    """One vertex starts with the whole supply; everyone else with nothing."""

    vertex: int
    total_coins: int

    def __post_init__(self) -> None:
        if self.vertex < 0:
            raise ValueError("vertex must be nonnegative")
        if self.total_coins < 0:
            raise ValueError("total coins must be nonnegative")


@dataclass(frozen=True)
class CustomInit:
    """An explicit starting configuration."""

    coins: tuple[int, ...]


InitSpec = EqualInit | AllAtVertexInit | CustomInit


def initial_config(init: InitSpec, n_vertices: int) -> list[int]:
    """Materialize an init spec for a graph of the given size."""
    if isinstance(init, EqualInit):
        return [init.coins_per_vertex] * n_vertices
    if isinstance(init, AllAtVertexInit):
        if init.vertex >= n_vertices:
            raise ValueError(
                f"init vertex {init.vertex} out of range for {n_vertices} vertices"
            )
        coins = [0] * n_vertices
        coins[init.vertex] = init.total_coins
        return coins
    if isinstance(init, CustomInit):
        if len(init.coins) != n_vertices:
            raise ValueError(
                f"custom init has {len(init.coins)} entries for {n_vertices} vertices"
            )
        if any(value < 0 for value in init.coins):
            raise ValueError("custom init coin counts must be nonnegative")
        return list(init.coins)
    raise TypeError(f"unknown init spec {init!r}")


@dataclass(frozen=True)
class SimParams:
    """Everything that determines a run; equal params mean equal results."""

    model: ModelKind
    graph: Graph
    init: InitSpec
    steps: int
    seed: int
    burn_in: int = 0
    sample_every: int = 0

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if self.burn_in < 0 or self.sample_every < 0:
            raise ValueError("burn_in and sample_every must be nonnegative")


@dataclass(frozen=True)
class Histogram:
    """Pooled coin-count observations; index c holds the tally for c coins."""

    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def max_coins(self) -> int:
        return len(self.counts) - 1

    def frequencies(self) -> tuple[float, ...]:
        total = self.total
        if total == 0:
            raise ValueError("histogram is empty")
        return tuple(count / total for count in self.counts)


@dataclass(frozen=True)
class SimReport:
    """A finished run, with the yardsticks used to judge it."""

    params: SimParams
    final_config: tuple[int, ...]
    histogram: Histogram
    marginal: ExactMarginal
    tv_to_exact: float
    chi_square: float | None
    chi_square_dof: int | None
    wall_time_seconds: float

    def to_json_dict(self) -> dict:
        params = self.params
        init = params.init
        if isinstance(init, EqualInit):
            init_desc: dict = {"kind": "equal", "coins_per_vertex": init.coins_per_vertex}
        elif isinstance(init, AllAtVertexInit):
            init_desc = {
                "kind": "all_at_vertex",
                "vertex": init.vertex,
                "total_coins": init.total_coins,
            }
        else:
            init_desc = {"kind": "custom", "coins": list(init.coins)}
        return {
            "model": params.model.value,
            "graph": {"n_vertices": params.graph.n, "edge_count": params.graph.edge_count},
            "init": init_desc,
            "steps": params.steps,
            "seed": params.seed,
            "burn_in": params.burn_in,
            "sample_every": params.sample_every,
            "final_config": list(self.final_config),
            "histogram_counts": list(self.histogram.counts),
            "observations": self.histogram.total,
            "tv_to_exact": self.tv_to_exact,
            "chi_square": self.chi_square,
            "chi_square_dof": self.chi_square_dof,
            "wall_time_seconds": self.wall_time_seconds,
        }


def run_simulation(params: SimParams) -> SimReport:
    """Run one seeded trajectory and summarize it.

    The inner loop draws, per step: edge index, orientation bit, then the
    model's amounts in a fixed order. This is the same sequence that
    :func:`moneychains.graph.sample_edge` followed by
    :func:`moneychains.dynamics.apply_step` consumes, just without
    rebuilding a configuration object per step; a regression test holds
    the two paths to identical trajectories.
    """
    graph = params.graph
    coins = initial_config(params.init, graph.n)
    total_coins = sum(coins)
    counts = [0] * (total_coins + 1)
    rng = RngStream(params.seed)
    draw = rng.uniform_int_inclusive

    heads = [edge[0] for edge in graph.edges]
    tails = [edge[1] for edge in graph.edges]
    top_edge = graph.edge_count - 1
    steps = params.steps
    burn_in = params.burn_in
    sample_every = params.sample_every
    sampling = sample_every > 0
    is_reshuffle = params.model is ModelKind.RESHUFFLE
    is_exchange = params.model is ModelKind.EXCHANGE

    started = time.perf_counter()
    for t in range(1, steps + 1):
        index = draw(top_edge)
        if draw(1):
            x, y = tails[index], heads[index]
        else:
            x, y = heads[index], tails[index]
        a = coins[x]
        b = coins[y]
        if is_reshuffle:
            u = draw(a + b)
            coins[x] = u
            coins[y] = a + b - u
        elif is_exchange:
            u1 = draw(a)
            u2 = draw(b)
            coins[x] = a - u1 + u2
            coins[y] = b - u2 + u1
        else:
            cx = draw(a)
            cy = draw(b)
            u = draw(a + b - cx - cy)
            coins[x] = cx + u
            coins[y] = a + b - cx - u
        if t == steps or (sampling and t > burn_in and (t - burn_in) % sample_every == 0):
            for value in coins:
                counts[value] += 1
    if steps == 0:
        for value in coins:
            counts[value] += 1
    elapsed = time.perf_counter() - started

    assert sum(coins) == total_coins, "conservation violated"
    histogram = Histogram(tuple(counts))
    marginal = exact_marginal(params.model, graph.n, total_coins)
    tv = tv_distance(histogram, marginal)
    try:
        chi_square, dof = chi_square_stat(histogram, marginal)
    except ValueError:
        chi_square, dof = None, None
    return SimReport(
        params=params,
        final_config=tuple(coins),
        histogram=histogram,
        marginal=marginal,
        tv_to_exact=tv,
        chi_square=chi_square,
        chi_square_dof=dof,
        wall_time_seconds=elapsed,
    )


def replay_with_public_api(params: SimParams) -> tuple[int, ...]:
    """Final configuration via sample_edge and apply_step, for cross-checking.

    Slow but written entirely in terms of the public single-step API; the
    engine's inlined loop must reproduce it draw for draw.
    """
    rng = RngStream(params.seed)
    config = MoneyConfig(tuple(initial_config(params.init, params.graph.n)))
    for _ in range(params.steps):
        edge = sample_edge(params.graph, rng)
        config = apply_step(params.model, config, edge, rng)
    return config.coins


def tv_distance(histogram: Histogram, marginal: ExactMarginal) -> float:
    """Total variation distance between observed frequencies and the exact law."""
    if histogram.max_coins != marginal.total_coins:
        raise ValueError(
            f"histogram covers 0..{histogram.max_coins} but the marginal covers "
            f"0..{marginal.total_coins}"
        )
    frequencies = histogram.frequencies()
    exact = marginal.probs_float()
    return 0.5 * sum(abs(f - p) for f, p in zip(frequencies, exact))


def _pool_tail_bins(
    observed: Sequence[int], expected: Sequence[float], min_expected: float
) -> list[tuple[int, float]]:
    """Pool adjacent coin counts from the sparse tail down until each bin
    has enough expected mass; a leftover underweight head is merged into
    its neighbor."""
    bins: list[tuple[int, float]] = []
    acc_obs = 0
    acc_exp = 0.0
    for c in range(len(observed) - 1, -1, -1):
        acc_obs += observed[c]
        acc_exp += expected[c]
        if acc_exp >= min_expected:
            bins.append((acc_obs, acc_exp))
            acc_obs = 0
            acc_exp = 0.0
    if acc_exp > 0 or acc_obs > 0:
        if bins:
            last_obs, last_exp = bins[-1]
            bins[-1] = (last_obs + acc_obs, last_exp + acc_exp)
        else:
            bins.append((acc_obs, acc_exp))
    bins.reverse()
    return bins


def chi_square_stat(
    histogram: Histogram,
    marginal: ExactMarginal,
    *,
    min_expected: float = 5.0,
) -> tuple[float, int]:
    """Goodness-of-fit statistic with tail pooling, plus degrees of freedom.

    Returns ``(statistic, bins - 1)``. Raises ValueError when pooling
    leaves fewer than two bins; the histogram is too thin to test.
    """
    if histogram.max_coins != marginal.total_coins:
        raise ValueError("histogram and marginal cover different coin ranges")
    total = histogram.total
    if total == 0:
        raise ValueError("histogram is empty")
    expected = [p * total for p in marginal.probs_float()]
    bins = _pool_tail_bins(histogram.counts, expected, min_expected)
    if len(bins) < 2:
        raise ValueError(
            f"only {len(bins)} pooled bin(s) with expected mass >= {min_expected}; "
            "not enough observations for a goodness-of-fit statistic"
        )
    statistic = sum((obs - exp) ** 2 / exp for obs, exp in bins)
    return statistic, len(bins) - 1


# ---------------------------------------------------------------------------
# Serialization


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    half-written file."""
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile(
        "w", dir=directory, prefix=".tmp-", suffix="~", delete=False, encoding="utf-8"
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


def histogram_csv_text(report: SimReport) -> str:
    """Render the run's histogram in the documented CSV schema.

    Columns: ``coins,count,frequency,exact,asymptotic``. Rows cover every
    coin count where any column is nonzero. The asymptotic column is the
    limit density at temperature ``M / n`` (written as 0 when there are
    no coins at all, where no limit shape exists).
    """
    histogram = report.histogram
    marginal = report.marginal
    total = histogram.total
    n = report.params.graph.n
    total_coins = histogram.max_coins
    temperature = total_coins / n
    exact = marginal.probs_float()
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["coins", "count", "frequency", "exact", "asymptotic"])
    for c, count in enumerate(histogram.counts):
        limit = (
            asymptotic_density(report.params.model, c, temperature)
            if temperature > 0
            else 0.0
        )
        if count == 0 and exact[c] == 0.0 and limit == 0.0:
            continue
        writer.writerow([c, count, repr(count / total), repr(exact[c]), repr(limit)])
    return buffer.getvalue()


def write_histogram_csv(path: str, report: SimReport) -> None:
    atomic_write_text(path, histogram_csv_text(report))


def write_json(path: str, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")
