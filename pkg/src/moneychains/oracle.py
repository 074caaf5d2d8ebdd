"""Brute-force ground truth on small systems: exact matrices and structural audits.

Everything here is deliberately exhaustive. Configurations are enumerated,
transition matrices are assembled entry by entry from the exact edge
kernels, and the stationary vector is solved for with fraction-free
Gaussian elimination over the integers. No floating point appears
anywhere, so a passing check is a proof for that instance, not an
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .dynamics import ModelKind, edge_kernel
from .exact import ExactMarginal, binomial, exact_marginal, stationary_weight
from .graph import Graph, build

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an accelerator, not a dependency
    _mpz = int

__all__ = [
    "CheckResult",
    "ConfigSpace",
    "InstanceReport",
    "StateSpaceTooLarge",
    "TransitionMatrix",
    "VerificationReport",
    "check_detailed_balance",
    "check_doubly_stochastic",
    "check_irreducible_aperiodic",
    "enumerate_configs",
    "marginal_from_stationary",
    "run_verification",
    "stationary_solve",
    "transition_matrix",
]

DEFAULT_MAX_CONFIGS = 1_000_000
DEFAULT_MAX_ENTRIES = 1_000_000


class StateSpaceTooLarge(RuntimeError):
    """The requested enumeration or matrix exceeds the configured cap."""


def _compositions_lex(n_parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """All ways to split ``total`` over ``n_parts`` slots, lexicographically."""
    state = [0] * (n_parts - 1) + [total]
    while True:
        yield tuple(state)
        # Lex successor: bump the slot left of the rightmost nonzero and
        # push everything to its right onto the final slot.
        pivot = n_parts - 1
        while pivot > 0 and state[pivot] == 0:
            pivot -= 1
        if pivot == 0:
            return
        moved = state[pivot] - 1
        state[pivot - 1] += 1
        for i in range(pivot, n_parts - 1):
            state[i] = 0
        state[n_parts - 1] = moved


@dataclass(frozen=True)
class ConfigSpace:
    """Lexicographically ordered enumeration of every coin configuration.

    ``configs[i]`` is the i-th coin tuple; :meth:`rank` and :meth:`unrank`
    convert between tuples and indices arithmetically (combinatorial
    number system), independent of the stored list, so the two routes can
    cross-check each other.
    """

    n_vertices: int
    total_coins: int
    configs: tuple[tuple[int, ...], ...]

    @property
    def card(self) -> int:
        return len(self.configs)

    def index_of(self, config: tuple[int, ...]) -> int:
        return self._index[config]

    @property
    def _index(self) -> dict[tuple[int, ...], int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {cfg: i for i, cfg in enumerate(self.configs)}
            self.__dict__["_index_cache"] = cached
        return cached

    def rank(self, config: Sequence[int]) -> int:
        """Position of ``config`` in lexicographic order, by counting."""
        if len(config) != self.n_vertices or sum(config) != self.total_coins:
            raise ValueError(f"config {config!r} does not belong to this space")
        position = 0
        remaining = self.total_coins
        for i in range(self.n_vertices - 1):
            parts_after = self.n_vertices - 1 - i
            value = config[i]
            # Configurations with a smaller value in slot i, summed in
            # closed form (hockey stick).
            position += binomial(remaining + parts_after, parts_after) - binomial(
                remaining - value + parts_after, parts_after
            )
            remaining -= value
        return position

    def unrank(self, position: int) -> tuple[int, ...]:
        """Inverse of :meth:`rank`."""
        if not 0 <= position < self.card:
            raise ValueError(f"rank {position} out of range for card {self.card}")
        out = []
        remaining = self.total_coins
        for i in range(self.n_vertices - 1):
            parts_after = self.n_vertices - 1 - i
            value = 0
            while True:
                block = binomial(remaining - value + parts_after - 1, parts_after - 1)
                if position < block:
                    break
                position -= block
                value += 1
            out.append(value)
            remaining -= value
        out.append(remaining)
        return tuple(out)


def enumerate_configs(
    n_vertices: int,
    total_coins: int,
    *,
    max_configs: int = DEFAULT_MAX_CONFIGS,
) -> ConfigSpace:
    """Enumerate every way to spread the coins over the vertices.

    The cardinality ``C(total_coins + n_vertices - 1, n_vertices - 1)`` is
    checked against ``max_configs`` before any work happens.
    """
    if n_vertices < 1:
        raise ValueError(f"need at least one vertex, got {n_vertices}")
    if total_coins < 0:
        raise ValueError(f"total coins must be nonnegative, got {total_coins}")
    card = binomial(total_coins + n_vertices - 1, n_vertices - 1)
    if card > max_configs:
        raise StateSpaceTooLarge(
            f"{card} configurations exceed the cap of {max_configs} "
            f"(n={n_vertices}, coins={total_coins})"
        )
    return ConfigSpace(
        n_vertices, total_coins, tuple(_compositions_lex(n_vertices, total_coins))
    )


@dataclass(frozen=True)
class TransitionMatrix:
    """One-step law of a model on an exhaustively enumerated state space."""

    model: ModelKind
    space: ConfigSpace
    edge_count: int
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.entries[i][i] for i in range(self.dim))


def transition_matrix(
    model: ModelKind,
    graph: Graph,
    total_coins: int,
    *,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> TransitionMatrix:
    """Assemble the exact transition matrix of ``model`` on ``graph``.

    Entry (i, j) sums, over the graph's edges, the kernel probability of
    turning configuration i into configuration j along that edge, divided
    by the edge count (each step picks an edge uniformly). All arithmetic
    is rational.
    """
    space = enumerate_configs(graph.n, total_coins, max_configs=max_configs)
    if space.card**2 > max_entries:
        raise StateSpaceTooLarge(
            f"{space.card}^2 matrix entries exceed the cap of {max_entries}"
        )
    per_edge = Fraction(1, graph.edge_count)
    index_of = space.index_of
    zero = Fraction(0)
    rows = [[zero] * space.card for _ in range(space.card)]
    for i, config in enumerate(space.configs):
        row = rows[i]
        scratch = list(config)
        for x, y in graph.edges:
            a, b = config[x], config[y]
            pool = a + b
            kernel = edge_kernel(model, a, b)
            for new_a, prob in enumerate(kernel.probs):
                scratch[x] = new_a
                scratch[y] = pool - new_a
                j = index_of(tuple(scratch))
                row[j] += prob * per_edge
            scratch[x] = a
            scratch[y] = b
    return TransitionMatrix(
        model, space, graph.edge_count, tuple(tuple(row) for row in rows)
    )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one exact structural check."""

    name: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def check_doubly_stochastic(tm: TransitionMatrix) -> CheckResult:
    """Pass iff the matrix is exactly symmetric (hence columns sum to 1 too)."""
    configs = tm.space.configs
    for i in range(tm.dim):
        row = tm.entries[i]
        for j in range(i + 1, tm.dim):
            if row[j] != tm.entries[j][i]:
                return CheckResult(
                    "doubly_stochastic",
                    False,
                    f"P[{configs[i]} -> {configs[j]}] = {row[j]} but "
                    f"P[{configs[j]} -> {configs[i]}] = {tm.entries[j][i]}",
                )
    return CheckResult("doubly_stochastic", True)


def check_detailed_balance(tm: TransitionMatrix, space: ConfigSpace) -> CheckResult:
    """Exact detailed balance under the product weight ``prod(coins + 1)``."""
    weights = [stationary_weight(cfg) for cfg in space.configs]
    for i in range(tm.dim):
        row = tm.entries[i]
        w_i = weights[i]
        for j in range(i + 1, tm.dim):
            if w_i * row[j] != weights[j] * tm.entries[j][i]:
                return CheckResult(
                    "detailed_balance",
                    False,
                    f"weight({space.configs[i]}) * P[i -> j] = {w_i * row[j]} but "
                    f"weight({space.configs[j]}) * P[j -> i] = {weights[j] * tm.entries[j][i]}",
                )
    return CheckResult("detailed_balance", True)


def check_irreducible_aperiodic(tm: TransitionMatrix) -> CheckResult:
    """Strong connectivity of the support graph plus a positive diagonal.

    A positive diagonal entry makes an irreducible chain aperiodic, so
    together these give ergodicity. The support is explored forward and
    backward from state 0.
    """
    support: list[list[int]] = [
        [j for j, value in enumerate(row) if value] for row in tm.entries
    ]
    reverse: list[list[int]] = [[] for _ in range(tm.dim)]
    for i, targets in enumerate(support):
        for j in targets:
            reverse[j].append(i)

    def reaches_all(adjacency: list[list[int]]) -> bool:
        seen = [False] * tm.dim
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == tm.dim

    if not reaches_all(support):
        return CheckResult(
            "irreducible_aperiodic", False, "state 0 does not reach every state"
        )
    if not reaches_all(reverse):
        return CheckResult(
            "irreducible_aperiodic", False, "not every state reaches state 0"
        )
    min_diag = min(tm.diagonal())
    if min_diag <= 0:
        return CheckResult(
            "irreducible_aperiodic", False, "a diagonal entry is zero"
        )
    return CheckResult(
        "irreducible_aperiodic", True, f"minimum self-transition {min_diag}"
    )


def stationary_solve(tm: TransitionMatrix) -> tuple[Fraction, ...]:
    """Exact stationary distribution of an irreducible transition matrix.

    Solves ``pi P = pi`` with the normalization ``sum(pi) = 1`` using
    Bareiss fraction-free elimination on an integerized system, which
    keeps intermediate values as plain integers instead of ever-growing
    fractions. Raises ValueError if the chain is not irreducible (the
    stationary vector would not be unique).
    """
    structure = check_irreducible_aperiodic(tm)
    if not structure.passed:
        raise ValueError(f"stationary vector is not unique: {structure.detail}")
    dim = tm.dim

    # Equations i < dim-1: sum_j pi_j (P[j][i] - delta_ij) = 0, scaled to
    # integers row by row; the last equation is the normalization.
    augmented: list[list] = []
    for i in range(dim - 1):
        column = [tm.entries[j][i] - (1 if j == i else 0) for j in range(dim)]
        scale = math.lcm(*(value.denominator for value in column))
        augmented.append([_mpz(int(value * scale)) for value in column] + [_mpz(0)])
    augmented.append([_mpz(1)] * dim + [_mpz(1)])

    previous_pivot = _mpz(1)
    for k in range(dim):
        pivot_row = next(
            (r for r in range(k, dim) if augmented[r][k] != 0), None
        )
        if pivot_row is None:
            raise ArithmeticError("singular linear system")
        if pivot_row != k:
            augmented[k], augmented[pivot_row] = augmented[pivot_row], augmented[k]
        pivot = augmented[k][k]
        row_k = augmented[k]
        for r in range(k + 1, dim):
            row_r = augmented[r]
            factor = row_r[k]
            for c in range(k + 1, dim + 1):
                row_r[c] = (pivot * row_r[c] - factor * row_k[c]) // previous_pivot
            row_r[k] = _mpz(0)
        previous_pivot = pivot

    solution = [Fraction(0)] * dim
    for i in range(dim - 1, -1, -1):
        acc = Fraction(int(augmented[i][dim]))
        row = augmented[i]
        for j in range(i + 1, dim):
            if row[j]:
                acc -= int(row[j]) * solution[j]
        solution[i] = acc / int(row[i])
    return tuple(solution)


def marginal_from_stationary(
    pi: Sequence[Fraction], space: ConfigSpace, vertex: int
) -> ExactMarginal:
    """Aggregate a stationary vector into one vertex's coin-count law."""
    if len(pi) != space.card:
        raise ValueError(f"vector length {len(pi)} does not match card {space.card}")
    if not 0 <= vertex < space.n_vertices:
        raise ValueError(f"vertex {vertex} out of range")
    total = sum(pi)
    if total != 1:
        raise ValueError(f"stationary vector sums to {total}, not 1")
    sums = [Fraction(0)] * (space.total_coins + 1)
    for config, mass in zip(space.configs, pi):
        sums[config[vertex]] += mass
    denominator = math.lcm(*(value.denominator for value in sums))
    numerators = [int(value * denominator) for value in sums]
    return ExactMarginal.from_exact(numerators, denominator)


# ---------------------------------------------------------------------------
# Verification driver


@dataclass(frozen=True)
class InstanceReport:
    """All checks for one (model, graph, coin total) instance."""

    model: str
    graph: str
    n_vertices: int
    total_coins: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "graph": self.graph,
            "n_vertices": self.n_vertices,
            "total_coins": self.total_coins,
            "passed": self.passed,
            "checks": [check.to_json_dict() for check in self.checks],
        }


@dataclass(frozen=True)
class VerificationReport:
    """Aggregated audit over a grid of models, graphs, and coin totals."""

    instances: tuple[InstanceReport, ...]
    cross_checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(instance.passed for instance in self.instances) and all(
            check.passed for check in self.cross_checks
        )

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "instances": [instance.to_json_dict() for instance in self.instances],
            "cross_checks": [check.to_json_dict() for check in self.cross_checks],
        }


def _check_fixed_point(tm: TransitionMatrix, pi: Sequence[Fraction]) -> CheckResult:
    for j in range(tm.dim):
        recomputed = sum(pi[i] * tm.entries[i][j] for i in range(tm.dim) if tm.entries[i][j])
        if recomputed != pi[j]:
            return CheckResult(
                "stationary_fixed_point",
                False,
                f"(pi P)[{j}] = {recomputed} but pi[{j}] = {pi[j]}",
            )
    return CheckResult("stationary_fixed_point", True)


def _check_row_sums(tm: TransitionMatrix) -> CheckResult:
    for i, row in enumerate(tm.entries):
        total = sum(row)
        if total != 1:
            return CheckResult("row_sums_exact", False, f"row {i} sums to {total}")
    return CheckResult("row_sums_exact", True)


def _check_uniform_stationary(pi: Sequence[Fraction]) -> CheckResult:
    expected = Fraction(1, len(pi))
    for i, value in enumerate(pi):
        if value != expected:
            return CheckResult(
                "uniform_stationary", False, f"pi[{i}] = {value}, expected {expected}"
            )
    return CheckResult("uniform_stationary", True)


def _check_weighted_stationary(
    pi: Sequence[Fraction], space: ConfigSpace
) -> CheckResult:
    weights = [stationary_weight(cfg) for cfg in space.configs]
    mass = sum(weights)
    for i, value in enumerate(pi):
        if value != Fraction(weights[i], mass):
            return CheckResult(
                "stationary_matches_weights",
                False,
                f"pi[{i}] = {value}, expected {weights[i]}/{mass}",
            )
    return CheckResult("stationary_matches_weights", True)


def _check_diagonal_bound(tm: TransitionMatrix) -> CheckResult:
    bound = Fraction(1, tm.edge_count * (tm.space.total_coins + 1))
    worst = min(tm.diagonal())
    if worst < bound:
        return CheckResult(
            "diagonal_lower_bound", False, f"min diagonal {worst} below bound {bound}"
        )
    return CheckResult(
        "diagonal_lower_bound", True, f"min diagonal {worst} >= bound {bound}"
    )


def _check_marginals(
    tm: TransitionMatrix, pi: Sequence[Fraction]
) -> CheckResult:
    space = tm.space
    closed_form = exact_marginal(tm.model, space.n_vertices, space.total_coins)
    for vertex in range(space.n_vertices):
        aggregated = marginal_from_stationary(pi, space, vertex)
        if aggregated != closed_form:
            return CheckResult(
                "marginal_matches_closed_form",
                False,
                f"vertex {vertex}: enumerated marginal differs from closed form",
            )
    return CheckResult("marginal_matches_closed_form", True)


def run_verification(
    models: Iterable[ModelKind],
    graph_families: Iterable[str],
    n_values: Iterable[int],
    m_values: Iterable[int],
    *,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> VerificationReport:
    """Run every exact structural check over a grid of small instances.

    For each (model, family, n, m): row sums, ergodicity, and the
    closed-form marginal at every vertex; double stochasticity with a
    uniform stationary vector and the self-transition lower bound for
    reshuffle; detailed balance and the product-weight stationary vector
    for exchange and saving. Cross checks confirm that exchange and
    saving share their stationary vector while their matrices differ
    somewhere. Matrices for coinciding graphs (a 3-cycle is the complete
    graph on 3 vertices) are solved once and shared.
    """
    models = list(models)
    graph_families = list(graph_families)
    n_values = list(n_values)
    m_values = list(m_values)

    solved: dict[tuple, tuple[TransitionMatrix, tuple[Fraction, ...]]] = {}

    def solve(model: ModelKind, graph: Graph, coins: int):
        key = (model, graph.edges, coins)
        if key not in solved:
            tm = transition_matrix(
                model, graph, coins, max_configs=max_configs, max_entries=max_entries
            )
            solved[key] = (tm, stationary_solve(tm))
        return solved[key]

    instances: list[InstanceReport] = []
    shared_stationary = True
    shared_detail = ""
    kernels_differ = False

    for family in graph_families:
        for n in n_values:
            graph = build(family, n)
            for m in m_values:
                per_model: dict[ModelKind, tuple] = {}
                for model in models:
                    tm, pi = solve(model, graph, m)
                    per_model[model] = (tm, pi)
                    checks = [
                        _check_row_sums(tm),
                        check_irreducible_aperiodic(tm),
                        _check_fixed_point(tm, pi),
                    ]
                    if model is ModelKind.RESHUFFLE:
                        checks.append(check_doubly_stochastic(tm))
                        checks.append(_check_uniform_stationary(pi))
                        checks.append(_check_diagonal_bound(tm))
                    else:
                        checks.append(check_detailed_balance(tm, tm.space))
                        checks.append(_check_weighted_stationary(pi, tm.space))
                    checks.append(_check_marginals(tm, pi))
                    instances.append(
                        InstanceReport(
                            model.value, family, n, m, tuple(checks)
                        )
                    )
                if ModelKind.EXCHANGE in per_model and ModelKind.SAVING in per_model:
                    tm_ex, pi_ex = per_model[ModelKind.EXCHANGE]
                    tm_sv, pi_sv = per_model[ModelKind.SAVING]
                    if pi_ex != pi_sv:
                        shared_stationary = False
                        shared_detail = f"{family} n={n} m={m}"
                    if tm_ex.entries != tm_sv.entries:
                        kernels_differ = True

    cross_checks = []
    if ModelKind.EXCHANGE in models and ModelKind.SAVING in models:
        cross_checks.append(
            CheckResult(
                "exchange_saving_share_stationary",
                shared_stationary,
                shared_detail if not shared_stationary else "",
            )
        )
        cross_checks.append(
            CheckResult(
                "exchange_saving_kernels_differ",
                kernels_differ,
                "" if kernels_differ else "matrices agree on every instance",
            )
        )
    return VerificationReport(tuple(instances), tuple(cross_checks))
