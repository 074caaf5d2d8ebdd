"""Closed-form stationary laws and the combinatorial identities behind them.

For ``n`` vertices sharing ``M`` coins, the stationary distribution of a
single vertex's coin count has an exact hypergeometric-style form:

* reshuffle: ``P(c) = C(M - c + n - 2, n - 2) / C(M + n - 1, n - 1)``,
  approaching the exponential density ``exp(-c/T) / T`` at temperature
  ``T = M / n`` as the system grows.
* exchange and saving: ``P(c) = (c + 1) * C(M - c + 2n - 3, 2n - 3)
  / C(M + 2n - 1, 2n - 1)``, approaching the gamma density
  ``4c exp(-2c/T) / T^2``.

Both laws arise from stationary measures that factor over vertices: the
reshuffle chain is uniform over configurations, while exchange and saving
weight each configuration by the product of ``coins + 1`` over vertices
(:func:`stationary_weight`). The summation identity :func:`s_identity`
and the total mass :func:`lambda_mass` are kept as independent
computations so tests can confront them with brute-force enumeration.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .dynamics import ModelKind

__all__ = [
    "ExactMarginal",
    "EXACT_SIZE_LIMIT",
    "asymptotic_density",
    "binomial",
    "exact_marginal",
    "lambda_mass",
    "s_identity",
    "stationary_weight",
]

# Above this value of M + 2n the exact integer recurrences give way to
# arbitrary-precision log-gamma evaluation: the numerators themselves stay
# cheap, but holding M of them in memory does not.
EXACT_SIZE_LIMIT = 1_000_000


def binomial(n: int, k: int) -> int:
    """Binomial coefficient that is 0 outside ``0 <= k <= n``.

    The convention matters: marginal numerators hit ``k > n`` at the top
    coin count and several identities index past their natural range.
    """
    if n < 0:
        raise ValueError(f"binomial needs nonnegative n, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def s_identity(total: int, order: int) -> int:
    """Weighted tail sum ``sum((c + 1) * C(total - c + order, order))`` over c.

    Computed by direct summation on purpose; the closed form
    ``C(total + order + 2, order + 2)`` is what tests check it against.
    """
    if total < 0 or order < 0:
        raise ValueError(f"s_identity needs nonnegative arguments, got ({total}, {order})")
    return sum((c + 1) * binomial(total - c + order, order) for c in range(total + 1))


def stationary_weight(coins: Iterable[int]) -> int:
    """Product of ``count + 1`` over vertices: the unnormalized stationary mass.

    Exchange and saving both leave this weight invariant; dividing by
    :func:`lambda_mass` turns it into a probability.
    """
    weight = 1
    for value in coins:
        if value < 0:
            raise ValueError(f"coin counts must be nonnegative, got {value}")
        weight *= value + 1
    return weight


def lambda_mass(n_vertices: int, total_coins: int) -> int:
    """Total stationary weight over all ways to spread the coins.

    Equals ``C(total_coins + 2 * n_vertices - 1, 2 * n_vertices - 1)``;
    tests confirm the closed form against summing
    :func:`stationary_weight` over an exhaustive enumeration.
    """
    if n_vertices < 1:
        raise ValueError(f"need at least one vertex, got {n_vertices}")
    if total_coins < 0:
        raise ValueError(f"total coins must be nonnegative, got {total_coins}")
    return binomial(total_coins + 2 * n_vertices - 1, 2 * n_vertices - 1)


class ExactMarginal:
    """Stationary law of one vertex's coin count, exact where possible.

    Probabilities are stored as integer numerators over one shared
    denominator, so equality tests, sums, and tail masses are exact.
    Instances built through the log-gamma fallback (very large systems)
    carry floats only and refuse rational queries.
    """

    def __init__(
        self,
        total_coins: int,
        numerators: tuple[int, ...] | None,
        denominator: int | None,
        floats: tuple[float, ...] | None = None,
    ) -> None:
        self.total_coins = total_coins
        self._numerators = numerators
        self._denominator = denominator
        self._floats = floats
        if numerators is not None:
            assert denominator is not None and denominator > 0
            assert len(numerators) == total_coins + 1
            assert sum(numerators) == denominator
        else:
            assert floats is not None and len(floats) == total_coins + 1

    @classmethod
    def from_exact(cls, numerators: Iterable[int], denominator: int) -> ExactMarginal:
        nums = tuple(numerators)
        return cls(len(nums) - 1, nums, denominator)

    @classmethod
    def from_floats(cls, floats: Iterable[float]) -> ExactMarginal:
        values = tuple(floats)
        return cls(len(values) - 1, None, None, values)

    @property
    def is_exact(self) -> bool:
        return self._numerators is not None

    def __len__(self) -> int:
        return self.total_coins + 1

    def __repr__(self) -> str:
        kind = "exact" if self.is_exact else "float"
        return f"ExactMarginal(total_coins={self.total_coins}, {kind})"

    def prob(self, c: int) -> Fraction:
        """Exact stationary probability of holding ``c`` coins."""
        if self._numerators is None:
            raise ValueError("this marginal was built in float mode; use prob_float")
        return Fraction(self._numerators[c], self._denominator)

    def probs(self) -> tuple[Fraction, ...]:
        return tuple(self.prob(c) for c in range(len(self)))

    def prob_float(self, c: int) -> float:
        return self.probs_float()[c]

    def probs_float(self) -> tuple[float, ...]:
        """All probabilities as floats (correctly rounded in exact mode)."""
        if self._floats is None:
            den = self._denominator
            self._floats = tuple(num / den for num in self._numerators)
        return self._floats

    def __eq__(self, other: object) -> bool:
        """Mathematical equality of the two laws (exact mode only)."""
        if not isinstance(other, ExactMarginal):
            return NotImplemented
        if not (self.is_exact and other.is_exact):
            return NotImplemented
        if self.total_coins != other.total_coins:
            return False
        d_self, d_other = self._denominator, other._denominator
        return all(
            a * d_other == b * d_self
            for a, b in zip(self._numerators, other._numerators)
        )

    __hash__ = None  # mutable float cache; equality is by value


def exact_marginal(
    model: ModelKind,
    n_vertices: int,
    total_coins: int,
    *,
    exact_size_limit: int = EXACT_SIZE_LIMIT,
) -> ExactMarginal:
    """Stationary single-vertex law for the given model and system size.

    Uses exact integer recurrences for the binomial numerators: each term
    follows from the previous by one multiply and one exact divide, so no
    floating point enters. Beyond ``exact_size_limit`` (measured as
    ``total_coins + 2 * n_vertices``) the marginal is instead evaluated
    with 40-digit log-gamma arithmetic, giving floats whose relative
    error is far below 1e-12.
    """
    if n_vertices < 2:
        raise ValueError(f"the marginal needs at least 2 vertices, got {n_vertices}")
    if total_coins < 0:
        raise ValueError(f"total coins must be nonnegative, got {total_coins}")
    if total_coins + 2 * n_vertices > exact_size_limit:
        return _marginal_loggamma(model, n_vertices, total_coins)

    if model is ModelKind.RESHUFFLE:
        order = n_vertices - 2
        denominator = binomial(total_coins + n_vertices - 1, n_vertices - 1)
        weighted = False
    else:
        order = 2 * n_vertices - 3
        denominator = binomial(total_coins + 2 * n_vertices - 1, 2 * n_vertices - 1)
        weighted = True

    numerators = []
    base = binomial(total_coins + order, order)
    for c in range(total_coins + 1):
        numerators.append((c + 1) * base if weighted else base)
        remaining = total_coins - c
        if remaining > 0:
            # C(remaining - 1 + order, order) from C(remaining + order, order).
            base = base * remaining // (remaining + order)
    return ExactMarginal.from_exact(numerators, denominator)


def _marginal_loggamma(model: ModelKind, n_vertices: int, total_coins: int) -> ExactMarginal:
    import mpmath

    order = n_vertices - 2 if model is ModelKind.RESHUFFLE else 2 * n_vertices - 3
    weighted = model is not ModelKind.RESHUFFLE
    with mpmath.workdps(40):

        def log_binomial(n: int, k: int) -> mpmath.mpf:
            return (
                mpmath.loggamma(n + 1)
                - mpmath.loggamma(k + 1)
                - mpmath.loggamma(n - k + 1)
            )

        log_den = log_binomial(
            total_coins + order + 2, order + 2
        ) if weighted else log_binomial(total_coins + n_vertices - 1, n_vertices - 1)
        floats = []
        for c in range(total_coins + 1):
            log_num = log_binomial(total_coins - c + order, order)
            if weighted:
                log_num += mpmath.log(c + 1)
            floats.append(float(mpmath.exp(log_num - log_den)))
    return ExactMarginal.from_floats(floats)


def asymptotic_density(model: ModelKind, c: int, temperature: float) -> float:
    """Large-system limit density at coin count ``c``.

    Exponential at rate ``1 / temperature`` for reshuffle; a rate-2 gamma
    profile ``4c exp(-2c/T) / T^2`` for exchange and saving.
    """
    if c < 0:
        raise ValueError(f"coin count must be nonnegative, got {c}")
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if model is ModelKind.RESHUFFLE:
        return math.exp(-c / temperature) / temperature
    return 4.0 * c * math.exp(-2.0 * c / temperature) / temperature**2
