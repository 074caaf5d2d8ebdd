"""Closed-form marginals and the combinatorial identities they rest on."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from moneychains import (
    ExactMarginal,
    ModelKind,
    asymptotic_density,
    binomial,
    enumerate_configs,
    exact_marginal,
    lambda_mass,
    s_identity,
    stationary_weight,
)
from moneychains.exact import EXACT_SIZE_LIMIT

MODELS = list(ModelKind)


# ---------------------------------------------------------------------------
# binomial / s_identity / weights / lambda


def test_binomial_matches_math_comb_in_range():
    for n in range(12):
        for k in range(n + 1):
            assert binomial(n, k) == math.comb(n, k)


def test_binomial_is_zero_out_of_range():
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    assert binomial(0, 0) == 1
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_s_identity_frozen_value():
    # c = 0, 1, 2 of (c+1) * C(2-c+1, 1): 3 + 4 + 3.
    assert s_identity(2, 1) == 10


def test_s_identity_equals_closed_form():
    # The sum is computed term by term; the closed form is the claim.
    for total in range(41):
        for order in range(41):
            assert s_identity(total, order) == binomial(total + order + 2, order + 2)


def test_s_identity_validation():
    with pytest.raises(ValueError):
        s_identity(-1, 3)
    with pytest.raises(ValueError):
        s_identity(3, -1)


def test_stationary_weight():
    assert stationary_weight((2, 1, 0)) == 6
    assert stationary_weight((0, 0, 0, 0)) == 1
    assert stationary_weight([5]) == 6
    with pytest.raises(ValueError):
        stationary_weight((1, -2))


def test_lambda_mass_frozen_and_brute_force():
    assert lambda_mass(2, 2) == 10
    # Brute force: sum the product weight over every configuration.
    for n in range(1, 5):
        for m in range(13):
            space = enumerate_configs(n, m)
            assert lambda_mass(n, m) == sum(
                stationary_weight(cfg) for cfg in space.configs
            )


def test_lambda_mass_validation():
    with pytest.raises(ValueError):
        lambda_mass(0, 5)
    with pytest.raises(ValueError):
        lambda_mass(3, -1)


# ---------------------------------------------------------------------------
# exact_marginal


def test_reshuffle_marginal_frozen():
    marginal = exact_marginal(ModelKind.RESHUFFLE, 3, 2)
    assert marginal.probs() == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))


def test_exchange_marginal_frozen():
    marginal = exact_marginal(ModelKind.EXCHANGE, 2, 2)
    assert marginal.probs() == (Fraction(3, 10), Fraction(2, 5), Fraction(3, 10))
    # Saving shares the law exactly.
    assert marginal == exact_marginal(ModelKind.SAVING, 2, 2)


def test_marginal_closed_forms_elementwise():
    # Spot the explicit binomial ratios rather than the recurrence.
    n, m = 5, 9
    reshuffle = exact_marginal(ModelKind.RESHUFFLE, n, m)
    for c in range(m + 1):
        assert reshuffle.prob(c) == Fraction(
            binomial(m - c + n - 2, n - 2), binomial(m + n - 1, n - 1)
        )
    weighted = exact_marginal(ModelKind.SAVING, n, m)
    for c in range(m + 1):
        assert weighted.prob(c) == Fraction(
            (c + 1) * binomial(m - c + 2 * n - 3, 2 * n - 3),
            binomial(m + 2 * n - 1, 2 * n - 1),
        )


@pytest.mark.parametrize("model", MODELS)
def test_marginal_sums_to_one_exactly(model):
    for n in range(2, 7):
        for m in range(31):
            marginal = exact_marginal(model, n, m)
            assert sum(marginal.probs()) == 1
            assert all(p > 0 for p in marginal.probs())


def test_reshuffle_two_vertices_is_uniform():
    marginal = exact_marginal(ModelKind.RESHUFFLE, 2, 7)
    assert set(marginal.probs()) == {Fraction(1, 8)}


def test_reshuffle_marginal_strictly_decreasing_from_three_vertices():
    probs = exact_marginal(ModelKind.RESHUFFLE, 4, 12).probs()
    assert all(probs[c] > probs[c + 1] for c in range(12))


def test_weighted_marginal_vanishing_slope_at_zero():
    # The gamma-shaped law starts at (c+1) = 1 times the largest binomial:
    # mass rises from c=0 before the binomial decay wins.
    probs = exact_marginal(ModelKind.EXCHANGE, 5, 20).probs()
    assert probs[1] > probs[0]
    assert probs[20] < probs[0]


def test_marginal_validation():
    with pytest.raises(ValueError):
        exact_marginal(ModelKind.RESHUFFLE, 1, 5)
    with pytest.raises(ValueError):
        exact_marginal(ModelKind.RESHUFFLE, 3, -1)


def test_marginal_zero_coins_degenerate():
    marginal = exact_marginal(ModelKind.SAVING, 4, 0)
    assert marginal.probs() == (Fraction(1),)


# ---------------------------------------------------------------------------
# ExactMarginal semantics


def test_equality_ignores_representation():
    assert ExactMarginal.from_exact((1, 1), 2) == ExactMarginal.from_exact((2, 2), 4)
    assert ExactMarginal.from_exact((1, 1), 2) != ExactMarginal.from_exact((1, 3), 4)
    assert ExactMarginal.from_exact((1,), 1) != ExactMarginal.from_exact((1, 1), 2)


def test_float_rendering_matches_fractions():
    marginal = exact_marginal(ModelKind.EXCHANGE, 3, 17)
    floats = marginal.probs_float()
    assert len(floats) == 18
    for c in (0, 5, 17):
        assert floats[c] == pytest.approx(float(marginal.prob(c)), rel=1e-15)
    assert marginal.prob_float(5) == floats[5]


def test_loggamma_fallback_matches_exact_route():
    # Force the fallback at a size where the exact route still works and
    # compare elementwise; the documented bound is 1e-12 relative error.
    for model in MODELS:
        exact = exact_marginal(model, 5, 60)
        approx = exact_marginal(model, 5, 60, exact_size_limit=10)
        assert not approx.is_exact and exact.is_exact
        for p, q in zip(exact.probs_float(), approx.probs_float()):
            assert q == pytest.approx(p, rel=1e-12)
        with pytest.raises(ValueError, match="float mode"):
            approx.prob(0)


def test_default_size_limit_keeps_exact_mode():
    assert exact_marginal(ModelKind.RESHUFFLE, 2, 100).is_exact
    assert EXACT_SIZE_LIMIT == 1_000_000


# ---------------------------------------------------------------------------
# Asymptotic densities


def test_asymptotic_density_frozen_values():
    assert asymptotic_density(ModelKind.EXCHANGE, 50, 100.0) == pytest.approx(
        0.007357588823428847, rel=1e-15
    )
    assert asymptotic_density(ModelKind.SAVING, 50, 100.0) == asymptotic_density(
        ModelKind.EXCHANGE, 50, 100.0
    )
    assert asymptotic_density(ModelKind.RESHUFFLE, 0, 4.0) == pytest.approx(0.25)
    assert asymptotic_density(ModelKind.EXCHANGE, 0, 4.0) == 0.0


def test_asymptotic_density_validation():
    with pytest.raises(ValueError):
        asymptotic_density(ModelKind.RESHUFFLE, -1, 4.0)
    with pytest.raises(ValueError):
        asymptotic_density(ModelKind.RESHUFFLE, 2, 0.0)


@given(
    model=st.sampled_from(MODELS),
    n=st.integers(min_value=2, max_value=6),
    m=st.integers(min_value=0, max_value=40),
)
def test_marginal_shape_properties(model, n, m):
    marginal = exact_marginal(model, n, m)
    assert marginal.total_coins == m
    assert len(marginal) == m + 1
    assert sum(marginal.probs()) == 1
