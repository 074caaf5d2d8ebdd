"""Per-edge coin exchange rules: samplers for simulation, exact kernels for audit.

Each update picks an edge (x, y) and replaces the coin pair (a, b) held by
its endpoints with a new pair that keeps the sum a + b fixed:

* ``reshuffle``: redistribute the pool in one throw. Draw U uniform on
  {0..a+b}; x gets U, y gets a + b - U.
* ``exchange``: both endpoints hand over an independent uniform cut.
  Draw U1 uniform on {0..a} and U2 uniform on {0..b}; x gets
  a - U1 + U2, y gets b - U2 + U1. The pair total is conserved by
  construction.
* ``saving``: both endpoints set aside a uniform reserve and reshuffle
  the rest. Draw Cx uniform on {0..a}, Cy uniform on {0..b}, then U
  uniform on {0..a+b-Cx-Cy}; x gets Cx + U, y gets a + b - Cx - U.

The sampled path (:func:`apply_step`) and the exact kernel
(:func:`edge_kernel`) are written independently on purpose: the kernel is
the audit oracle for the sampler, so neither is derived from the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rng import RngStream, derive_seed

__all__ = [
    "EdgeKernel",
    "ModelKind",
    "MoneyConfig",
    "RngStream",
    "apply_step",
    "derive_seed",
    "edge_kernel",
    "self_transition_probability",
]


class ModelKind(enum.Enum):
    """The three conservative exchange rules."""

    RESHUFFLE = "reshuffle"
    EXCHANGE = "exchange"
    SAVING = "saving"

    @classmethod
    def parse(cls, text: str) -> ModelKind:
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(kind.value for kind in cls)
            raise ValueError(f"unknown model {text!r}; expected one of: {names}") from None


@dataclass(frozen=True)
class MoneyConfig:
    """An assignment of coins to vertices; the total is conserved by every step."""

    coins: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coins:
            raise ValueError("a money configuration needs at least one vertex")
        for vertex, value in enumerate(self.coins):
            if not isinstance(value, int) or value < 0:
                raise ValueError(
                    f"coin counts must be nonnegative integers; vertex {vertex} has {value!r}"
                )

    @property
    def total(self) -> int:
        return sum(self.coins)

    @property
    def n_vertices(self) -> int:
        return len(self.coins)

    def __iter__(self):
        return iter(self.coins)

    def __getitem__(self, vertex: int) -> int:
        return self.coins[vertex]


@dataclass(frozen=True)
class EdgeKernel:
    """Exact one-step law of an endpoint's new coin count.

    ``probs[k]`` is the probability that the first endpoint of the edge
    ends the step holding ``k`` coins, for ``k`` in ``0..pool``; the other
    endpoint holds the rest. Probabilities are exact rationals summing
    to 1.
    """

    pool: int
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        assert len(self.probs) == self.pool + 1
        assert sum(self.probs) == 1


@lru_cache(maxsize=None)
def edge_kernel(model: ModelKind, a: int, b: int) -> EdgeKernel:
    """Exact distribution of x's new count when x holds ``a`` and y holds ``b``.

    Counts lattice points for the reshuffle and exchange rules and
    aggregates the conditional uniform law over reserves for the saving
    rule. Results are cached; the verification oracle asks for the same
    small pools many times.
    """
    if a < 0 or b < 0:
        raise ValueError(f"coin counts must be nonnegative, got a={a}, b={b}")
    pool = a + b

    if model is ModelKind.RESHUFFLE:
        share = Fraction(1, pool + 1)
        return EdgeKernel(pool, tuple(share for _ in range(pool + 1)))

    if model is ModelKind.EXCHANGE:
        # x' = a - U1 + U2 with U1 uniform on {0..a}, U2 uniform on {0..b}.
        # The number of (U1, U2) pairs mapping to x' = k is the length of
        # the U1 interval [max(0, a-k), min(a, pool-k)].
        denom = (a + 1) * (b + 1)
        probs = []
        for k in range(pool + 1):
            low = max(0, a - k)
            high = min(a, pool - k)
            probs.append(Fraction(high - low + 1, denom))
        return EdgeKernel(pool, tuple(probs))

    if model is ModelKind.SAVING:
        # Condition on the reserves (Cx, Cy): the remainder is reshuffled
        # uniformly, so x' = Cx + U is uniform on {Cx .. pool - Cy}.
        weights = [Fraction(0) for _ in range(pool + 1)]
        outer = Fraction(1, (a + 1) * (b + 1))
        for cx in range(a + 1):
            for cy in range(b + 1):
                width = pool - cx - cy + 1
                inner = outer / width
                for k in range(cx, pool - cy + 1):
                    weights[k] += inner
        return EdgeKernel(pool, tuple(weights))

    raise ValueError(f"unknown model {model!r}")


def apply_step(
    model: ModelKind,
    config: MoneyConfig,
    edge: tuple[int, int],
    rng: RngStream,
) -> MoneyConfig:
    """Apply one exchange step along ``edge`` and return the new configuration.

    The draw order is fixed per model (reshuffle: U; exchange: U1 then U2;
    saving: Cx, Cy, then U) so a given seed yields one well-defined
    trajectory. Degenerate draws over ``{0}`` still occupy their slot in
    the sequence.
    """
    x, y = edge
    if x == y:
        raise ValueError(f"edge endpoints must differ, got ({x}, {y})")
    n = config.n_vertices
    if not (0 <= x < n and 0 <= y < n):
        raise ValueError(f"edge ({x}, {y}) out of range for {n} vertices")

    a = config.coins[x]
    b = config.coins[y]
    if model is ModelKind.RESHUFFLE:
        u = rng.uniform_int_inclusive(a + b)
        new_x, new_y = u, a + b - u
    elif model is ModelKind.EXCHANGE:
        u1 = rng.uniform_int_inclusive(a)
        u2 = rng.uniform_int_inclusive(b)
        new_x, new_y = a - u1 + u2, b - u2 + u1
    elif model is ModelKind.SAVING:
        cx = rng.uniform_int_inclusive(a)
        cy = rng.uniform_int_inclusive(b)
        u = rng.uniform_int_inclusive(a + b - cx - cy)
        new_x, new_y = cx + u, a + b - cx - u
    else:
        raise ValueError(f"unknown model {model!r}")

    coins = list(config.coins)
    coins[x] = new_x
    coins[y] = new_y
    return MoneyConfig(tuple(coins))


def self_transition_probability(model: ModelKind, a: int, b: int) -> Fraction:
    """Exact probability that a step along an edge holding (a, b) changes nothing.

    Closed forms exist for the first two rules: ``1 / (a + b + 1)`` for
    reshuffle and ``min(a + 1, b + 1) / ((a + 1)(b + 1))`` for exchange
    (the stay-put pairs are those with U1 = U2). The saving rule has no
    comparably simple form, so its kernel mass at ``a`` is returned.
    """
    if a < 0 or b < 0:
        raise ValueError(f"coin counts must be nonnegative, got a={a}, b={b}")
    if model is ModelKind.RESHUFFLE:
        return Fraction(1, a + b + 1)
    if model is ModelKind.EXCHANGE:
        return Fraction(min(a + 1, b + 1), (a + 1) * (b + 1))
    if model is ModelKind.SAVING:
        return edge_kernel(model, a, b).probs[a]
    raise ValueError(f"unknown model {model!r}")
