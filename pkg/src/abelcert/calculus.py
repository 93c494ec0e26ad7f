"""Exact arithmetic behind the search depth and the final exponent bound.

Every constant is derived from the uniform image length ``ell`` of the
morphism (13 by default): a factor straddles at most ``2 * (ell - 1)``
letters of partial blocks, which gives the 24, 72 and 3 of the argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rational import parse_fraction

ELL = 13
SEED_LENGTH = 11
DEFAULT_DEPTH = 5


def slack(ell: int = ELL) -> int:
    """Letters a factor can spend in partial blocks at its two ends."""
    return 2 * (ell - 1)


def g_apply(x: int, ell: int = ELL) -> int:
    """Length bound on a preimage: ``floor((x + 2(ell-1)) / ell)``."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if x < 0:
        raise ValueError("x must be nonnegative")
    return (x + slack(ell)) // ell


def g_iterate(x: int, t: int, ell: int = ELL) -> int:
    for _ in range(t):
        x = g_apply(x, ell)
    return x


@dataclass(frozen=True)
class DepthResult:
    length: int
    t_min: int
    iterates: tuple[int, ...]
    prefix_length: int
    ell: int = ELL
    seed_length: int = SEED_LENGTH

    def is_valid(self, t: int) -> bool:
        """Whether ``t`` iterations already bring the length down to 2."""
        return g_iterate(self.length, t, self.ell) <= 2

    def prefix_length_at(self, t: int) -> int:
        return self.ell ** t * self.seed_length


def depth(L: int, ell: int = ELL, seed_length: int = SEED_LENGTH) -> DepthResult:
    if L < 1:
        raise ValueError("length must be positive")
    iterates = [L]
    while iterates[-1] > 2:
        nxt = g_apply(iterates[-1], ell)
        if nxt >= iterates[-1]:
            raise ValueError(f"g does not shrink {iterates[-1]} for ell={ell}")
        iterates.append(nxt)
    t = len(iterates) - 1
    return DepthResult(L, t, tuple(iterates), ell ** t * seed_length, ell, seed_length)


def search_depth(L: int, ell: int = ELL, minimum: int = DEFAULT_DEPTH, strict: bool = False) -> int:
    """Iteration depth used by the pipeline: ``t_min`` or at least ``minimum``."""
    t = depth(L, ell).t_min
    return t if strict else max(t, minimum)


def length_cap(threshold, max_x1: int) -> int:
    """Strict upper bound ``U`` on ``|X1 Y X2|`` for powers with exponent above
    ``threshold`` and ``|X1| <= max_x1``."""
    c = parse_fraction(threshold)
    if not 1 < c < 2:
        raise ValueError(f"threshold must lie in (1, 2), got {c}")
    if max_x1 < 1:
        raise ValueError("max_x1 must be positive")
    return math.ceil(c * max_x1 / (c - 1))


def simplify_bound_term(n, ell: int = ELL) -> Fraction:
    """Closed form of ``k / (1 - r)``: ``3 ell / ((ell - 1) n - 1)``."""
    n = parse_fraction(n)
    denom = (ell - 1) * n - 1
    if denom <= 0:
        raise ValueError(f"(ell-1)*n - 1 must be positive, got {denom}")
    closed = Fraction(3 * ell) / denom
    if n > 1:
        k, r = geometric_parameters(n, ell)
        assert k / (1 - r) == closed, (k, r, closed)
    return closed


def geometric_parameters(n, ell: int = ELL) -> tuple[Fraction, Fraction]:
    """``(k, r)`` with ``k = 3/n`` and ``r = (n+1)/(ell n)``."""
    n = parse_fraction(n)
    return Fraction(3) / n, (n + 1) / (ell * n)


@dataclass(frozen=True)
class BoundInputs:
    n: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n", parse_fraction(self.n))
        object.__setattr__(self, "c", parse_fraction(self.c))
        if self.n <= 1:
            raise ValueError(f"n must exceed 1, got {self.n}")


def bound(inputs: BoundInputs, ell: int = ELL) -> Fraction:
    """``c + k / (1 - r)``, computed from ``k`` and ``r`` directly."""
    k, r = geometric_parameters(inputs.n, ell)
    value = inputs.c + k / (1 - r)
    assert value == inputs.c + simplify_bound_term(inputs.n, ell)
    return value


def descent_ratio(n, ell: int = ELL) -> Fraction:
    """``ell n / (n + 1)``: the factor by which ``|X1 Y|`` shrinks per descent."""
    n = parse_fraction(n)
    return ell * n / (n + 1)


def loss_numerator(ell: int = ELL) -> int:
    """The 72 in ``72 / |X1 Y|`` for ``ell = 13``."""
    return 3 * slack(ell)


def decimal(x: Fraction, places: int = 6) -> str:
    """Round-half-even decimal rendering done in exact arithmetic."""
    scaled = round(x * 10 ** places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 10 ** places}.{scaled % 10 ** places:0{places}d}"
