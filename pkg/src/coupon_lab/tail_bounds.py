"""Completion-tail guarantee: threshold, exponential bound, and its inversion.

Buying ``ceil(n ln n + c n)`` stickers leaves the album incomplete with
probability at most ``e^(-c)``.  The union-bound quantity
``n (1 - 1/n)^threshold`` sits between the exact tail and ``e^(-c)`` and
is exposed so the whole chain of inequalities can be checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidInstanceError, InvalidProbabilityError


@dataclass(frozen=True)
class BoundQuery:
    """Album size ``n`` and slack parameter ``c > 0``."""

    n: int
    c: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInstanceError(f"album size must be at least 1, got {self.n}")
        if not self.c > 0.0:
            raise InvalidInstanceError(f"slack parameter c must be positive, got {self.c}")


@dataclass(frozen=True)
class BoundResult:
    """Threshold purchase count with its exponential and union bounds."""

    threshold_t: int
    bound: float
    union_bound: float

    def __post_init__(self) -> None:
        if self.union_bound > self.bound:
            raise InvalidInstanceError(
                f"union bound {self.union_bound} exceeds exponential bound {self.bound}"
            )


class ConvergencePoint(NamedTuple):
    value: float
    limit_gap: float


def threshold(query: BoundQuery) -> int:
    """Purchase count ``ceil(n ln n + c n)``.

    Ceiling here means the smallest integer *strictly* greater than the
    argument, i.e. ``floor(x) + 1``; for non-integer arguments this is the
    usual ceiling.
    """
    value = query.n * math.log(query.n) + query.c * query.n
    return math.floor(value) + 1


def tail_bound(query: BoundQuery) -> BoundResult:
    """Exponential bound ``e^(-c)`` on the tail at the threshold, plus the union bound.

    The union bound ``n (1 - 1/n)^t`` is evaluated in log form,
    ``exp(ln n + t log1p(-1/n))``, so it cannot underflow at large ``t``.
    """
    t = threshold(query)
    bound = math.exp(-query.c)
    if query.n == 1:
        # The single sticker is certainly bought within t >= 1 purchases.
        union_bound = 0.0
    else:
        union_bound = math.exp(math.log(query.n) + t * math.log1p(-1.0 / query.n))
    return BoundResult(threshold_t=t, bound=bound, union_bound=union_bound)


def invert_confidence(n: int, failure_prob: float) -> BoundQuery:
    """Slack parameter whose bound equals ``failure_prob``: c = -ln(failure_prob)."""
    if not 0.0 < failure_prob < 1.0:
        raise InvalidProbabilityError(
            f"failure probability must be in (0, 1), got {failure_prob}"
        )
    return BoundQuery(n=n, c=-math.log(failure_prob))


def monotone_convergence_check(n: int) -> ConvergencePoint:
    """Evaluate ``(1 - 1/n)^n`` and its gap below the limit ``e^(-1)``.

    The sequence increases strictly toward ``e^(-1)`` from below; the gap
    is therefore positive and shrinks as ``n`` grows.
    """
    if n < 2:
        raise InvalidInstanceError(f"need n >= 2, got {n}")
    value = math.exp(n * math.log1p(-1.0 / n))
    return ConvergencePoint(value=value, limit_gap=math.exp(-1.0) - value)
