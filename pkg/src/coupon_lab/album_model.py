"""Problem instance and the one-purchase transition structure of the collecting chain.

A collector buys stickers one at a time for an album of ``n`` distinct
stickers, every sticker equally likely.  The number of distinct stickers
already pasted is a Markov chain on ``{0, ..., n}`` whose only moves are
"stay" (duplicate) and "advance by one" (new sticker); state ``n`` is
absorbing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInstanceError, InvalidStateError

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AlbumSpec:
    """An album of ``n`` distinct stickers, each costing ``price_cents``."""

    n: int
    price_cents: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInstanceError(f"album size must be at least 1, got {self.n}")
        if self.price_cents < 0:
            raise InvalidInstanceError(
                f"price_cents must be non-negative, got {self.price_cents}"
            )


@dataclass(frozen=True)
class CollectorState:
    """Number of distinct stickers already pasted into the album."""

    collected: int

    def __post_init__(self) -> None:
        if self.collected < 0:
            raise InvalidStateError(f"collected must be non-negative, got {self.collected}")


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic (n+1) x (n+1) matrix of one-purchase transition probabilities.

    Entry ``(i, j)`` is the probability of moving from ``i`` distinct
    stickers to ``j`` in a single purchase.  Upper triangular: pasted
    stickers are never lost.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.n + 1, self.n + 1)
        if self.entries.shape != expected:
            raise InvalidInstanceError(
                f"expected shape {expected}, got {self.entries.shape}"
            )
        row_error = np.max(np.abs(self.entries.sum(axis=1) - 1.0))
        if row_error > ROW_SUM_TOL:
            raise InvalidInstanceError(
                f"rows must sum to 1 within {ROW_SUM_TOL}, worst error {row_error:.3e}"
            )
        self.entries.flags.writeable = False


def build_transition_matrix(spec: AlbumSpec) -> TransitionMatrix:
    """Construct the one-purchase transition matrix for ``spec``.

    With ``i`` distinct stickers pasted, a purchase is a duplicate with
    probability ``i/n`` and a new sticker with probability ``(n-i)/n``;
    state ``n`` is absorbing.
    """
    n = spec.n
    entries = np.zeros((n + 1, n + 1), dtype=np.float64)
    states = np.arange(n)
    entries[states, states] = states / n
    entries[states, states + 1] = (n - states) / n
    entries[n, n] = 1.0
    return TransitionMatrix(n=n, entries=entries)


def transition_probability(
    spec: AlbumSpec, source: CollectorState, target: CollectorState
) -> float:
    """Probability of moving from ``source`` to ``target`` in one purchase.

    Agrees entrywise with :func:`build_transition_matrix`: the same
    single-division quotients are evaluated here.
    """
    n = spec.n
    for state in (source, target):
        if not 0 <= state.collected <= n:
            raise InvalidStateError(
                f"state {state.collected} outside [0, {n}] for album of size {n}"
            )
    i = source.collected
    j = target.collected
    if i == n:
        return 1.0 if j == n else 0.0
    if j == i:
        return i / n
    if j == i + 1:
        return (n - i) / n
    return 0.0
