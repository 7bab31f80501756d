"""Exact distributions for the collecting chain.

Everything here is deterministic arithmetic: the law of the state after
``t`` purchases, the law and moments of the completion draw count, its
quantiles, per-stage geometric statistics, and an independent
inclusion-exclusion evaluation of the completion tail used to
cross-validate the recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .album_model import AlbumSpec
from .errors import (
    HorizonTooSmallError,
    InvalidProbabilityError,
    InvalidStateError,
    InvalidTrialError,
    OracleRangeError,
)

MASS_TOL = 1e-10

# Largest album size the inclusion-exclusion oracle accepts.  The sum is
# evaluated in exact rational arithmetic, so the cap bounds runtime (big
# integer powers), not accuracy.
ORACLE_MAX_N = 64


@dataclass(frozen=True)
class StateDistribution:
    """Law of the number of distinct stickers pasted after ``t`` purchases."""

    t: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        mass_error = abs(float(self.probs.sum()) - 1.0)
        if mass_error > MASS_TOL:
            raise InvalidStateError(
                f"probabilities must sum to 1 within {MASS_TOL}, error {mass_error:.3e}"
            )
        # Cannot hold more distinct stickers than purchases made.
        if self.t + 1 < self.probs.size and np.any(self.probs[self.t + 1 :] != 0.0):
            raise InvalidStateError(f"nonzero mass above state {self.t} at t={self.t}")
        self.probs.flags.writeable = False

    @property
    def n(self) -> int:
        return self.probs.size - 1


@dataclass(frozen=True)
class CompletionLaw:
    """Truncated law of the purchase count at which the album completes.

    ``pmf[t]`` and ``cdf[t]`` cover ``t = 0 .. t_max``; whatever lies
    beyond the horizon is reported explicitly as ``tail_mass`` rather
    than renormalized away.
    """

    n: int
    t_max: int
    pmf: np.ndarray
    cdf: np.ndarray
    tail_mass: float

    def __post_init__(self) -> None:
        if self.pmf.size != self.t_max + 1 or self.cdf.size != self.t_max + 1:
            raise InvalidStateError("pmf and cdf must have t_max + 1 entries")
        if np.any(self.pmf[: self.n] != 0.0):
            raise InvalidStateError(f"completion needs at least {self.n} purchases")
        if np.any(np.diff(self.cdf) < 0.0):
            raise InvalidStateError("cdf must be non-decreasing")
        identity_error = abs(float(self.cdf[-1]) + self.tail_mass - 1.0)
        if identity_error > MASS_TOL:
            raise InvalidStateError(
                f"cdf[t_max] + tail_mass must equal 1 within {MASS_TOL}"
            )
        self.pmf.flags.writeable = False
        self.cdf.flags.writeable = False


@dataclass(frozen=True)
class GeometricLaw:
    """Number of i.i.d. trials up to and including the first success."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise InvalidProbabilityError(f"success probability must be in (0, 1], got {self.p}")


@njit(cache=True, nogil=True)
def _evolve_kernel(n: int, t_max: int):
    """Run the two-term recurrence for t_max steps from the empty album.

    Returns the state law at t_max and the completion probability after
    each step.  One step costs O(n) and reuses the exact same stay/advance
    quotients as the transition matrix, so the result is bitwise identical
    to repeated matrix application.  Double-buffered so the inner loop has
    no aliasing and vectorizes.
    """
    stay = np.empty(n + 1, dtype=np.float64)
    arrive = np.empty(n + 1, dtype=np.float64)
    for j in range(n + 1):
        stay[j] = j / n
        arrive[j] = (n - j + 1) / n
    probs = np.zeros(n + 1, dtype=np.float64)
    nxt = np.zeros(n + 1, dtype=np.float64)
    probs[0] = 1.0
    cdf = np.zeros(t_max + 1, dtype=np.float64)
    hi = 0
    for t in range(1, t_max + 1):
        if hi < n:
            hi += 1
        nxt[0] = 0.0
        # entries above hi in the write buffer are untouched zeros: they
        # date from two steps earlier, when hi was smaller still
        for j in range(1, hi + 1):
            nxt[j] = probs[j] * stay[j] + probs[j - 1] * arrive[j]
        probs, nxt = nxt, probs
        cdf[t] = probs[n]
    return probs, cdf


def evolve_distribution(spec: AlbumSpec, t: int) -> StateDistribution:
    """Exact law of the distinct-sticker count after ``t`` purchases.

    Computed by the forward recurrence
    ``p'[j] = p[j] * (j/n) + p[j-1] * ((n-j+1)/n)`` starting from a point
    mass on the empty album, in O(n*t) time and O(n) memory.
    """
    if t < 0:
        raise InvalidStateError(f"purchase count must be non-negative, got {t}")
    probs, _ = _evolve_kernel(spec.n, t)
    return StateDistribution(t=t, probs=probs)


def completion_law(spec: AlbumSpec, t_max: int) -> CompletionLaw:
    """Law of the completion draw count, truncated at horizon ``t_max``."""
    n = spec.n
    if t_max < n:
        raise HorizonTooSmallError(
            f"horizon t_max={t_max} below album size {n}; no completion mass exists yet"
        )
    _, cdf = _evolve_kernel(n, t_max)
    pmf = np.diff(cdf, prepend=0.0)
    tail_mass = 1.0 - float(cdf[-1])
    return CompletionLaw(n=n, t_max=t_max, pmf=pmf, cdf=cdf, tail_mass=tail_mass)


def exact_tail(spec: AlbumSpec, t: int) -> float:
    """P(album still incomplete after ``t`` purchases), by the recurrence."""
    if t < 0:
        raise InvalidStateError(f"purchase count must be non-negative, got {t}")
    probs, _ = _evolve_kernel(spec.n, t)
    return 1.0 - float(probs[spec.n])


def inclusion_exclusion_tail(spec: AlbumSpec, t: int) -> float:
    """P(album still incomplete after ``t`` purchases), by inclusion-exclusion.

    Evaluates ``sum_{k=1..n} (-1)^(k+1) C(n,k) (1 - k/n)^t`` over the
    events "sticker k missing from the first t purchases".  The
    alternating sum is computed in exact rational arithmetic and rounded
    to a float once at the end, so it is immune to the catastrophic
    cancellation a floating-point evaluation would suffer at small ``t``.
    Serves as the independent oracle for :func:`exact_tail`.
    """
    n = spec.n
    if n > ORACLE_MAX_N:
        raise OracleRangeError(
            f"inclusion-exclusion oracle supports album sizes up to {ORACLE_MAX_N}, got {n}"
        )
    if t < 0:
        raise InvalidStateError(f"purchase count must be non-negative, got {t}")
    total = Fraction(0)
    for k in range(1, n + 1):
        term = math.comb(n, k) * Fraction(n - k, n) ** t
        total += term if k % 2 == 1 else -term
    return float(total)


def completion_quantile(spec: AlbumSpec, target: float) -> int:
    """Smallest purchase count ``t`` with P(complete by t) >= ``target``.

    Doubles the recurrence horizon until the target is covered (the tail
    decays geometrically, so this terminates quickly), then binary-searches
    the recorded cdf.
    """
    if not 0.0 < target < 1.0:
        raise InvalidProbabilityError(f"target must be in (0, 1), got {target}")
    n = spec.n
    horizon = max(n, math.ceil(n * math.log(n)))
    while True:
        _, cdf = _evolve_kernel(n, horizon)
        if cdf[-1] >= target:
            break
        horizon *= 2
    return int(np.searchsorted(cdf, target, side="left"))


def geometric_pmf(law: GeometricLaw, k: int) -> float:
    """P(first success on trial ``k``) = (1-p)^(k-1) * p."""
    if k < 1:
        raise InvalidTrialError(f"trial index must be at least 1, got {k}")
    return (1.0 - law.p) ** (k - 1) * law.p


def geometric_mean(law: GeometricLaw) -> float:
    """Expected number of trials to the first success, 1/p."""
    return 1.0 / law.p


def expected_draws_for_next(spec: AlbumSpec, missing: int) -> float:
    """Expected purchases to paste one more sticker when ``missing`` remain.

    A purchase succeeds with probability ``missing/n``, so this is the
    geometric mean ``n/missing``, evaluated as the direct ratio to keep
    integer cases exact.
    """
    if not 1 <= missing <= spec.n:
        raise InvalidStateError(
            f"missing count must be in [1, {spec.n}], got {missing}"
        )
    return spec.n / missing


def expected_completion(spec: AlbumSpec) -> float:
    """Expected purchases to complete the album: sum of n/k for k = 1..n.

    Summed from k = n down to k = 1 so the smallest stage expectations
    accumulate first.
    """
    n = spec.n
    total = 0.0
    for k in range(n, 0, -1):
        total += n / k
    return total
