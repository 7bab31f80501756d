"""Stochastic cross-check of the exact engine.

Simulates collectors drawing uniform stickers one at a time and samples
the completion draw count.  Reproducibility contract: every trial owns a
counter-based random substream keyed by (seed, trial index), so the
sample array is bit-identical for a given configuration no matter how
trials are distributed across workers.

RNG scheme (fixed for reproducibility; do not change without updating
the tests): draw ``j`` of trial ``i`` under ``seed`` uses the 64-bit word

    mix64(mix64(seed + (i+1)*GAMMA) + (j+1)*GAMMA)

where ``GAMMA = 0x9E3779B97F4A7C15`` and ``mix64`` is the SplitMix64
finalizer (Steele, Lea & Flood).  Words are reduced to uniform sticker
indices by masked rejection, which is exactly uniform on [0, n).
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .album_model import AlbumSpec
from .errors import InvalidInstanceError, InvalidStateError

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

_SEED_MAX = 2**64 - 1


@njit(cache=True, nogil=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def _simulate_block(n, seed, first_trial, t_cap, track, visits, advances, draws_out):
    """Simulate len(draws_out) consecutive trials starting at first_trial.

    draws_out[i] receives the completing draw count, or -1 if the trial
    was still incomplete after t_cap draws.  When track is true, visits
    and advances accumulate per-state draw and advance counts.
    """
    n_u = np.uint64(n)
    mask = np.uint64(0)
    while mask < n_u - np.uint64(1):
        mask = (mask << np.uint64(1)) | np.uint64(1)
    seen = np.zeros(n, dtype=np.uint8)
    for i in range(draws_out.shape[0]):
        trial_key = _mix64(seed + np.uint64(first_trial + i + 1) * _GAMMA)
        seen[:] = 0
        distinct = 0
        draws = 0
        counter = np.uint64(0)
        completed = False
        while draws < t_cap:
            while True:
                counter += np.uint64(1)
                word = _mix64(trial_key + counter * _GAMMA) & mask
                if word < n_u:
                    break
            sticker = np.int64(word)
            draws += 1
            if track:
                visits[distinct] += 1
            if seen[sticker] == 0:
                seen[sticker] = 1
                if track:
                    advances[distinct] += 1
                distinct += 1
                if distinct == n:
                    completed = True
                    break
        draws_out[i] = draws if completed else -1


def _default_t_cap(n: int) -> int:
    # Runaway guard only; roughly 50x the expected completion count.
    return max(n, math.ceil(50.0 * n * math.log(n)))


@dataclass(frozen=True)
class SimulationConfig:
    """What to simulate: album, trial count, seed, and an abort guard."""

    spec: AlbumSpec
    trials: int
    seed: int
    t_cap: int | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidInstanceError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed <= _SEED_MAX:
            raise InvalidInstanceError(
                f"seed must be an unsigned 64-bit integer, got {self.seed}"
            )
        if self.t_cap is not None and self.t_cap < self.spec.n:
            raise InvalidInstanceError(
                f"t_cap must be at least the album size {self.spec.n}, got {self.t_cap}"
            )

    @property
    def effective_t_cap(self) -> int:
        return self.t_cap if self.t_cap is not None else _default_t_cap(self.spec.n)


@dataclass(frozen=True)
class SimulationReport:
    """Completion samples with summary statistics and the seed echoed back.

    ``samples`` holds the completing draw counts of completed trials in
    trial order; trials that hit the cap are listed in
    ``censored_trials`` instead of being dropped.  ``std`` is the sample
    standard deviation (ddof=1).
    """

    config: SimulationConfig
    samples: np.ndarray
    censored_trials: np.ndarray
    t_cap: int
    mean: float = field(init=False)
    std: float = field(init=False)
    min: int = field(init=False)
    max: int = field(init=False)

    def __post_init__(self) -> None:
        if self.samples.size:
            if int(self.samples.min()) < self.config.spec.n:
                raise InvalidStateError("sample below the album size; simulator bug")
            object.__setattr__(self, "mean", float(self.samples.mean()))
            std = float(self.samples.std(ddof=1)) if self.samples.size > 1 else 0.0
            object.__setattr__(self, "std", std)
            object.__setattr__(self, "min", int(self.samples.min()))
            object.__setattr__(self, "max", int(self.samples.max()))
        else:
            object.__setattr__(self, "mean", math.nan)
            object.__setattr__(self, "std", math.nan)
            object.__setattr__(self, "min", 0)
            object.__setattr__(self, "max", 0)
        self.samples.flags.writeable = False
        self.censored_trials.flags.writeable = False

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def trials(self) -> int:
        return self.config.trials

    def empirical_tail(self, t: int) -> float:
        """Fraction of trials whose completion took more than ``t`` draws.

        Censored trials exceeded ``t_cap`` and therefore count as
        exceeding any ``t <= t_cap``; beyond that the fraction would be
        undefined, so larger queries are rejected.
        """
        if self.censored_trials.size and t > self.t_cap:
            raise InvalidStateError(
                f"tail at t={t} undefined: {self.censored_trials.size} trials "
                f"censored at t_cap={self.t_cap}"
            )
        exceeding = int(np.count_nonzero(self.samples > t)) + self.censored_trials.size
        return exceeding / self.trials


@dataclass(frozen=True)
class TransitionFrequencyTable:
    """Observed per-state stay/advance draw counts from simulated trials."""

    n: int
    visits: np.ndarray
    advances: np.ndarray

    def __post_init__(self) -> None:
        if np.any(self.advances > self.visits):
            raise InvalidStateError("more advances than draws from some state")
        self.visits.flags.writeable = False
        self.advances.flags.writeable = False

    def observed_advance_frequency(self, state: int) -> float:
        if not 0 <= state < self.n:
            raise InvalidStateError(f"state {state} outside [0, {self.n - 1}]")
        if self.visits[state] == 0:
            raise InvalidStateError(f"state {state} was never visited")
        return float(self.advances[state]) / float(self.visits[state])

    def expected_advance_probability(self, state: int) -> float:
        if not 0 <= state < self.n:
            raise InvalidStateError(f"state {state} outside [0, {self.n - 1}]")
        return (self.n - state) / self.n


def _run_blocks(config: SimulationConfig, workers: int, track: bool):
    n = config.spec.n
    seed = np.uint64(config.seed)
    t_cap = config.effective_t_cap
    workers = max(1, min(workers, config.trials))
    bounds = np.linspace(0, config.trials, workers + 1).astype(np.int64)
    blocks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    outs = [np.empty(b - a, dtype=np.int64) for a, b in blocks]
    tallies = [
        (np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)) for _ in blocks
    ]

    def run(block_index: int) -> None:
        a, _ = blocks[block_index]
        visits, advances = tallies[block_index]
        _simulate_block(n, seed, a, t_cap, track, visits, advances, outs[block_index])

    if len(blocks) == 1:
        run(0)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            list(pool.map(run, range(len(blocks))))

    # Merge in trial-index order; per-state tallies are order-free sums.
    draws = np.concatenate(outs)
    visits = sum(v for v, _ in tallies)
    advances = sum(a for _, a in tallies)
    return draws, visits, advances, t_cap


def run_simulation(config: SimulationConfig, workers: int = 1) -> SimulationReport:
    """Sample the completion draw count for every configured trial.

    Each trial draws uniform sticker indices from its own counter-based
    substream (see the module docstring for the exact scheme), tracks the
    count of distinct indices seen, and stops when it reaches ``n`` or
    exceeds the cap.  Identical configurations produce bit-identical
    reports for any ``workers`` value.
    """
    draws, _, _, t_cap = _run_blocks(config, workers, track=False)
    censored = np.flatnonzero(draws < 0)
    samples = draws[draws >= 0]
    return SimulationReport(
        config=config, samples=samples, censored_trials=censored, t_cap=t_cap
    )


def empirical_transition_check(
    config: SimulationConfig, workers: int = 1
) -> TransitionFrequencyTable:
    """Aggregate stay-vs-advance frequencies over all simulated draws.

    From state ``i`` the chain should advance with probability
    ``(n-i)/n``; the returned table carries the observed draw and advance
    counts per state so callers can test that at their chosen confidence.
    """
    _, visits, advances, _ = _run_blocks(config, workers, track=True)
    return TransitionFrequencyTable(n=config.spec.n, visits=visits, advances=advances)
