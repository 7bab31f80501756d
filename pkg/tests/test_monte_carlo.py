import math

import numpy as np
import pytest

from coupon_lab import (
    AlbumSpec,
    InvalidInstanceError,
    InvalidStateError,
    SimulationConfig,
    empirical_transition_check,
    exact_tail,
    expected_completion,
    run_simulation,
)


def test_single_sticker_album_always_one_draw():
    report = run_simulation(SimulationConfig(spec=AlbumSpec(1), trials=5, seed=11))
    assert report.samples.tolist() == [1, 1, 1, 1, 1]
    assert report.mean == 1.0
    assert report.empirical_tail(0) == 1.0
    assert report.empirical_tail(1) == 0.0


def test_identical_configs_are_bit_identical():
    config = SimulationConfig(spec=AlbumSpec(12), trials=4000, seed=987654321)
    first = run_simulation(config)
    second = run_simulation(config)
    assert np.array_equal(first.samples, second.samples)
    assert np.array_equal(first.censored_trials, second.censored_trials)


def test_worker_count_does_not_change_results():
    config = SimulationConfig(spec=AlbumSpec(9), trials=5003, seed=2718)
    serial = run_simulation(config, workers=1)
    threaded = run_simulation(config, workers=3)
    assert np.array_equal(serial.samples, threaded.samples)
    table_serial = empirical_transition_check(config, workers=1)
    table_threaded = empirical_transition_check(config, workers=4)
    assert np.array_equal(table_serial.visits, table_threaded.visits)
    assert np.array_equal(table_serial.advances, table_threaded.advances)


@pytest.mark.parametrize("n", [2, 3, 5, 10])
def test_empirical_mean_matches_expectation(n):
    trials = 1_000_000
    report = run_simulation(SimulationConfig(spec=AlbumSpec(n), trials=trials, seed=n))
    assert report.min >= n
    standard_error = report.std / math.sqrt(trials)
    assert abs(report.mean - expected_completion(AlbumSpec(n))) <= 4.0 * standard_error


@pytest.mark.parametrize("t", [5, 11, 25])
def test_empirical_tail_matches_exact_tail(t):
    n, trials = 5, 200_000
    report = run_simulation(SimulationConfig(spec=AlbumSpec(n), trials=trials, seed=55))
    p = exact_tail(AlbumSpec(n), t)
    standard_error = math.sqrt(p * (1.0 - p) / trials)
    assert abs(report.empirical_tail(t) - p) <= 4.0 * standard_error


def test_mean_lies_between_min_and_max():
    report = run_simulation(SimulationConfig(spec=AlbumSpec(7), trials=500, seed=1))
    assert report.min <= report.mean <= report.max


def test_censoring_is_reported_not_dropped():
    # cap at the bare minimum: only trials completing in exactly n draws survive
    config = SimulationConfig(spec=AlbumSpec(4), trials=2000, seed=99, t_cap=4)
    report = run_simulation(config)
    assert report.samples.size + report.censored_trials.size == 2000
    assert report.censored_trials.size > 0
    assert np.all(report.samples == 4)
    # completing in exactly n=4 draws has probability 4!/4^4 = 3/32
    assert abs(report.samples.size / 2000 - 3 / 32) < 0.05
    assert report.empirical_tail(4) == report.censored_trials.size / 2000
    with pytest.raises(InvalidStateError):
        report.empirical_tail(5)


def test_transition_frequencies_small_albums():
    table = empirical_transition_check(
        SimulationConfig(spec=AlbumSpec(2), trials=30_000, seed=5)
    )
    # state 0 always advances
    assert table.observed_advance_frequency(0) == 1.0
    # state 1 is a fair coin
    visits = int(table.visits[1])
    se = math.sqrt(0.25 / visits)
    assert abs(table.observed_advance_frequency(1) - 0.5) <= 4.0 * se

    table5 = empirical_transition_check(
        SimulationConfig(spec=AlbumSpec(5), trials=10_000, seed=6)
    )
    visits3 = int(table5.visits[3])
    p = table5.expected_advance_probability(3)
    assert p == 2 / 5
    se3 = math.sqrt(p * (1.0 - p) / visits3)
    assert abs(table5.observed_advance_frequency(3) - p) <= 4.0 * se3


def test_transition_table_domain_errors():
    table = empirical_transition_check(
        SimulationConfig(spec=AlbumSpec(3), trials=10, seed=1)
    )
    with pytest.raises(InvalidStateError):
        table.observed_advance_frequency(3)
    with pytest.raises(InvalidStateError):
        table.expected_advance_probability(-1)


def test_config_validation():
    spec = AlbumSpec(5)
    with pytest.raises(InvalidInstanceError):
        SimulationConfig(spec=spec, trials=0, seed=1)
    with pytest.raises(InvalidInstanceError):
        SimulationConfig(spec=spec, trials=10, seed=-1)
    with pytest.raises(InvalidInstanceError):
        SimulationConfig(spec=spec, trials=10, seed=2**64)
    with pytest.raises(InvalidInstanceError):
        SimulationConfig(spec=spec, trials=10, seed=1, t_cap=4)
    # extremes of the valid seed range are accepted
    run_simulation(SimulationConfig(spec=AlbumSpec(2), trials=3, seed=2**64 - 1))
    run_simulation(SimulationConfig(spec=AlbumSpec(2), trials=3, seed=0))


def test_default_cap_never_bites_in_practice():
    config = SimulationConfig(spec=AlbumSpec(50), trials=2000, seed=3)
    report = run_simulation(config)
    assert report.censored_trials.size == 0
    assert report.t_cap == max(50, math.ceil(50 * 50 * math.log(50)))
