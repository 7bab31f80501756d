import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coupon_lab import (
    AlbumSpec,
    BoundQuery,
    BoundResult,
    InvalidInstanceError,
    InvalidProbabilityError,
    exact_tail,
    invert_confidence,
    monotone_convergence_check,
    tail_bound,
    threshold,
)


def test_headline_threshold():
    assert threshold(BoundQuery(649, 2.3)) == 5696


def test_threshold_with_unrounded_slack():
    # c = -ln 0.1 instead of the rounded 2.3 lands one purchase higher
    assert threshold(BoundQuery(649, -math.log(0.1))) == 5697


def test_hundred_sticker_threshold():
    # 100 ln 100 + 100 = 560.517...
    assert threshold(BoundQuery(100, 1.0)) == 561


def test_threshold_is_strictly_greater_at_integers():
    # the ceiling used here is "smallest integer strictly above", so an
    # exactly-integer argument moves up by one
    assert threshold(BoundQuery(1, 1.0)) == 2
    assert threshold(BoundQuery(1, 2.5)) == 3


@given(
    n=st.integers(min_value=1, max_value=5000),
    c=st.floats(min_value=1e-3, max_value=20.0),
    dn=st.integers(min_value=0, max_value=100),
    dc=st.floats(min_value=0.0, max_value=5.0),
)
@settings(max_examples=100, deadline=None)
def test_threshold_monotone_in_n_and_c(n, c, dn, dc):
    base = threshold(BoundQuery(n, c))
    assert threshold(BoundQuery(n + dn, c)) >= base
    assert threshold(BoundQuery(n, c + dc)) >= base


def test_bound_is_exponential_in_slack():
    result = tail_bound(BoundQuery(649, 2.3))
    assert result.bound == math.exp(-2.3)
    assert abs(result.bound - 0.100259) <= 1e-6


def test_bound_round_trips_requested_failure_probability():
    query = invert_confidence(649, 0.1)
    assert abs(tail_bound(query).bound - 0.1) <= 1e-12


def test_union_bound_small_album():
    result = tail_bound(BoundQuery(10, 1.0))
    assert result.threshold_t == 34
    direct = 10.0 * 0.9**34
    assert abs(result.union_bound - direct) <= 1e-12 * direct
    assert result.union_bound <= math.exp(-1.0)
    assert exact_tail(AlbumSpec(10), 34) <= result.union_bound


def test_union_bound_vanishes_for_single_sticker():
    assert tail_bound(BoundQuery(1, 0.5)).union_bound == 0.0


def test_two_sticker_album_sits_on_the_union_bound():
    # with two stickers the union bound is exact (no overlap to overcount),
    # so the exact tail may only be compared with a few-ulp allowance
    for c in (0.1, 0.5, 1.0, 2.3, 5.0):
        result = tail_bound(BoundQuery(2, c))
        tail = exact_tail(AlbumSpec(2), result.threshold_t)
        assert tail <= result.union_bound * (1.0 + 1e-12)
        assert tail >= result.union_bound * (1.0 - 1e-12)


def test_union_bound_never_underflows_to_garbage():
    # log-form evaluation: huge thresholds give tiny but clean values
    result = tail_bound(BoundQuery(5000, 20.0))
    assert 0.0 < result.union_bound <= result.bound


def test_invert_confidence_values():
    assert invert_confidence(649, 0.1).c == -math.log(0.1)
    assert abs(invert_confidence(7, 1 / math.e).c - 1.0) <= 1e-15
    # c = -ln 0.01; threshold evaluates to 7191.31... and moves up to 7192
    assert threshold(invert_confidence(649, 0.01)) == 7192


def test_invert_confidence_domain():
    for bad in (0.0, 1.0, -0.2, 1.8):
        with pytest.raises(InvalidProbabilityError):
            invert_confidence(10, bad)


@given(
    n=st.integers(min_value=1, max_value=2000),
    failure=st.floats(min_value=1e-12, max_value=1.0 - 1e-12, exclude_max=True),
)
@settings(max_examples=100, deadline=None)
def test_invert_then_bound_round_trip(n, failure):
    result = tail_bound(invert_confidence(n, failure))
    assert abs(result.bound - failure) <= 1e-12


def test_query_validation():
    with pytest.raises(InvalidInstanceError):
        BoundQuery(0, 1.0)
    with pytest.raises(InvalidInstanceError):
        BoundQuery(10, 0.0)
    with pytest.raises(InvalidInstanceError):
        BoundQuery(10, -1.0)


def test_bound_result_rejects_inverted_chain():
    with pytest.raises(InvalidInstanceError):
        BoundResult(threshold_t=10, bound=0.1, union_bound=0.2)


def test_monotone_convergence_at_two():
    point = monotone_convergence_check(2)
    assert point.value == 0.25
    assert abs(point.limit_gap - 0.117879) <= 1e-6


def test_monotone_convergence_large_album():
    point = monotone_convergence_check(649)
    assert point.value < math.exp(-1.0)
    assert point.limit_gap > 0.0


def test_monotone_convergence_strictly_increasing_sample():
    values = [monotone_convergence_check(n).value for n in range(2, 501)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(v < math.exp(-1.0) for v in values)


def test_monotone_convergence_domain():
    with pytest.raises(InvalidInstanceError):
        monotone_convergence_check(1)
