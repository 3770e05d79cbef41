import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from feemarket import make_bid_vector, num_at_least
from feemarket.bids import insert, leave_one_out
from feemarket.errors import NonFiniteBid, NonPositiveBid


def test_sorts_descending():
    b = make_bid_vector([1, 5, 2])
    assert list(b) == [5, 2, 1]


def test_empty_vector():
    b = make_bid_vector([])
    assert b.n == 0


def test_rejects_nonpositive():
    with pytest.raises(NonPositiveBid):
        make_bid_vector([3, -1])
    with pytest.raises(NonPositiveBid):
        make_bid_vector([0.0])


def test_rejects_nonfinite():
    with pytest.raises(NonFiniteBid):
        make_bid_vector([1.0, float("nan")])
    with pytest.raises(NonFiniteBid):
        make_bid_vector([float("inf")])


def test_values_are_immutable():
    b = make_bid_vector([3, 1, 2])
    with pytest.raises(ValueError):
        b.values[0] = 9.0


@pytest.mark.parametrize(
    "z,expected", [(1, 4), (2, 2), (6, 0), (0.5, 4), (5, 1), (1.5, 2)]
)
def test_num_at_least(z, expected):
    b = make_bid_vector([5, 2, 1, 1])
    assert num_at_least(b, z) == expected


@given(st.lists(st.floats(min_value=0.001, max_value=1e6), max_size=60), st.floats(0.001, 1e6))
def test_num_at_least_matches_linear_count(raw, z):
    b = make_bid_vector(raw)
    assert num_at_least(b, z) == sum(1 for v in raw if v >= z)


def test_insert_keeps_order():
    b = make_bid_vector([5, 2, 1])
    assert list(insert(b, 2.0, 2)) == [5, 2, 2, 2, 1]


def test_leave_one_out():
    b = make_bid_vector([5, 2, 1])
    assert list(leave_one_out(b, 1)) == [5, 1]
