import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specgap.diophantine import balanced, dilate_set, dirichlet_cap, find_dilation
from specgap.differences import rep_table
from specgap.errors import CompositeModulus, InputError
from specgap.field import PrimeField

from . import oracles


@pytest.mark.parametrize("x,p,want", [(3, 7, 3), (6, 7, -1), (0, 7, 0), (5, 11, 5), (6, 11, -5)])
def test_balanced(x, p, want):
    assert balanced(x, p) == want


def test_balanced_needs_prime_field():
    with pytest.raises(CompositeModulus):
        PrimeField(10)


@pytest.mark.parametrize("p,t", [(7, 1), (101, 2), (4099, 6), (65537, 2), (1000003, 5)])
def test_dirichlet_cap_is_exact(p, t):
    c = dirichlet_cap(p, t)
    assert c**t <= p ** (t - 1) < (c + 1) ** t


def test_find_dilation_p7():
    w = find_dilation([3], PrimeField(7))
    assert w.m == 2 and w.achieved == 1 and w.bound == 1


def test_all_zero():
    w = find_dilation([0, 0, 0], PrimeField(13))
    assert w.m == 1 and w.achieved == 0


def test_p101_pair():
    F = PrimeField(101)
    w = find_dilation([3, 7], F)
    assert abs(balanced(3 * w.m, 101)) <= 10 and abs(balanced(7 * w.m, 101)) <= 10
    assert w.m == oracles.smallest_dilation([3, 7], 101)


def test_out_of_range():
    with pytest.raises(InputError):
        find_dilation([7], PrimeField(7))


@given(st.sampled_from([5, 7, 11, 31, 101, 257]), st.data())
@settings(max_examples=80, deadline=None)
def test_witness_is_smallest_and_valid(p, data):
    rs = data.draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=4))
    w = find_dilation(rs, PrimeField(p))
    assert w.m == oracles.smallest_dilation(rs, p)
    assert oracles.dilation_ok(w.m, rs, p)
    assert w.achieved <= w.bound + 1e-12
    assert w.max_distance(rs, p) <= p ** (-1 / len(rs)) + 1e-12


def test_dilate_set_example():
    assert dilate_set({1, 2, 4}, 3, 11) == {3, -5, 1}


def test_dilate_set_identity():
    assert dilate_set({1, 8, 10}, 1, 11) == {1, -3, -1}


def test_dilate_set_rejects_zero():
    with pytest.raises(InputError):
        dilate_set({1}, 11, 11)


@given(st.sampled_from([11, 31, 101]), st.data())
@settings(max_examples=50, deadline=None)
def test_dilation_preserves_representation_counts(p, data):
    F = PrimeField(p)
    B1 = data.draw(st.sets(st.integers(0, p - 1), min_size=1, max_size=8))
    B2 = data.draw(st.sets(st.integers(0, p - 1), min_size=1, max_size=8))
    m = data.draw(st.integers(1, p - 1))
    assert len(dilate_set(B1, m, p)) == len(B1)
    base = rep_table(B1, B2, F)
    dil = rep_table({m * b % p for b in B1}, {m * b % p for b in B2}, F)
    for d in range(p):
        assert dil.nu(m * d) == base.nu(d)
