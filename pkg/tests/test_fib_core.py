import gmpy2
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fibpow.fib_core import (
    ZeckendorfRep,
    decode,
    fib,
    hamming_weight,
    iroot,
    lucas,
    perfect_power,
    zeckendorf,
)
from oracles import fib_iter, fib_list, greedy_zeckendorf, lucas_iter, min_fib_terms


@pytest.mark.parametrize("n, value", [(0, 0), (1, 1), (2, 1), (12, 144), (36, 14930352)])
def test_fib_values(n, value):
    assert fib(n) == value


@pytest.mark.parametrize("n, value", [(0, 2), (1, 1), (2, 3), (10, 123)])
def test_lucas_values(n, value):
    assert lucas(n) == value == lucas_iter(n)


def test_fib_matches_iteration_up_to_10000():
    ref = fib_list(10_001)
    for n in range(10_001):
        assert fib(n) == ref[n]


def test_recurrence_and_lucas_relation():
    for n in range(1, 10_001, 7):
        assert fib(n + 2) == fib(n + 1) + fib(n)
        assert lucas(n) == fib(n - 1) + fib(n + 1)


@given(st.integers(min_value=0, max_value=5000))
def test_fib_property(n):
    assert fib(n) == fib_iter(n)
    assert lucas(n) == lucas_iter(n)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        fib(-1)
    with pytest.raises(ValueError):
        lucas(-3)


@pytest.mark.parametrize(
    "y, indices",
    [(1, (2,)), (100, (11, 6, 4)), (3864, (18, 16, 13, 10, 5)), (144, (12,))],
)
def test_zeckendorf_examples(y, indices):
    rep = zeckendorf(y)
    assert rep.indices == indices
    assert rep.decode() == y
    assert hamming_weight(y) == len(indices)


def test_zeckendorf_round_trip_to_a_million():
    for y in range(1, 10**6 + 1):
        assert zeckendorf(y).decode() == y


@given(st.integers(min_value=1, max_value=10**40))
def test_zeckendorf_matches_greedy_oracle(y):
    if y < fib_list(100)[100]:
        assert list(zeckendorf(y).indices) == greedy_zeckendorf(y)
    assert decode(zeckendorf(y).indices) == y


def test_zeckendorf_is_minimal():
    best = min_fib_terms(10_000)
    for y in range(1, 10_001):
        assert hamming_weight(y) == best[y]


def test_zeckendorf_rejects_bad_input():
    with pytest.raises(ValueError):
        zeckendorf(0)
    with pytest.raises(ValueError):
        ZeckendorfRep((5, 4))
    with pytest.raises(ValueError):
        ZeckendorfRep((1,))
    with pytest.raises(ValueError):
        ZeckendorfRep(())


def test_lucas_mod5_cycle():
    a, b = 2, 1
    for x in range(100_001):
        assert a == (2, 1, 3, 4)[x % 4]
        a, b = b, (a + b) % 5
    for x in range(0, 2000, 13):
        assert lucas(x) % 5 == (2, 1, 3, 4)[x % 4]


@given(st.integers(min_value=0, max_value=10**60), st.integers(min_value=1, max_value=40))
def test_iroot_matches_gmpy2(s, a):
    assert iroot(s, a) == int(gmpy2.iroot(s, a)[0])


@pytest.mark.parametrize(
    "s, expected",
    [(0, (0, 2)), (1, (1, 2)), (2, None), (16, (2, 4)), (14930496, (3864, 2)), (64, (2, 6)), (1000, (10, 3))],
)
def test_perfect_power_examples(s, expected):
    assert perfect_power(s) == expected


def test_perfect_power_detects_every_small_power():
    for y in range(2, 101):
        for a in range(2, 11):
            base, exp = perfect_power(y**a)
            assert base**exp == y**a and exp >= a


@given(st.integers(min_value=2, max_value=10**30))
def test_perfect_power_agrees_with_sympy(s):
    ref = sympy.perfect_power(s)
    got = perfect_power(s)
    if ref is False:
        assert got is None
    else:
        assert got == (int(ref[0]), int(ref[1]))


@given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=2, max_value=12))
def test_perfect_power_exponent_is_maximal(y, a):
    base, exp = perfect_power(y**a)
    assert base**exp == y**a
    assert perfect_power(base) is None  # otherwise exp was not maximal


def test_perfect_power_rejects_negative():
    with pytest.raises(ValueError):
        perfect_power(-8)
