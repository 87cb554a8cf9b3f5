import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fibpow.fib_core import fib, lucas
from fibpow.precision import embed
from fibpow.quad_field import (
    ALPHA,
    BETA,
    ONE,
    SQRT5,
    NonvanishingCertificate,
    ParityBranch,
    QuadInt,
    alpha_pow,
    eta3,
    eta4,
    height_bound_eta3,
    height_bound_eta4,
    nonvanishing_certificate,
    norm,
    v_sqrt5,
)
from oracles import exact_height, golden, mp_log, quad_value, to_fraction

quads = st.builds(QuadInt, st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
nonzero_quads = quads.filter(lambda z: not z.is_zero())


@pytest.mark.parametrize("x, coords", [(0, (1, 0)), (1, (0, 1)), (2, (1, 1)), (10, (34, 55))])
def test_alpha_pow_examples(x, coords):
    z = alpha_pow(x)
    assert (z.p, z.q) == coords


def test_alpha_pow_coordinates_and_repeated_multiplication():
    z = ONE
    for x in range(1, 1001):
        z = z * ALPHA
        assert z == alpha_pow(x)
        assert (z.p, z.q) == (fib(x - 1), fib(x))


def test_negative_powers_are_inverses():
    for x in range(0, 60):
        assert alpha_pow(x) * alpha_pow(-x) == ONE
    assert alpha_pow(-1) == -BETA


def test_norm_of_alpha_power_plus_one():
    for x in range(0, 1001):
        nz = norm(alpha_pow(x) + 1)
        assert nz == (-1) ** x + lucas(x) + 1
        if x % 2:
            assert nz == lucas(x)
            assert v_sqrt5(alpha_pow(x) + 1) == 0


def test_norm_equals_lucas_fails_for_even_exponents():
    # the identity N(alpha^x + 1) = L_x needs x odd; even x gives L_x + 2
    assert norm(alpha_pow(0) + 1) == 4 == lucas(0) + 2
    assert norm(alpha_pow(2) + 1) == lucas(2) + 2


@pytest.mark.parametrize("z, value", [(alpha_pow(3) + 1, 4), (alpha_pow(7) + 1, 29), (ONE, 1), (ALPHA, -1)])
def test_norm_examples(z, value):
    assert norm(z) == value


@given(quads, quads)
def test_ring_laws(z, w):
    assert z * w == w * z
    assert (z + w).conjugate() == z.conjugate() + w.conjugate()
    assert (z * w).conjugate() == z.conjugate() * w.conjugate()
    assert norm(z * w) == norm(z) * norm(w)
    assert z * z.conjugate() == QuadInt(norm(z))


@given(quads)
def test_embedding_matches_real_value(z):
    enc = embed(z, 128)
    assert enc.contains(to_fraction(quad_value(z.p, z.q, 60))) or z.is_zero()


@pytest.mark.parametrize("z, v", [(SQRT5, 1), (ALPHA, 0), (QuadInt(5), 2), (QuadInt(25) * ALPHA, 4)])
def test_v_sqrt5_examples(z, v):
    assert v_sqrt5(z) == v


def test_sqrt5_squares_to_five():
    assert SQRT5 * SQRT5 == QuadInt(5)


@given(nonzero_quads, nonzero_quads)
def test_v_sqrt5_is_additive(z, w):
    assert v_sqrt5(z * w) == v_sqrt5(z) + v_sqrt5(w)


def test_v_sqrt5_of_zero_is_rejected():
    with pytest.raises(ValueError):
        v_sqrt5(QuadInt(0))


def test_nonvanishing_examples():
    c = nonvanishing_certificate(1, 2, "odd")
    assert isinstance(c, NonvanishingCertificate) and c.valid
    p = nonvanishing_certificate(3, 5, "even")
    assert isinstance(p, ParityBranch) and p.consistent is None
    c = nonvanishing_certificate(5, 2, "odd", n_minus_m=7, indices=(18, 16, 13, 10, 5))
    assert c.valid and c.eta4_unit_at_sqrt5 and c.eta3_valuation is not None
    assert nonvanishing_certificate(5, 2, "even", with_eta4=False).valid
    assert ParityBranch(1, 2, n=36).consistent is True
    assert ParityBranch(1, 2, n=37).consistent is False


@given(st.integers(2, 50), st.integers(1, 10), st.integers(0, 200).map(lambda d: 2 * d + 1))
def test_certificate_for_every_odd_parity(a, ell, n_minus_m):
    c = nonvanishing_certificate(ell, a, n_minus_m, n_minus_m=n_minus_m)
    assert isinstance(c, NonvanishingCertificate) and c.valid


def test_nonvanishing_rejects_bad_input():
    with pytest.raises(ValueError):
        nonvanishing_certificate(1, 1, "odd")
    with pytest.raises(ValueError):
        nonvanishing_certificate(1, 2, "sideways")


@pytest.mark.parametrize("k, t, value", [(1, 1, 1), (5, 10, 50)])
def test_height_bound_eta3_examples(k, t, value):
    hb = height_bound_eta3(k, t)
    assert hb.value == value and hb.matveev_a == 2 * value


@pytest.mark.parametrize("s", [1, 24])
def test_height_bound_eta4_examples(s):
    assert height_bound_eta4(s).value == s
    assert height_bound_eta4(s).matveev_a == 2 * s


def test_height_oracle_reproduces_basic_heights():
    with mpmath.workdps(60):
        assert abs(exact_height(sympy.sqrt(5)) - mp_log(5) / 2) < mpmath.mpf(2) ** -100
        assert abs(exact_height(golden()) - mp_log(quad_value(0, 1)) / 2) < mpmath.mpf(2) ** -100


def test_eta3_height_below_bound():
    g = golden()
    indices = (7, 5, 2)  # 1 + alpha^-2 + alpha^-5
    assert eta3(indices, 3) == ONE + alpha_pow(-2) + alpha_pow(-5)
    h = exact_height(1 + g**-2 + g**-5)
    assert to_fraction(h) <= height_bound_eta3(3, indices[0] - indices[-1]).value


def test_eta4_height_below_bound():
    g = golden()
    h = exact_height(g**6 + 1)
    with mpmath.workdps(60):
        assert h <= 6 * mp_log(quad_value(0, 1)) / 2 + mpmath.log(2)
    assert to_fraction(h) <= height_bound_eta4(6).value
    assert eta4(6) == alpha_pow(6) + 1


@settings(max_examples=30)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=4, unique=True))
def test_eta3_heights_below_bound_random(gaps):
    offsets = sorted(set(gaps))
    indices = tuple(30 - 2 * o for o in offsets)
    eta = eta3(indices, len(indices))
    expr = sum((golden() ** (i - indices[0]) for i in indices[1:]), sympy.Integer(1))
    t = max(1, indices[0] - indices[-1])
    assert to_fraction(exact_height(expr)) <= height_bound_eta3(len(indices), t).value
    with mpmath.workdps(60):
        value = sum(quad_value(0, 1) ** (i - indices[0]) for i in indices)
    assert embed(eta, 128).contains(to_fraction(value))
