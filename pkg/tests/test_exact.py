"""Unit tests for the cyclotomic scalar domain."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exactweil.exact import (
    ComplexInterval,
    ExactScalar,
    cyclotomic_polynomial,
    eval_numeric,
    euler_phi,
    from_rational,
    root_of_unity,
    scalar_add,
    scalar_conj,
    scalar_eq,
    scalar_mul,
    sqrt_rat,
)


def test_root_of_unity_basics():
    assert root_of_unity(0, 1) == from_rational(1)
    assert root_of_unity(1, 2) == from_rational(-1)
    z8 = root_of_unity(1, 8)
    assert z8 ** 4 == from_rational(-1)
    # num is reduced mod den
    assert root_of_unity(9, 8) == z8
    assert root_of_unity(-1, 8) == z8 ** 7


def test_root_of_unity_rejects_bad_denominator():
    with pytest.raises(ValueError):
        root_of_unity(1, 0)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    # degree is phi(L)
    for L in (15, 36, 56, 105):
        assert len(cyclotomic_polynomial(L)) == euler_phi(L) + 1


def test_vanishing_cyclotomic_sum():
    z3 = root_of_unity(1, 3)
    assert (from_rational(1) + z3 + z3 * z3).is_zero()
    z5 = root_of_unity(1, 5)
    total = from_rational(0)
    for k in range(5):
        total = total + z5 ** k
    assert total == 0


def test_sqrt_examples():
    assert sqrt_rat(4) == from_rational(2)
    s2 = sqrt_rat(2)
    assert s2 == root_of_unity(1, 8) + root_of_unity(-1, 8)
    assert s2 * s2 == 2
    assert sqrt_rat(Fraction(1, 2)) == s2 / 2
    assert sqrt_rat(Fraction(1, 2)) * sqrt_rat(Fraction(1, 2)) == Fraction(1, 2)


def test_sqrt_rejects_nonpositive():
    with pytest.raises(ValueError):
        sqrt_rat(0)
    with pytest.raises(ValueError):
        sqrt_rat(Fraction(-3, 7))


def test_conjugation():
    z8 = root_of_unity(1, 8)
    assert scalar_conj(z8) == z8 ** 7
    assert scalar_conj(sqrt_rat(5)) == sqrt_rat(5)
    mixed = sqrt_rat(3) * root_of_unity(2, 7) + from_rational(Fraction(1, 3))
    assert scalar_conj(scalar_conj(mixed)) == mixed


def test_root_of_unity_order_sweep():
    # e(k/n)^n = 1 for every n up to 120, exhaustively.
    one = from_rational(1)
    for n in range(1, 121):
        for k in range(n):
            assert root_of_unity(k, n) ** n == one, (k, n)


@given(num=st.integers(1, 50), den=st.integers(1, 50))
@settings(max_examples=60, deadline=None)
def test_sqrt_squares_to_input(num, den):
    r = Fraction(num, den)
    s = sqrt_rat(r)
    assert s * s == r
    box = eval_numeric(s, 64)
    assert box.real_lo > 0
    assert box.contains_zero_imag()


_small_scalars = st.builds(
    lambda k, n, q: root_of_unity(k, n) * q,
    st.integers(0, 23), st.integers(1, 24),
    st.fractions(min_value=-5, max_value=5, max_denominator=9),
)


@given(a=_small_scalars, b=_small_scalars, c=_small_scalars)
@settings(max_examples=50, deadline=None)
def test_ring_axioms_spot(a, b, c):
    assert scalar_add(a, b) == scalar_add(b, a)
    assert scalar_mul(a, b) == scalar_mul(b, a)
    assert scalar_mul(a, scalar_add(b, c)) == scalar_mul(a, b) + scalar_mul(a, c)
    assert scalar_mul(scalar_mul(a, b), c) == scalar_mul(a, scalar_mul(b, c))


@given(a=_small_scalars, b=_small_scalars)
@settings(max_examples=50, deadline=None)
def test_equality_is_congruence(a, b):
    # a written at a different order must stay equal and behave identically.
    a_alt = a * root_of_unity(0, 7)
    assert scalar_eq(a, a_alt)
    assert scalar_eq(a + b, a_alt + b)
    assert scalar_eq(a * b, a_alt * b)


@given(a=_small_scalars)
@settings(max_examples=50, deadline=None)
def test_conj_fixes_modulus(a):
    m = a * scalar_conj(a)
    box = eval_numeric(m, 64)
    assert box.contains_zero_imag()
    assert box.real_lo >= -Fraction(1, 10**6)


def test_modulus_of_unimodular_times_sqrt():
    a = root_of_unity(3, 40) * sqrt_rat(Fraction(7, 3))
    assert a * scalar_conj(a) == Fraction(7, 3)


@given(a=_small_scalars)
@settings(max_examples=40, deadline=None)
def test_inverse_roundtrip(a):
    if a.is_zero():
        return
    assert a * a.inverse() == 1
    assert a ** -2 == (a * a).inverse()


def test_eval_numeric_encloses_known_points():
    # zeta_8 has real and imaginary parts sqrt(2)/2: compare squares, since
    # float references are not accurate to the interval width.
    z8 = eval_numeric(root_of_unity(1, 8), 64)
    for lo, hi in ((z8.real_lo, z8.real_hi), (z8.imag_lo, z8.imag_hi)):
        assert 0 < lo <= hi
        assert lo * lo <= Fraction(1, 2) <= hi * hi
    s2 = eval_numeric(sqrt_rat(2), 64)
    assert s2.real_lo * s2.real_lo <= 2 <= s2.real_hi * s2.real_hi
    assert s2.imag_lo <= 0 <= s2.imag_hi
    z3 = eval_numeric(root_of_unity(1, 3), 64)
    assert z3.real_lo <= Fraction(-1, 2) <= z3.real_hi
    assert isinstance(z3, ComplexInterval)


def test_eval_numeric_precision_shrinks_width():
    a = sqrt_rat(2) * root_of_unity(1, 7)
    wide = eval_numeric(a, 32)
    narrow = eval_numeric(a, 160)
    assert (narrow.real_hi - narrow.real_lo) < (wide.real_hi - wide.real_lo)
    with pytest.raises(ValueError):
        eval_numeric(a, 16)


def test_json_roundtrip_bit_exact():
    samples = [
        from_rational(0),
        from_rational(Fraction(-22, 7)),
        root_of_unity(5, 56),
        sqrt_rat(Fraction(3, 10)) + root_of_unity(1, 8),
    ]
    for s in samples:
        blob = s.to_json()
        assert ExactScalar.from_json(blob) == s
        assert ExactScalar.from_json(blob).to_json() == blob


def test_json_rejects_wrong_shape():
    with pytest.raises(ValueError):
        ExactScalar.from_json({"order": 8, "coeffs": ["1", "0"]})


def test_rational_detection():
    assert (sqrt_rat(2) * sqrt_rat(2)).as_rational() == 2
    assert (root_of_unity(1, 4) ** 2).as_rational() == -1
    with pytest.raises(ValueError):
        root_of_unity(1, 3).as_rational()
