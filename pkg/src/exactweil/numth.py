"""Valuations, Legendre-Jacobi symbols, and Hilbert symbols.

Conventions matter here and are easy to get silently wrong, so they are
spelled out once:

* (x/y) means (x/|y|); the symbol over +-1 is 1.
* eps(K) is the class of (K-1)/2 in F_2 and sigma(K) is 1 exactly for
  negative K, so that (-1/y) = (-1)^(eps(y)+sigma(y)) and quadratic
  reciprocity reads (x/y)(y/x) = (-1)^(eps(x)eps(y)+sigma(x)sigma(y)) for
  coprime odd x, y of either sign.
* The symbol accepts p-adic unit rationals in the numerator when the
  denominator is +-p^k: the unit is reduced mod p (mod 8 when powers of two
  appear in the numerator), which is the continuous extension.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

from .exact import ExactScalar, from_rational, root_of_unity

RationalLike = Union[int, Fraction]

REAL_PLACE = "real"


class ValUnit(NamedTuple):
    valuation: int
    unit_part: Fraction


def valuation_split(x: RationalLike, p: int) -> ValUnit:
    """Write x = p^v * u with u a p-adic unit; returns (v, u) exactly."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return ValUnit(v, Fraction(num, den))


def sigma(x: RationalLike) -> int:
    """Sign bit: 1 for negative arguments, 0 otherwise."""
    return 1 if x < 0 else 0


def eps_parity(K: RationalLike) -> int:
    """(K-1)/2 mod 2 for odd K (integer or 2-adic unit rational)."""
    K = Fraction(K)
    num, den = K.numerator, K.denominator
    if num % 2 == 0 or den % 2 == 0:
        raise ValueError("eps is only defined for odd arguments")
    # reduce the unit mod 4 through the inverse of the denominator
    r = (num * pow(den, -1, 4)) % 4
    return ((r - 1) // 2) % 2


class EpsData(NamedTuple):
    eps_scalar: ExactScalar  # 1 or i
    eps: int  # bit
    sigma: int  # bit


def eps_data(K: int) -> EpsData:
    """The (eps_K, eps(K), sigma(K)) bookkeeping for an odd integer K."""
    if K % 2 == 0:
        raise ValueError("eps_data requires an odd integer")
    e = eps_parity(K)
    scalar = root_of_unity(1, 4) if e else from_rational(1)
    return EpsData(scalar, e, sigma(K))


def _unit_mod(x: Fraction, modulus: int) -> int:
    """Reduce a rational with denominator prime to modulus."""
    num, den = x.numerator, x.denominator
    if gcd(den, modulus) != 1:
        raise ValueError("denominator %d not invertible mod %d" % (den, modulus))
    return (num * pow(den, -1, modulus)) % modulus if modulus > 1 else 0


def two_over(y: RationalLike) -> int:
    """(2/y) for odd y, by the y mod 8 rule (sign of y is immaterial)."""
    r = _unit_mod(Fraction(y), 8)
    if r % 2 == 0:
        raise ValueError("(2/y) requires odd y")
    return 1 if r in (1, 7) else -1


def _jacobi(a: int, n: int) -> int:
    # Standard Jacobi symbol, n odd positive.
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(x: RationalLike, y: int) -> int:
    """(x/y) in the sign-insensitive convention (x/y) = (x/|y|).

    y must be odd and nonzero.  x may be any integer, or, when |y| is a
    power of an odd prime p, any rational with v_p(x) >= 0 (the unit part is
    reduced mod |y|).  Returns 0 when x shares a factor with |y|.
    """
    if y % 2 == 0:
        raise ValueError("legendre denominator must be odd")
    n = abs(y)
    if n == 1:
        return 1
    x = Fraction(x)
    if x.denominator == 1:
        return _jacobi(x.numerator % n, n)
    return _jacobi(_unit_mod(x, n), n)


def zeta8_identity_check(x: int) -> bool:
    """Self-test of the identity (2/x) * eps_x = zeta8^(1-x) for odd x."""
    lhs = from_rational(two_over(x)) * eps_data(x).eps_scalar
    return lhs == root_of_unity(1 - x, 8)


def hilbert(a: RationalLike, b: RationalLike, place) -> int:
    """Hilbert symbol (a,b) at a place of Q.

    place is REAL_PLACE or a prime.  Real: (-1)^(sigma(a)sigma(b)).  At 2:
    (-1)^(eps(a2)eps(b2)) (2/a2)^v2(b) (2/b2)^v2(a).  At odd p:
    (-1)^(eps(p)v(a)v(b)) (a_p/p)^v(b) (b_p/p)^v(a), the closed form pinned
    by bilinearity and the unit-symbol identities.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == REAL_PLACE:
        return -1 if (a < 0 and b < 0) else 1
    p = place
    va, ua = valuation_split(a, p)
    vb, ub = valuation_split(b, p)
    if p == 2:
        result = (-1) ** (eps_parity(ua) * eps_parity(ub))
        if vb % 2:
            result *= two_over(ua)
        if va % 2:
            result *= two_over(ub)
        return result
    result = (-1) ** (eps_parity(p) * va * vb)
    if vb % 2:
        result *= legendre(ua, p)
    if va % 2:
        result *= legendre(ub, p)
    return result


def hilbert_product_check(a: int, b: int) -> bool:
    """Product formula over all places: always true, exposed as a self-test."""
    if a == 0 or b == 0:
        raise ValueError("needs nonzero integers")
    product = hilbert(a, b, REAL_PLACE)
    seen = set()
    for n in (2 * abs(a), 2 * abs(b)):
        d = 2
        while d * d <= n:
            if n % d == 0:
                seen.add(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            seen.add(n)
    for p in seen:
        product *= hilbert(a, b, p)
    return product == 1


def prime_factors(n: int) -> list[int]:
    """Sorted prime divisors of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("0 has no prime factorization")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def char_p_exponent(x: RationalLike, p: int) -> Fraction:
    """The p-local additive character chi_p evaluated on x, as an exponent.

    chi_p kills Z_p and the prime-to-p part of the denominator: writing
    x = n/(p^k m) with m prime to p and alpha*m + beta*p^k = 1, one has
    chi_p(x) = e(n*alpha/p^k).  Returns n*alpha/p^k mod 1.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v, _ = valuation_split(x, p)
    if v >= 0:
        return Fraction(0)
    pk = p ** (-v)
    m = x.denominator // pk
    n = x.numerator
    alpha = pow(m, -1, pk)
    return Fraction((n * alpha) % pk, pk)


def char_p_value(x: RationalLike, p: int) -> ExactScalar:
    e = char_p_exponent(x, p)
    return root_of_unity(e.numerator, e.denominator)
