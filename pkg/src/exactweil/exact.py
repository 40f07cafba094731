"""Exact arithmetic in cyclotomic fields.

Every scalar the representation formulas produce lives in some Q(zeta_L):
roots of unity e(num/den), square roots of positive rationals (embedded via
quadratic Gauss sums), and sums and products thereof.  This module provides
that scalar type with decidable, exact equality.

Internally a scalar is a vector of integers of length phi(L) (the power basis
1, z, ..., z^{phi(L)-1} of Q(zeta_L), always reduced modulo the L-th
cyclotomic polynomial) together with a positive common denominator.  The
reduced form is canonical for a fixed L, so equality at equal orders is tuple
comparison; at different orders both sides are embedded into Q(zeta_lcm).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Union

import mpmath

RationalLike = Union[int, Fraction]

_cyclo_cache: dict[int, tuple[int, ...]] = {}
_phi_cache: dict[int, int] = {}


def euler_phi(n: int) -> int:
    """Euler's totient, by trial division (orders stay desk-sized)."""
    if n in _phi_cache:
        return _phi_cache[n]
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    _phi_cache[n] = result
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials; den must be monic.
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("non-exact polynomial division")
    return out


def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Coefficients of Phi_L, low degree first, computed by dividing x^L - 1
    by Phi_d over all proper divisors d of L."""
    if L in _cyclo_cache:
        return _cyclo_cache[L]
    poly = [0] * (L + 1)
    poly[0], poly[L] = -1, 1
    for d in _divisors(L):
        if d < L:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    result = tuple(poly)
    assert len(result) == euler_phi(L) + 1
    _cyclo_cache[L] = result
    return result


def _reduce_vec(vec: list, L: int) -> list:
    """Reduce a coefficient vector (powers of zeta_L) mod Phi_L, in place."""
    phi = euler_phi(L)
    if len(vec) <= phi:
        vec.extend([0] * (phi - len(vec)))
        return vec
    cyclo = cyclotomic_polynomial(L)
    for i in range(len(vec) - 1, phi - 1, -1):
        c = vec[i]
        if c:
            vec[i] = 0
            base = i - phi
            for j in range(phi):
                if cyclo[j]:
                    vec[base + j] -= c * cyclo[j]
    del vec[phi:]
    return vec


class ExactScalar:
    """An element of Q(zeta_L), canonically reduced.

    Supports +, -, *, /, integer powers, conjugation, exact equality, and
    rigorous numeric evaluation.  Mixed-order operations embed into the
    compositum Q(zeta_lcm); callers never pick L themselves.
    """

    __slots__ = ("order", "_num", "_den")

    def __init__(self, order: int, num: tuple[int, ...], den: int):
        # Trusted constructor: num reduced, gcd(num..., den) = 1, den > 0.
        self.order = order
        self._num = num
        self._den = den

    @staticmethod
    def _normalize(order: int, vec: list) -> "ExactScalar":
        _reduce_vec(vec, order)
        den = 1
        for x in vec:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        nums = [int(x * den) if isinstance(x, Fraction) else x * den for x in vec]
        g = den
        for x in nums:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            den //= g
            nums = [x // g for x in nums]
        if not any(nums):
            return ExactScalar(1, (0,), 1)
        return ExactScalar(order, tuple(nums), den)

    @staticmethod
    def from_rational(r: RationalLike) -> "ExactScalar":
        r = Fraction(r)
        return ExactScalar._normalize(1, [r])

    # -- embedding ---------------------------------------------------------

    def _embedded_vec(self, M: int) -> list[int]:
        """Numerator vector of self viewed in Q(zeta_M); requires order | M."""
        step = M // self.order
        out = [0] * (max((len(self._num) - 1) * step + 1, 1))
        for k, c in enumerate(self._num):
            if c:
                out[k * step] += c
        return _reduce_vec(out, M)

    def _to_order(self, M: int) -> "ExactScalar":
        if M == self.order:
            return self
        vec = self._embedded_vec(M)
        return ExactScalar(M, tuple(vec), self._den)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        L = self.order * other.order // gcd(self.order, other.order)
        a, b = self._to_order(L), other._to_order(L)
        da, db = a._den, b._den
        g = gcd(da, db)
        ma, mb = db // g, da // g  # scale factors up to the lcm denominator
        common = da * ma
        vec = [x * ma + y * mb for x, y in zip(a._num, b._num)]
        return ExactScalar._normalize(L, [Fraction(v, common) for v in vec])

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(self.order, tuple(-x for x in self._num), self._den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            r = Fraction(other)
            den = self._den * r.denominator
            return ExactScalar._normalize(
                self.order, [Fraction(x * r.numerator, den) for x in self._num])
        if not isinstance(other, ExactScalar):
            return NotImplemented
        L = self.order * other.order // gcd(self.order, other.order)
        a, b = self._to_order(L), other._to_order(L)
        av, bv = a._num, b._num
        conv = [0] * (len(av) + len(bv) - 1)
        for i, ai in enumerate(av):
            if ai:
                for j, bj in enumerate(bv):
                    if bj:
                        conv[i + j] += ai * bj
        _reduce_vec(conv, L)
        den = a._den * b._den
        return ExactScalar._normalize(L, [Fraction(v, den) for v in conv])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> "ExactScalar":
        if e < 0:
            return self.inverse() ** (-e)
        result = ExactScalar.from_rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e > 1
            e >>= 1
            if base_needed:
                base = base * base
        return result

    def inverse(self) -> "ExactScalar":
        """Field inverse, by the extended Euclidean algorithm against Phi_L."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        Lp = cyclotomic_polynomial(self.order)
        phi = [Fraction(c) for c in Lp]
        poly = [Fraction(n, self._den) for n in self._num]
        u = _poly_xgcd_inverse(poly, phi)
        return ExactScalar._normalize(self.order, u)

    def conjugate(self) -> "ExactScalar":
        """Complex conjugation, zeta_L -> zeta_L^(L-1)."""
        L = self.order
        vec = [0] * L
        for k, c in enumerate(self._num):
            if c:
                vec[(L - k) % L] += c
        _reduce_vec(vec, L)
        return ExactScalar(L, tuple(vec), self._den)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is irrational: %r" % (self,))
        return Fraction(self._num[0], self._den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == other.order:
            return self._num == other._num and self._den == other._den
        L = self.order * other.order // gcd(self.order, other.order)
        a, b = self._to_order(L), other._to_order(L)
        return a._num == b._num and a._den == b._den

    __hash__ = None  # mutability-free but not canonical across orders

    # -- numerics ----------------------------------------------------------

    def eval_numeric(self, precision_bits: int = 64) -> "ComplexInterval":
        return eval_numeric(self, precision_bits)

    # -- presentation ------------------------------------------------------

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self._num):
            if not c:
                continue
            q = Fraction(c, self._den)
            if k == 0:
                terms.append(str(q))
            else:
                mon = "z%d" % self.order if k == 1 else "z%d^%d" % (self.order, k)
                if q == 1:
                    terms.append(mon)
                elif q == -1:
                    terms.append("-" + mon)
                else:
                    terms.append("%s*%s" % (q, mon))
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        """Portable form {order, coeffs}; coeffs are the phi(L) power-basis
        coordinates as exact rational strings.  Round-trips bit-exactly."""
        return {
            "order": self.order,
            "coeffs": [str(Fraction(n, self._den)) for n in self._num],
        }

    @staticmethod
    def from_json(data: dict) -> "ExactScalar":
        L = int(data["order"])
        if L < 1:
            raise ValueError("order must be positive")
        coeffs = [Fraction(s) for s in data["coeffs"]]
        if len(coeffs) != euler_phi(L):
            raise ValueError("expected %d coefficients for order %d"
                             % (euler_phi(L), L))
        return ExactScalar._normalize(L, coeffs)


def _coerce(x) -> "ExactScalar":
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar.from_rational(x)
    return NotImplemented


def _poly_xgcd_inverse(poly: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    """Return u with u*poly = 1 mod `mod` (mod irreducible, poly nonzero)."""
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def divmod_poly(a, b):
        a = list(a)
        q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
        inv = 1 / b[-1]
        for i in range(len(a) - 1, len(b) - 2, -1):
            c = a[i] * inv
            if c:
                q[i - len(b) + 1] = c
                for j, bj in enumerate(b):
                    a[i - len(b) + 1 + j] -= c * bj
        return trim(q), trim(a)

    r0, r1 = trim(list(mod)), trim(list(poly))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        # s_next = s0 - q*s1
        prod = [Fraction(0)] * (len(q) + len(s1) - 1 if q and s1 else 1)
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        s_next = [(s0[i] if i < len(s0) else Fraction(0)) -
                  (prod[i] if i < len(prod) else Fraction(0))
                  for i in range(max(len(s0), len(prod)))]
        r0, r1 = r1, r
        s0, s1 = s1, trim(s_next)
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible modulo cyclotomic")
    c = r0[0]
    return [x / c for x in s0]


# -- public constructors ---------------------------------------------------

def root_of_unity(num: int, den: int) -> ExactScalar:
    """e(num/den) = exp(2*pi*i*num/den) as an element of Q(zeta_den)."""
    if den < 1:
        raise ValueError("denominator must be positive")
    num %= den
    g = gcd(num, den)
    num, den = num // g, den // g
    vec = [0] * (num + 1)
    vec[num] = 1
    return ExactScalar._normalize(den, vec)


def from_rational(r: RationalLike) -> ExactScalar:
    return ExactScalar.from_rational(r)


_sqrt_prime_cache: dict[int, ExactScalar] = {}


def _sqrt_prime(p: int) -> ExactScalar:
    """The positive square root of a prime, via the quadratic Gauss sum.

    sum_k zeta_p^(k^2) equals sqrt(p) for p = 1 mod 4 and i*sqrt(p) for
    p = 3 mod 4 (with the principal embedding zeta_p = e(1/p)); sqrt(2) is
    zeta_8 + zeta_8^-1.  Each cached value is guarded by a 64-bit interval
    check that it lies on the positive real axis.
    """
    if p in _sqrt_prime_cache:
        return _sqrt_prime_cache[p]
    if p == 2:
        s = root_of_unity(1, 8) + root_of_unity(-1, 8)
    else:
        counts = [0] * p
        for k in range(p):
            counts[(k * k) % p] += 1
        gauss = ExactScalar._normalize(p, list(counts))
        s = gauss if p % 4 == 1 else gauss * root_of_unity(3, 4)
    box = eval_numeric(s, 64)
    if not (box.real_lo > 0 and box.imag_lo <= 0 <= box.imag_hi):
        raise AssertionError("square root of %d left the positive axis" % p)
    _sqrt_prime_cache[p] = s
    return s


def sqrt_rat(r: RationalLike) -> ExactScalar:
    """Exact positive square root of a positive rational.

    sqrt(a/b) is computed as sqrt(ab)/b, with the squarefree part of ab
    handled prime by prime through _sqrt_prime.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("sqrt_rat requires a positive rational, got %s" % r)
    n = r.numerator * r.denominator
    square, free = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            square *= d ** (e // 2)
            if e % 2:
                free *= d
        d += 1 if d == 2 else 2
    if n > 1:
        free *= n
    result = ExactScalar.from_rational(Fraction(square, r.denominator))
    for p in _prime_factors(free):
        result = result * _sqrt_prime(p)
    return result


def _prime_factors(n: int) -> Iterable[int]:
    d = 2
    while d * d <= n:
        if n % d == 0:
            yield d
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        yield n


def scalar_sum(terms: Iterable[ExactScalar]) -> ExactScalar:
    """Sum of many scalars with a single normalization at the end.

    Equivalent to repeated +, but embeds every term into the compositum once
    and accumulates integer vectors; matrix products build dots of size
    Delta_M from single-root terms, where the term-by-term path would
    renormalize at every step.
    """
    live = [t for t in terms if not t.is_zero()]
    if not live:
        return ExactScalar(1, (0,), 1)
    L = 1
    den = 1
    for t in live:
        L = L * t.order // gcd(L, t.order)
        den = den * t._den // gcd(den, t._den)
    acc = [0] * euler_phi(L)
    for t in live:
        scale = den // t._den
        vec = t._num if t.order == L else t._embedded_vec(L)
        for k, c in enumerate(vec):
            if c:
                acc[k] += c * scale
    return ExactScalar._normalize(L, [Fraction(v, den) for v in acc])


# -- functional aliases for the operator layer -----------------------------

def scalar_add(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return a + b


def scalar_mul(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return a * b


def scalar_conj(a: ExactScalar) -> ExactScalar:
    return a.conjugate()


def scalar_eq(a: ExactScalar, b: ExactScalar) -> bool:
    return a == b


# -- rigorous numeric evaluation ------------------------------------------

class ComplexInterval(NamedTuple):
    """A rectangle [real_lo, real_hi] x [imag_lo, imag_hi] certified to
    contain the standard embedding of a scalar.  Endpoints are exact
    rationals recovered from the binary interval arithmetic."""

    real_lo: Fraction
    real_hi: Fraction
    imag_lo: Fraction
    imag_hi: Fraction

    @property
    def real_mid(self) -> Fraction:
        return (self.real_lo + self.real_hi) / 2

    @property
    def imag_mid(self) -> Fraction:
        return (self.imag_lo + self.imag_hi) / 2

    def to_complex(self) -> complex:
        return complex(self.real_mid, self.imag_mid)

    def contains_zero_imag(self) -> bool:
        return self.imag_lo <= 0 <= self.imag_hi


def _raw_mpf_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if man == 0:
        if raw == mpmath.libmp.fzero:
            return Fraction(0)
        raise ValueError("non-finite interval endpoint")
    value = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -value if sign else value


def _interval_bounds(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_mpf_to_fraction(lo), _raw_mpf_to_fraction(hi)


def eval_numeric(a: ExactScalar, precision_bits: int = 64) -> ComplexInterval:
    """Rigorous complex enclosure of a scalar at the given working precision."""
    if precision_bits < 32:
        raise ValueError("precision_bits must be at least 32")
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = precision_bits
        L = a.order
        re = iv.mpf(0)
        im = iv.mpf(0)
        two_pi = 2 * iv.pi
        for k, c in enumerate(a._num):
            if not c:
                continue
            coeff = iv.mpf(c) / a._den
            angle = two_pi * k / L
            re += coeff * iv.cos(angle)
            im += coeff * iv.sin(angle)
        re_lo, re_hi = _interval_bounds(re)
        im_lo, im_hi = _interval_bounds(im)
        return ComplexInterval(re_lo, re_hi, im_lo, im_hi)
    finally:
        iv.prec = old
