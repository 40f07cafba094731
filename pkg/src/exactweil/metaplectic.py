"""The metaplectic double cover of SL2(Z) and its local cocycles.

Elements of Mp2(Z) are pairs (A, eps) multiplied through the real-place
Kubota cocycle; this realizes the branch convention arg sqrt(j(A, tau)) in
[-pi/2, pi/2) without ever materializing the analytic square root.  The
same five-case cocycle evaluated through a p-adic Hilbert symbol gives the
covers of SL2(Q_p) used by the lifts.
"""

from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .numth import REAL_PLACE, hilbert, legendre, two_over, valuation_split

Rational = Union[int, Fraction]
Token = Tuple[str, int]
Word = List[Token]


class SL2:
    """A determinant-one 2x2 matrix with rational entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Rational, b: Rational, c: Rational, d: Rational):
        if a * d - b * c != 1:
            raise ValueError("determinant must be 1")
        self.a, self.b, self.c, self.d = a, b, c, d

    def __mul__(self, other: "SL2") -> "SL2":
        return SL2(self.a * other.a + self.b * other.c,
                   self.a * other.b + self.b * other.d,
                   self.c * other.a + self.d * other.c,
                   self.c * other.b + self.d * other.d)

    def inverse(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a)

    def entries(self) -> Tuple[Rational, Rational, Rational, Rational]:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SL2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"SL2({self.a}, {self.b}, {self.c}, {self.d})"


IDENTITY = SL2(1, 0, 0, 1)
T_MAT = SL2(1, 1, 0, 1)
S_MAT = SL2(0, -1, 1, 0)


def kubota_cocycle(x: SL2, y: SL2, place) -> int:
    """The five-case 2-cocycle on SL2 at a real or p-adic place."""
    c, d = x.c, x.d
    g, h = y.c, y.d
    if c == 0 and g == 0:
        return hilbert(d, h, place)
    if c == 0:
        return hilbert(d, g, place)
    if g == 0:
        return hilbert(c, h, place)
    t = c * y.a + d * g  # the c-entry of the product
    if t == 0:
        return hilbert(-c, -g, place)
    return hilbert(c, g, place) * hilbert(t, -c * g, place)


def cgxde_form(c: Rational, g: Rational, d: Rational, e: Rational, place) -> int:
    """Case-split equivalent of the fifth cocycle case, for c, g, ce+dg != 0."""
    x = c * e + d * g
    if c == 0 or g == 0 or x == 0:
        raise ValueError("requires c, g and ce+dg nonzero")
    if d == 0:
        return hilbert(e, -c * g, place)
    if e == 0:
        return hilbert(d, -c * g, place)
    return hilbert(d, c * x, place) * hilbert(e, g * x, place) * hilbert(d, e, place)


class MpElement:
    """A matrix together with a sign: one of the two lifts to the cover."""

    __slots__ = ("mat", "eps")

    def __init__(self, mat: SL2, eps: int = 1):
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        self.mat = mat
        self.eps = eps

    def __eq__(self, other) -> bool:
        if not isinstance(other, MpElement):
            return NotImplemented
        return self.mat == other.mat and self.eps == other.eps

    def __hash__(self) -> int:
        return hash((self.mat, self.eps))

    def __repr__(self) -> str:
        return f"MpElement({self.mat!r}, {self.eps})"


MP_ONE = MpElement(IDENTITY, 1)
MP_T = MpElement(T_MAT, 1)
MP_S = MpElement(S_MAT, 1)


def mp_mul(x: MpElement, y: MpElement) -> MpElement:
    return MpElement(x.mat * y.mat,
                     kubota_cocycle(x.mat, y.mat, REAL_PLACE) * x.eps * y.eps)


def mp_inv(x: MpElement) -> MpElement:
    inv = x.mat.inverse()
    return MpElement(inv, x.eps * kubota_cocycle(x.mat, inv, REAL_PLACE))


MP_Z = mp_mul(MP_S, MP_S)


def word_matrix(word: Word) -> SL2:
    out = IDENTITY
    for kind, k in word:
        if kind == "T":
            out = out * SL2(1, k, 0, 1)
        else:
            out = out * (S_MAT if k == 1 else S_MAT.inverse())
    return out


def word_mp(word: Word) -> MpElement:
    """The metaplectic element of a word, all tokens taken with sign +1."""
    out = MP_ONE
    for kind, k in word:
        if kind == "T":
            out = mp_mul(out, MpElement(SL2(1, k, 0, 1), 1))
        else:
            out = mp_mul(out, MP_S if k == 1 else mp_inv(MP_S))
    return out


def _peel(mat: SL2, step: int) -> Word:
    """Right-multiply by T^k (k a multiple of step) and S until c = 0."""
    tail: Word = []
    cur = mat
    while cur.c != 0:
        if cur.d != 0:
            k = -step * round(Fraction(cur.d, step * cur.c))
            if abs(cur.d + k * cur.c) > abs(cur.d):
                k = 0
            if k:
                cur = cur * SL2(1, k, 0, 1)
                tail.append(("T", k))
        cur = cur * S_MAT
        tail.append(("S", 1))
    head: Word = []
    if cur.a == 1:
        if cur.b:
            head.append(("T", cur.b))
    else:
        head += [("S", 1), ("S", 1)]
        if cur.b:
            head.append(("T", -cur.b))
    for kind, k in reversed(tail):
        head.append(("T", -k) if kind == "T" else ("S", -1))
    return head


def decompose_ST(mat: SL2) -> Word:
    """A word in T-powers and S^(+-1) multiplying out to the matrix."""
    word = _peel(mat, 1)
    assert word_matrix(word) == mat
    return word


def gamma_odd_member(mat: SL2) -> bool:
    """Membership in the group where ac and bd are both even."""
    return (mat.a * mat.c) % 2 == 0 and (mat.b * mat.d) % 2 == 0


def decompose_T2S(mat: SL2) -> Word:
    """A word in even T-powers and S^(+-1); input must have ac, bd even."""
    if not gamma_odd_member(mat):
        raise ValueError("matrix has odd ac or bd")
    word = _peel(mat, 2)
    assert word_matrix(word) == mat
    assert all(kind == "S" or k % 2 == 0 for kind, k in word)
    return word


# -- lifts --------------------------------------------------------------


def in_gamma1_4(mat: SL2) -> bool:
    return mat.c % 4 == 0 and mat.a % 4 == 1 and mat.d % 4 == 1


def iota_lift(mat: SL2, p: int) -> int:
    """Sign of the local lift: (a, p^v(c)) at p; trivial when c = 0."""
    if p == 2 and not in_gamma1_4(mat):
        raise ValueError("the 2-adic lift needs a matrix 1 mod 4 with 4 | c")
    if mat.c == 0:
        return 1
    v = valuation_split(mat.c, p).valuation
    if v == 0:
        return 1
    return hilbert(mat.a, p ** v, p)


def i_map(x: MpElement) -> Tuple[SL2, int]:
    """Image in the 2-adic cover: eps is twisted by (a / odd part of c)."""
    if x.mat.c == 0:
        return x.mat, x.eps
    c2 = valuation_split(x.mat.c, 2).unit_part
    return x.mat, legendre(x.mat.a, int(c2)) * x.eps


def gamma4_lift(mat: SL2) -> MpElement:
    """The splitting over the group of matrices 1 mod 4 with 4 | c."""
    if not in_gamma1_4(mat):
        raise ValueError("matrix must be 1 mod 4 with 4 | c")
    if mat.c == 0:
        return MpElement(mat, 1)
    v, c2 = valuation_split(mat.c, 2)
    sign = two_over(mat.a) ** v * legendre(mat.a, int(c2))
    return MpElement(mat, sign)
