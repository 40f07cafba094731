"""p-adic Jordan decompositions, Weil indices, and local Gauss sums.

Decomposition works over rationals whose denominators are coprime to p, so
every step is exact.  For p = 2 a scale that mixes diagonal and even 2x2
blocks is fused and fully diagonalized; the trace of the resulting diagonal
units mod 8 is the oddity index t.  Symbols at p = 2 are not canonical
across different decompositions, but every value derived from them
downstream is.
"""

from fractions import Fraction
from itertools import product
from math import prod
from typing import List, Optional, Sequence, Tuple

from .exact import ExactScalar, from_rational, root_of_unity, sqrt_rat
from .lattice import CapExceededError, DFElement, GramLattice
from .numth import _unit_mod, char_p_value, legendre, prime_factors, two_over, valuation_split

BRUTE_CAP = 10 ** 6

Vector = Tuple[Fraction, ...]


def _check_prime(p: int) -> None:
    if p < 2 or prime_factors(p) != [p]:
        raise ValueError(f"{p} is not prime")


class JordanComponent:
    """One block q^(eps*n) (p odd) or q^(eps*n)_t / q^(eps*n)_II (p = 2)."""

    __slots__ = ("p", "e", "n", "eps", "t")

    def __init__(self, p: int, e: int, n: int, eps: int, t: Optional[int] = None):
        _check_prime(p)
        if e < 0 or n < 1 or eps not in (1, -1):
            raise ValueError("bad component data")
        if p != 2:
            if t is not None:
                raise ValueError("odd p has no oddity index")
        elif t is None:
            if n % 2:
                raise ValueError("type II needs even rank")
        else:
            t %= 8
            if (t - n) % 2:
                raise ValueError("t must have the parity of n")
            if n == 1 and eps != (1 if t in (1, 7) else -1):
                raise ValueError("rank-1 sign is determined by t")
            if n == 2 and t in (0, 4) and eps != (1 if t == 0 else -1):
                raise ValueError("rank-2 sign is determined by t = 0, 4")
        self.p = p
        self.e = e
        self.n = n
        self.eps = eps
        self.t = None if t is None else t % 8

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def is_type_II(self) -> bool:
        return self.p == 2 and self.t is None

    def symbol(self) -> str:
        sign = "+" if self.eps == 1 else "-"
        base = f"{self.q}^{sign}{self.n}"
        if self.p != 2:
            return base
        return f"{base}_II" if self.t is None else f"{base}_{self.t}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, JordanComponent):
            return NotImplemented
        return (self.p, self.e, self.n, self.eps, self.t) == \
            (other.p, other.e, other.n, other.eps, other.t)

    def __repr__(self) -> str:
        return f"JordanComponent({self.symbol()!r})"


class JordanDecomposition:
    __slots__ = ("lattice", "p", "components", "basis", "_spans")

    def __init__(self, lattice: GramLattice, p: int,
                 components: Sequence[JordanComponent],
                 basis: Sequence[Vector], spans: Sequence[Tuple[int, ...]]):
        self.lattice = lattice
        self.p = p
        self.components = tuple(components)
        self.basis = tuple(basis)
        self._spans = tuple(spans)

    def component_at(self, e: int) -> Optional[JordanComponent]:
        return next((c for c in self.components if c.e == e), None)

    def component_vectors(self, idx: int) -> Tuple[Vector, ...]:
        return tuple(self.basis[i] for i in self._spans[idx])

    def symbol(self) -> str:
        return " ".join(c.symbol() for c in self.components)


def _pair(gram: Sequence[Sequence[int]], u: Sequence[Fraction],
          v: Sequence[Fraction]) -> Fraction:
    m = len(u)
    return sum(u[i] * gram[i][j] * v[j] for i in range(m) for j in range(m))


def _val(x: Fraction, p: int) -> Optional[int]:
    return None if x == 0 else valuation_split(x, p).valuation


def jordan_decompose(lattice: GramLattice, p: int) -> JordanDecomposition:
    """Split the p-local lattice into scaled unimodular blocks.

    Returns components with strictly increasing exponent whose ranks sum
    to the rank of the lattice, plus the rational basis realizing them.
    """
    _check_prime(p)
    gram = lattice.gram
    m = lattice.rank
    vecs: List[List[Fraction]] = [[Fraction(int(i == j)) for j in range(m)]
                                  for i in range(m)]

    def pr(i: int, j: int) -> Fraction:
        return _pair(gram, vecs[i], vecs[j])

    def min_valuation(active: List[int]) -> int:
        vals = [_val(pr(i, j), p) for i in active for j in active if pr(i, j)]
        return min(v for v in vals if v is not None)

    def pivot(i: int, active: List[int]) -> None:
        d = pr(i, i)
        for k in active:
            if k != i and pr(k, i):
                f = pr(k, i) / d
                vecs[k] = [x - f * y for x, y in zip(vecs[k], vecs[i])]

    active = list(range(m))
    raw_blocks: List[Tuple[int, List[int]]] = []
    while active:
        v_min = min_valuation(active)
        diag = next((i for i in active if _val(pr(i, i), p) == v_min), None)
        if p != 2:
            if diag is None:
                i, j = next((i, j) for i in active for j in active
                            if i != j and _val(pr(i, j), p) == v_min)
                vecs[i] = [x + y for x, y in zip(vecs[i], vecs[j])]
                if _val(pr(i, i), p) != v_min:
                    # the other sign must work: the two attempts differ by 4*g_ij
                    vecs[i] = [x - 2 * y for x, y in zip(vecs[i], vecs[j])]
                assert _val(pr(i, i), p) == v_min
                diag = i
            pivot(diag, active)
            raw_blocks.append((v_min, [diag]))
            active.remove(diag)
        elif diag is not None:
            pivot(diag, active)
            raw_blocks.append((v_min, [diag]))
            active.remove(diag)
        else:
            i, j = next((i, j) for i in active for j in active
                        if i != j and _val(pr(i, j), p) == v_min)
            gii, gij, gjj = pr(i, i), pr(i, j), pr(j, j)
            det = gii * gjj - gij * gij
            for k in active:
                if k in (i, j):
                    continue
                ki, kj = pr(k, i), pr(k, j)
                if ki or kj:
                    x = (ki * gjj - kj * gij) / det
                    y = (kj * gii - ki * gij) / det
                    vecs[k] = [a - x * b - y * c
                               for a, b, c in zip(vecs[k], vecs[i], vecs[j])]
            raw_blocks.append((v_min, [i, j]))
            active.remove(i)
            active.remove(j)

    scales = sorted({e for e, _ in raw_blocks})
    components: List[JordanComponent] = []
    spans: List[Tuple[int, ...]] = []
    ordered: List[int] = []
    for e in scales:
        idxs = [i for be, block in raw_blocks for i in block if be == e]
        has_odd_diag = any(len(block) == 1 for be, block in raw_blocks if be == e)
        if p == 2 and has_odd_diag and len(idxs) > 1:
            _fuse_scale(gram, vecs, idxs, e)
        scale = Fraction(p) ** e
        n = len(idxs)
        if p != 2:
            det_unit = prod((pr(i, i) / scale for i in idxs), start=Fraction(1))
            components.append(JordanComponent(p, e, n, legendre(det_unit, p)))
        elif has_odd_diag:
            units = [pr(i, i) / scale for i in idxs]
            t = sum(_unit_mod(u, 8) for u in units) % 8
            eps = two_over(prod(units, start=Fraction(1)))
            components.append(JordanComponent(2, e, n, eps, t))
        else:
            det_unit = Fraction(1)
            for be, block in raw_blocks:
                if be == e:
                    i, j = block
                    det_unit *= (pr(i, i) * pr(j, j) - pr(i, j) ** 2) / scale ** 2
            components.append(JordanComponent(2, e, n, two_over(det_unit), None))
        spans.append(tuple(idxs))
        ordered.extend(idxs)

    decomp = JordanDecomposition(
        lattice, p, components,
        [tuple(vecs[i]) for i in range(m)], spans)
    _validate_blocks(decomp)
    return decomp


def _fuse_scale(gram, vecs, idxs: List[int], e: int) -> None:
    """Fully diagonalize one 2-adic scale that has an odd diagonal entry."""

    def pr(i, j):
        return _pair(gram, vecs[i], vecs[j])

    todo = list(idxs)
    last: Optional[int] = None
    while todo:
        i = next((i for i in todo if _val(pr(i, i), 2) == e), None)
        if i is None:
            # residual is even type: mix the last pivot back in to restore
            # an odd diagonal, and put that pivot back into play
            assert last is not None
            j = next(j for j in todo for k in todo
                     if j != k and _val(pr(j, k), 2) == e)
            vecs[j] = [x + y for x, y in zip(vecs[j], vecs[last])]
            todo.append(last)
            last = None
            continue
        d = pr(i, i)
        for k in todo:
            if k != i and pr(k, i):
                f = pr(k, i) / d
                vecs[k] = [x - f * y for x, y in zip(vecs[k], vecs[i])]
        todo.remove(i)
        last = i


def _validate_blocks(decomp: JordanDecomposition) -> None:
    lattice, p = decomp.lattice, decomp.p
    assert sum(c.n for c in decomp.components) == lattice.rank
    assert prod(c.q ** c.n for c in decomp.components) == \
        p ** valuation_split(lattice.delta(), p).valuation
    for idx, comp in enumerate(decomp.components):
        vec = decomp.component_vectors(idx)
        block = [[_pair(lattice.gram, u, v) for v in vec] for u in vec]
        det = _det_fraction(block)
        assert valuation_split(det, p).valuation == comp.e * comp.n
        for row in block:
            for x in row:
                assert x == 0 or valuation_split(x, p).valuation >= comp.e
    # distinct components are orthogonal
    for idx in range(len(decomp.components)):
        for jdx in range(idx + 1, len(decomp.components)):
            for u in decomp.component_vectors(idx):
                for v in decomp.component_vectors(jdx):
                    assert _pair(lattice.gram, u, v) == 0


def _det_fraction(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


# -- Weil indices -------------------------------------------------------


def weil_index_component(comp: JordanComponent) -> ExactScalar:
    """The 8th root of unity attached to one Jordan component."""
    if comp.p != 2:
        k = (comp.n * (1 - comp.q)) % 8
        value = root_of_unity(k, 8)
    else:
        value = root_of_unity(comp.t or 0, 8)
    return value if comp.eps ** comp.e == 1 else -value


def scale_component(comp: JordanComponent, x) -> JordanComponent:
    """The component of M(x): the form scaled by a nonzero rational x."""
    v, u = valuation_split(x, comp.p)
    if comp.e + v < 0:
        raise ValueError("scaling would produce a negative exponent")
    if comp.p != 2:
        return JordanComponent(comp.p, comp.e + v, comp.n,
                               comp.eps * legendre(u, comp.p) ** comp.n)
    t = None if comp.t is None else (comp.t * _unit_mod(u, 8)) % 8
    return JordanComponent(2, comp.e + v, comp.n,
                           comp.eps * two_over(u) ** comp.n, t)


def weil_index_scaled(comp: JordanComponent, a: int) -> ExactScalar:
    """Weil index of the component scaled by a unit, in closed form."""
    if a % comp.p == 0:
        raise ValueError("scaling unit must be coprime to p")
    gamma = weil_index_component(comp)
    en = comp.e * comp.n
    if comp.p != 2:
        return gamma if legendre(a, comp.p) ** en == 1 else -gamma
    return gamma ** (a % 8) * two_over(a) ** en


def weil_index_lattice(lattice: GramLattice, p: int) -> ExactScalar:
    out = from_rational(1)
    for comp in jordan_decompose(lattice, p).components:
        out = out * weil_index_component(comp)
    return out


# -- x_c and the local Gauss sums ---------------------------------------


def xc_vector(decomp: JordanDecomposition, v: int) -> Optional[Vector]:
    """Half the sum of the basis of the scale-2^v component, if odd type."""
    if decomp.p != 2:
        return None
    for idx, comp in enumerate(decomp.components):
        if comp.e == v and comp.t is not None:
            vec = decomp.component_vectors(idx)
            m = decomp.lattice.rank
            return tuple(sum(w[r] for w in vec) / 2 for r in range(m))
    return None


def choose_xc(decomp: JordanDecomposition, c: int) -> Tuple[DFElement, Optional[int]]:
    """The distinguished coset element x_c and its oddity index.

    Returns the zero class with index None when the component at scale
    2^(v_2(c)) is absent or of type II.  For an odd lattice and odd c the
    class is also reported as zero (the true half-sum is not dual); the
    caller compensates through the returned index.
    """
    if decomp.p != 2:
        raise ValueError("x_c lives at p = 2")
    if c == 0:
        raise ValueError("x_0 = 0 by convention; no component lookup")
    df = decomp.lattice.discriminant_form()
    v = valuation_split(c, 2).valuation
    comp = decomp.component_at(v)
    if comp is None or comp.t is None:
        return df.zero(), None
    if v == 0:
        return df.zero(), comp.t
    vec = xc_vector(decomp, v)
    cls = df.class_from_dual_vector(vec, 2)
    if df.delta <= 10 ** 5:
        for mu in df.kernel_generators(c):
            check = (c * df.qval(mu) + df.pairing(cls, mu)) % 1
            assert check == 0, "x_c must lie in the c-star coset"
    return cls, comp.t


def xc_phase(decomp: JordanDecomposition, a: int, c: int) -> ExactScalar:
    """chi_2(a/c * x_c^2/2) as the root of unity zeta_8^(a2 c2 t)."""
    _, t = choose_xc(decomp, c)
    if t is None:
        return from_rational(1)
    a2 = _unit_mod(valuation_split(a, 2).unit_part, 8) if a else 0
    c2 = _unit_mod(valuation_split(c, 2).unit_part, 8)
    return root_of_unity(a2 * c2 * t, 8)


def _local_kernel_size(decomp: JordanDecomposition, v: int) -> int:
    """Delta_{M,c}: the kernel of c on the p-part, from the symbols."""
    p = decomp.p
    return prod(c.q ** c.n if c.e <= v else p ** (v * c.n)
                for c in decomp.components)


def gauss_sum_closed(lattice: GramLattice, p: int, a: int, c: int) -> ExactScalar:
    """The closed value p^(m v/2) sqrt(Delta_{M,c}) delta of the local sum."""
    _check_prime(p)
    if c == 0:
        raise ValueError("c must be nonzero")
    if a % p == 0 and c % p == 0:
        raise ValueError("a and c must be coprime at p")
    decomp = jordan_decompose(lattice, p)
    v = valuation_split(c, p).valuation
    a_p = valuation_split(a, p).unit_part if a else 1
    delta = from_rational(1)
    for comp in decomp.components:
        if comp.e < v:
            delta = delta * weil_index_component(scale_component(comp, a_p * c))
    return sqrt_rat(p ** (lattice.rank * v) * _local_kernel_size(decomp, v)) * delta


def gauss_sum_brute(lattice: GramLattice, p: int, a: int, c: int) -> ExactScalar:
    """Direct summation of chi_p(a/c eta^2/2 + a (x_c, eta)/c) over M/cM.

    Over Z_p the quotient M/cM is (Z/p^v)^m; representatives are taken in
    the original basis.
    """
    _check_prime(p)
    if c == 0:
        raise ValueError("c must be nonzero")
    if a % p == 0 and c % p == 0:
        raise ValueError("a and c must be coprime at p")
    m = lattice.rank
    v = valuation_split(c, p).valuation
    if p ** (v * m) > BRUTE_CAP:
        raise CapExceededError("Gauss sum enumeration exceeds the cap")
    xc = None
    if p == 2:
        xc = xc_vector(jordan_decompose(lattice, 2), v)
    gram = lattice.gram
    total = from_rational(0)
    for eta in product(range(p ** v), repeat=m):
        norm = sum(eta[i] * gram[i][j] * eta[j] for i in range(m) for j in range(m))
        arg = Fraction(a, c) * Fraction(norm, 2)
        if xc is not None:
            pair = sum(xc[i] * gram[i][j] * eta[j] for i in range(m) for j in range(m))
            arg += Fraction(a, 1) * pair / c
        total = total + char_p_value(arg, p)
    return total
