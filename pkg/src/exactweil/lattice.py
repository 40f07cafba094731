"""Integer lattices and their discriminant forms.

A lattice is given by its Gram matrix: a nondegenerate symmetric integer
matrix.  The discriminant group M*/M is presented through a Smith normal
form of the Gram matrix; each element carries a canonical lift to the dual
lattice (rational coordinates in the lattice basis), from which the
bilinear form mod 1 and the quadratic value gamma^2/2 are read off.

Enumeration of the full group is capped at delta <= 10**5 and raises
CapExceededError beyond that.
"""

from fractions import Fraction
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator, List, Optional, Sequence, Tuple

from .exact import ExactScalar, from_rational, root_of_unity

DFElement = Tuple[int, ...]
Vector = Tuple[Fraction, ...]

ENUMERATION_CAP = 10 ** 5


class CapExceededError(RuntimeError):
    """An operation would enumerate more elements than the cap allows."""


def _det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(rows)
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(
    rows: Sequence[Sequence[int]],
) -> Tuple[List[List[int]], List[List[int]], List[List[int]]]:
    """Return unimodular U, V and diagonal D with U*A*V = D, d_i | d_{i+1}.

    Input must be square and nonsingular.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if _det_int(rows) == 0:
        raise ValueError("matrix is singular")
    m = [list(map(int, r)) for r in rows]
    u = _identity(n)
    v = _identity(n)
    for t in range(n):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    if m[i][j] and (piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]])):
                        piv = (i, j)
            assert piv is not None  # nonsingular input always leaves a pivot
            if piv[0] != t:
                m[t], m[piv[0]] = m[piv[0]], m[t]
                u[t], u[piv[0]] = u[piv[0]], u[t]
            if piv[1] != t:
                for r in m:
                    r[t], r[piv[1]] = r[piv[1]], r[t]
                for r in v:
                    r[t], r[piv[1]] = r[piv[1]], r[t]
            clean = True
            for i in range(t + 1, n):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(n):
                        m[i][j] -= q * m[t][j]
                        u[i][j] -= q * u[t][j]
                    if m[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for r in m:
                        r[j] -= q * r[t]
                    for r in v:
                        r[j] -= q * r[t]
                    if m[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if m[i][j] % m[t][t]), None)
            if bad is None:
                break
            # fold the offending row into row t; the next pass shrinks the pivot
            for j in range(n):
                m[t][j] += m[bad[0]][j]
                u[t][j] += u[bad[0]][j]
        if m[t][t] < 0:
            for j in range(n):
                m[t][j] = -m[t][j]
                u[t][j] = -u[t][j]
    return u, m, v


def _fraction_matrix(rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def _mat_inv_fraction(rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(rows)
    a = _fraction_matrix(rows)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        scale = a[col][col]
        a[col] = [x / scale for x in a[col]]
        inv[col] = [x / scale for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def _signature_rec(mat: List[List[Fraction]]) -> int:
    n = len(mat)
    if n == 0:
        return 0
    for i in range(n):
        if mat[i][i] != 0:
            piv = mat[i][i]
            rest = [j for j in range(n) if j != i]
            sub = [[mat[r][s] - mat[r][i] * mat[i][s] / piv for s in rest] for r in rest]
            return (1 if piv > 0 else -1) + _signature_rec(sub)
    for i in range(n):
        for j in range(i + 1, n):
            if mat[i][j] != 0:
                # hyperbolic 2x2 block: inertia (+1, -1), net contribution 0
                b = mat[i][j]
                rest = [k for k in range(n) if k not in (i, j)]
                sub = [[mat[r][s] - (mat[r][i] * mat[s][j] + mat[r][j] * mat[s][i]) / b
                        for s in rest] for r in rest]
                return _signature_rec(sub)
    return 0


class GramLattice:
    """A nondegenerate integer lattice described by its Gram matrix."""

    __slots__ = ("gram", "rank", "is_even", "_df")

    def __init__(self, rows: Sequence[Sequence[int]]):
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("Gram matrix must be square and nonempty")
        gram = tuple(tuple(int(x) for x in r) for r in rows)
        if any(gram[i][j] != gram[j][i] for i in range(m) for j in range(m)):
            raise ValueError("Gram matrix must be symmetric")
        if _det_int(gram) == 0:
            raise ValueError("Gram matrix must be nondegenerate")
        self.gram = gram
        self.rank = m
        self.is_even = all(gram[i][i] % 2 == 0 for i in range(m))
        self._df: Optional["DiscriminantForm"] = None

    def det(self) -> int:
        return _det_int(self.gram)

    def delta(self) -> int:
        return abs(self.det())

    def signature(self) -> int:
        return _signature_rec(_fraction_matrix(self.gram))

    def dual_gram(self) -> List[List[Fraction]]:
        return _mat_inv_fraction(self.gram)

    def level(self) -> int:
        """Smallest N >= 1 with N * gamma^2/2 integral for all dual vectors."""
        inv = self.dual_gram()
        n = 1
        for i in range(self.rank):
            n = lcm(n, (inv[i][i] / 2).denominator)
            for j in range(i + 1, self.rank):
                n = lcm(n, inv[i][j].denominator)
        return n

    def discriminant_form(self) -> "DiscriminantForm":
        if self._df is None:
            self._df = DiscriminantForm(self)
        return self._df

    def __repr__(self) -> str:
        return f"GramLattice({[list(r) for r in self.gram]})"


def direct_sum(left: GramLattice, right: GramLattice) -> GramLattice:
    m, n = left.rank, right.rank
    rows = [[left.gram[i][j] if j < m else 0 for j in range(m + n)] for i in range(m)]
    rows += [[0 if j < m else right.gram[i - m][j - m] for j in range(m + n)]
             for i in range(m, m + n)]
    return GramLattice(rows)


def interesting_primes(lattice: GramLattice) -> set:
    """Primes dividing the discriminant (equivalently the level)."""
    from .numth import prime_factors

    return set(prime_factors(lattice.delta()))


class PPart:
    """The p-Sylow component of a discriminant form.

    Elements are kept in the coordinates of the parent group; `project` is
    the idempotent parent -> p-part, and `elements` enumerates the p-part
    in the canonical order of its cyclic factors.
    """

    __slots__ = ("parent", "p", "orders", "_positions", "_unit_gens", "delta")

    def __init__(self, parent: "DiscriminantForm", p: int):
        self.parent = parent
        self.p = p
        self.orders: List[int] = []
        self._positions: List[int] = []
        self._unit_gens: List[int] = []
        for i, d in enumerate(parent.orders):
            e = 0
            q = 1
            while d % (q * p) == 0:
                q *= p
                e += 1
            if e == 0:
                continue
            m_i = d // q
            # generator of the p-part of Z/d: the idempotent 1 mod q, 0 mod m_i
            g = (m_i * pow(m_i, -1, q)) % d
            self.orders.append(q)
            self._positions.append(i)
            self._unit_gens.append(g)
        self.delta = prod(self.orders) if self.orders else 1

    def project(self, elem: DFElement) -> DFElement:
        out = [0] * len(self.parent.orders)
        for q, i, g in zip(self.orders, self._positions, self._unit_gens):
            out[i] = (elem[i] * g) % self.parent.orders[i]
        return tuple(out)

    def elements(self) -> List[DFElement]:
        if self.delta > ENUMERATION_CAP:
            raise CapExceededError(f"p-part has {self.delta} elements")
        out = []
        for coords in product(*(range(q) for q in self.orders)):
            e = [0] * len(self.parent.orders)
            for a, i, g, q in zip(coords, self._positions, self._unit_gens, self.orders):
                e[i] = (a * g) % self.parent.orders[i]
            out.append(tuple(e))
        return out if out else [self.parent.zero()]


class DiscriminantForm:
    """The finite quadratic module M*/M of a lattice.

    Elements are tuples of residues against `orders`.  The canonical lift
    of an element is the corresponding combination of the stored dual-basis
    generators; quadratic values use that lift, reduced mod 1 for even
    lattices and mod 1/2 for odd ones.
    """

    __slots__ = ("lattice", "orders", "gens", "delta", "signature", "level",
                 "exponent", "_u", "_d_full")

    def __init__(self, lattice: GramLattice):
        self.lattice = lattice
        u, d, v = smith_normal_form(lattice.gram)
        m = lattice.rank
        keep = [i for i in range(m) if d[i][i] > 1]
        self.orders = tuple(d[i][i] for i in keep)
        self.gens: Tuple[Vector, ...] = tuple(
            tuple(Fraction(v[r][i], d[i][i]) for r in range(m)) for i in keep)
        self.delta = lattice.delta()
        assert prod(self.orders, start=1) == self.delta
        self.signature = lattice.signature()
        self.level = lattice.level()
        self.exponent = self.orders[-1] if self.orders else 1
        self._u = u
        self._d_full = [d[i][i] for i in range(m)]

    # -- group structure ------------------------------------------------

    def zero(self) -> DFElement:
        return (0,) * len(self.orders)

    def add(self, x: DFElement, y: DFElement) -> DFElement:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: DFElement) -> DFElement:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def smul(self, c: int, x: DFElement) -> DFElement:
        return tuple((c * a) % d for a, d in zip(x, self.orders))

    def elements(self) -> List[DFElement]:
        if self.delta > ENUMERATION_CAP:
            raise CapExceededError(f"discriminant group has {self.delta} elements")
        return [coords for coords in product(*(range(d) for d in self.orders))] \
            if self.orders else [()]

    # -- lifts and values ------------------------------------------------

    def lift(self, x: DFElement) -> Vector:
        m = self.lattice.rank
        out = [Fraction(0)] * m
        for a, g in zip(x, self.gens):
            for r in range(m):
                out[r] += a * g[r]
        return tuple(out)

    def norm_of_lift(self, vec: Sequence[Fraction]) -> Fraction:
        """gamma^2 = vec^T G vec for an explicit dual vector."""
        g = self.lattice.gram
        m = self.lattice.rank
        return sum(vec[i] * g[i][j] * vec[j] for i in range(m) for j in range(m))

    def pairing_of_lifts(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
        g = self.lattice.gram
        m = self.lattice.rank
        return sum(a[i] * g[i][j] * b[j] for i in range(m) for j in range(m))

    def pairing(self, x: DFElement, y: DFElement) -> Fraction:
        return self.pairing_of_lifts(self.lift(x), self.lift(y)) % 1

    def qval(self, x: DFElement) -> Fraction:
        """q(x) = x^2/2, mod 1 for even lattices and mod 1/2 for odd."""
        val = self.norm_of_lift(self.lift(x)) / 2
        return val % 1 if self.lattice.is_even else val % Fraction(1, 2)

    def q_of_lift(self, vec: Sequence[Fraction]) -> Fraction:
        return self.norm_of_lift(vec) / 2

    # -- classes from dual vectors ---------------------------------------

    def class_of_dual_vector(self, vec: Sequence[Fraction]) -> DFElement:
        """The class in M*/M of an honest dual vector (G*vec integral)."""
        g = self.lattice.gram
        m = self.lattice.rank
        y = [sum(Fraction(g[i][j]) * vec[j] for j in range(m)) for i in range(m)]
        if any(t.denominator != 1 for t in y):
            raise ValueError("vector is not in the dual lattice")
        coords = []
        for i, d in enumerate(self._d_full):
            s = sum(self._u[i][j] * y[j].numerator for j in range(m))
            if d > 1:
                coords.append(s % d)
        return tuple(coords)

    def class_from_dual_vector(self, vec: Sequence[Fraction], p: int) -> DFElement:
        """Class in the p-part of a p-local dual vector.

        The vector may have denominators coprime to p; its class is read
        off p-adically and set to zero away from p.
        """
        g = self.lattice.gram
        m = self.lattice.rank
        y = [sum(Fraction(g[i][j]) * vec[j] for j in range(m)) for i in range(m)]
        if any(t.denominator % p == 0 for t in y):
            raise ValueError("vector is not p-locally dual")
        coords = []
        for i, d in enumerate(self._d_full):
            s = sum(Fraction(self._u[i][j]) * y[j] for j in range(m))
            if d == 1:
                continue
            q = 1
            while d % (q * p) == 0:
                q *= p
            if q == 1:
                coords.append(0)
                continue
            m_i = d // q
            res = (s.numerator * pow(s.denominator, -1, q)) % q
            # CRT: res mod q, zero mod the prime-to-p part
            coords.append((res * m_i * pow(m_i, -1, q)) % d)
        return tuple(coords)

    # -- p-parts and c-indexed subsets ------------------------------------

    def p_part(self, p: int) -> PPart:
        return PPart(self, p)

    def subsets_c(self, c: int) -> Tuple[List[DFElement], List[DFElement]]:
        """Kernel and image of multiplication by c, as element lists."""
        kernel_steps = []
        image_steps = []
        size_k = 1
        for d in self.orders:
            g = gcd(c, d)
            kernel_steps.append(range(0, d, d // g))
            image_steps.append(range(0, d, g))
            size_k *= g
        if max(size_k, self.delta // size_k) > ENUMERATION_CAP:
            raise CapExceededError("c-subsets exceed the enumeration cap")
        kernel = [x for x in product(*kernel_steps)] if self.orders else [()]
        image = [x for x in product(*image_steps)] if self.orders else [()]
        return kernel, image

    def kernel_generators(self, c: int) -> List[DFElement]:
        out = []
        for i, d in enumerate(self.orders):
            g = gcd(c, d)
            if g > 1:
                e = [0] * len(self.orders)
                e[i] = d // g
                out.append(tuple(e))
        return out

    def coset_Dcstar(self, c: int) -> List[DFElement]:
        """All beta with c*q(mu) + (beta, mu) = 0 mod 1 on the c-kernel.

        For odd lattices c must be even, so that c*q(mu) is independent of
        the lift; odd c on odd lattices is the caller's business.
        """
        if not self.lattice.is_even and c % 2:
            raise ValueError("odd lattice requires even c here")
        gens = self.kernel_generators(c)
        targets = [(-c * self.qval(mu)) % 1 for mu in gens]
        lifts = [self.lift(mu) for mu in gens]
        out = []
        for beta in self.elements():
            bl = self.lift(beta)
            if all((self.pairing_of_lifts(bl, ml)) % 1 == t
                   for ml, t in zip(lifts, targets)):
                out.append(beta)
        return out

    def beta_c_sq_half(self, c: int, x_c: DFElement, beta: DFElement) -> Fraction:
        """c*alpha^2/2 + (x_c, alpha) mod 1, where beta = x_c + c*alpha."""
        if c == 0:
            if beta != x_c:
                raise ValueError("for c = 0 only beta = x_c is admissible")
            return Fraction(0)
        diff = self.add(beta, self.neg(x_c))
        alpha = []
        for r, d in zip(diff, self.orders):
            g = gcd(c, d)
            if r % g:
                raise ValueError("beta is not in the x_c coset")
            alpha.append(((r // g) * pow(c // g, -1, d // g)) % d)
        alpha_t = tuple(alpha)
        val = c * self.qval(alpha_t) + self.pairing(x_c, alpha_t)
        return val % 1

    # -- identities -------------------------------------------------------

    def milgram_sum(self) -> ExactScalar:
        """Sum of e(gamma^2/2) over the group; even lattices only."""
        if not self.lattice.is_even:
            raise ValueError("Milgram sum needs an even lattice")
        total = from_rational(0)
        for x in self.elements():
            q = self.qval(x)
            total = total + root_of_unity(q.numerator, q.denominator)
        return total

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "quad": [str(self.qval(self._basis_elem(i))) for i in range(len(self.orders))],
            "bilinear": [[str(self.pairing(self._basis_elem(i), self._basis_elem(j)))
                          for j in range(len(self.orders))]
                         for i in range(len(self.orders))],
            "delta": self.delta,
            "signature": self.signature,
            "level": self.level,
        }

    def _basis_elem(self, i: int) -> DFElement:
        e = [0] * len(self.orders)
        e[i] = 1
        return tuple(e)
