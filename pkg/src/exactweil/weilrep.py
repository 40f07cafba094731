"""The Weil representation: generator matrices, oracles, closed formula.

A lattice M acts through its discriminant form D_M = M*/M on the group
algebra C[D_M]; the metaplectic group over SL_2(Z) acts on that space by a
finite unitary representation rho_M.  This module evaluates rho_M three ways:

  * generator words: decompose the matrix into T and S steps and multiply
    the generator matrices, tracking the metaplectic sign exactly;
  * the direct r0 character sum over M/cM (for c != 0), which gives the
    operator up to a single scalar;
  * the closed local-to-global formula: a product of p-adic root-of-unity
    factors xi_p times one character sum over a coset of D_M.

The routes share no formulas, so their exact agreement is the central
correctness check of the package.  Odd lattices are supported on the index-3
parity subgroup (ac and bd even), where T^2 and S generate.

All operator entries are ExactScalar values; operator equality is decidable
and the tests use it with zero tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (ExactScalar, from_rational, root_of_unity, scalar_sum,
                    sqrt_rat)
from .jordan import (BRUTE_CAP, choose_xc, jordan_decompose, scale_component,
                     weil_index_component, weil_index_lattice)
from .lattice import (CapExceededError, DFElement, DiscriminantForm,
                      GramLattice, interesting_primes)
from .metaplectic import (MpElement, SL2, decompose_ST, decompose_T2S,
                          gamma_odd_member, word_mp)
from .numth import eps_parity, legendre, two_over, valuation_split

_ONE = from_rational(1)
_ZERO = from_rational(0)


def _e(x: Fraction) -> ExactScalar:
    """e(x) = exp(2 pi i x) for a rational x."""
    x = Fraction(x) % 1
    return root_of_unity(x.numerator, x.denominator)


# -- operators -------------------------------------------------------------


class WeilOperator:
    """A square matrix over ExactScalar in the canonical basis (e_gamma).

    `labels` lists the basis elements in order; entry [i][j] is the
    coefficient of e_{labels[i]} in the image of e_{labels[j]}.  Full-space
    operators are labelled by DiscriminantForm.elements(); the p-part
    generator matrices are labelled by the p-part elements.
    """

    __slots__ = ("labels", "dim", "entries", "form", "_index")

    def __init__(self, labels: Sequence[DFElement],
                 entries: List[List[ExactScalar]],
                 form: Optional[DiscriminantForm] = None):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.entries = entries
        self.form = form
        self._index: Dict[DFElement, int] = {g: i for i, g in enumerate(self.labels)}

    @staticmethod
    def identity(labels: Sequence[DFElement],
                 form: Optional[DiscriminantForm] = None) -> "WeilOperator":
        n = len(labels)
        ent = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
        return WeilOperator(labels, ent, form)

    def index_of(self, elem: DFElement) -> int:
        return self._index[elem]

    def column(self, j: int) -> List[ExactScalar]:
        return [self.entries[i][j] for i in range(self.dim)]

    def scale(self, s: ExactScalar) -> "WeilOperator":
        ent = [[s * x for x in row] for row in self.entries]
        return WeilOperator(self.labels, ent, self.form)

    def scale_columns(self, phases: Sequence[ExactScalar]) -> "WeilOperator":
        """Right multiplication by the diagonal operator diag(phases)."""
        ent = [[row[j] * phases[j] for j in range(self.dim)]
               for row in self.entries]
        return WeilOperator(self.labels, ent, self.form)

    def __mul__(self, other) -> "WeilOperator":
        if isinstance(other, WeilOperator):
            if self.dim != other.dim:
                raise ValueError("operator dimensions differ")
            n = self.dim
            cells: List[List[List[ExactScalar]]] = \
                [[[] for _ in range(n)] for _ in range(n)]
            for k in range(n):
                col_k = [self.entries[i][k] for i in range(n)]
                live = [i for i in range(n) if not col_k[i].is_zero()]
                row_k = other.entries[k]
                for j in range(n):
                    b = row_k[j]
                    if b.is_zero():
                        continue
                    for i in live:
                        cells[i][j].append(col_k[i] * b)
            ent = [[scalar_sum(cells[i][j]) for j in range(n)] for i in range(n)]
            return WeilOperator(self.labels, ent, self.form)
        if isinstance(other, (int, Fraction, ExactScalar)):
            s = other if isinstance(other, ExactScalar) else from_rational(other)
            return self.scale(s)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            s = other if isinstance(other, ExactScalar) else from_rational(other)
            return self.scale(s)
        return NotImplemented

    def conj_transpose(self) -> "WeilOperator":
        n = self.dim
        ent = [[self.entries[j][i].conjugate() for j in range(n)]
               for i in range(n)]
        return WeilOperator(self.labels, ent, self.form)

    def is_identity(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                target = _ONE if i == j else _ZERO
                if self.entries[i][j] != target:
                    return False
        return True

    def is_unitary(self) -> bool:
        return (self * self.conj_transpose()).is_identity()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeilOperator):
            return NotImplemented
        if self.dim != other.dim or self.labels != other.labels:
            return False
        return all(self.entries[i][j] == other.entries[i][j]
                   for i in range(self.dim) for j in range(self.dim))

    __hash__ = None

    def __repr__(self) -> str:
        return "WeilOperator(dim=%d)" % self.dim

    def to_json(self, precision_bits: Optional[int] = None) -> dict:
        out = {
            "dim": self.dim,
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }
        if precision_bits is not None:
            numeric = []
            for row in self.entries:
                num_row = []
                for x in row:
                    box = x.eval_numeric(precision_bits)
                    num_row.append([float(box.real_mid), float(box.imag_mid)])
                numeric.append(num_row)
            out["entries_numeric"] = numeric
        return out


# -- generator matrices ----------------------------------------------------


def rho_T(form: DiscriminantForm) -> WeilOperator:
    """rho(T): the diagonal operator e_gamma -> e(gamma^2/2) e_gamma."""
    if not form.lattice.is_even:
        raise ValueError("rho(T) requires an even lattice; "
                         "T is outside the parity subgroup of an odd one")
    elems = form.elements()
    n = len(elems)
    ent = [[_e(form.qval(elems[i])) if i == j else _ZERO for j in range(n)]
           for i in range(n)]
    return WeilOperator(elems, ent, form)


def rho_S(form: DiscriminantForm) -> WeilOperator:
    """rho(S): the normalized Fourier transform of the discriminant form.

    Entry (delta, gamma) is zeta_8^(-sgn) e(-(gamma,delta)) / sqrt(Delta);
    the same formula covers odd lattices, whose S lies in the parity
    subgroup.
    """
    elems = form.elements()
    n = len(elems)
    coeff = root_of_unity(-form.signature, 8) * sqrt_rat(Fraction(1, form.delta))
    ent = [[coeff * _e(-form.pairing(elems[j], elems[i])) for j in range(n)]
           for i in range(n)]
    return WeilOperator(elems, ent, form)


def rho_Z(form: DiscriminantForm) -> WeilOperator:
    """rho(Z) = rho(S)^2: e_gamma -> zeta_8^(-2 sgn) e_{-gamma}."""
    elems = form.elements()
    n = len(elems)
    coeff = root_of_unity(-2 * form.signature, 8)
    ent = [[_ZERO] * n for _ in range(n)]
    idx = {g: i for i, g in enumerate(elems)}
    for j, g in enumerate(elems):
        ent[idx[form.neg(g)]][j] = coeff
    return WeilOperator(elems, ent, form)


def rho_p_generators(lattice: GramLattice, p: int) -> Tuple[WeilOperator, WeilOperator]:
    """The action of T and S on the p-part of the discriminant form.

    T_p is diagonal with the p-adic characters of gamma^2/2; S_p carries the
    coefficient conj(gamma(f_p)) / sqrt(Delta_p).  Tensoring over p recovers
    rho_T and rho_S (see tensor_check).
    """
    if not lattice.is_even:
        raise ValueError("p-part generators are defined for even lattices")
    form = lattice.discriminant_form()
    part = form.p_part(p)
    elems = part.elements()
    n = len(elems)
    t_ent = [[_e(form.qval(elems[i])) if i == j else _ZERO for j in range(n)]
             for i in range(n)]
    coeff = weil_index_lattice(lattice, p).conjugate() \
        * sqrt_rat(Fraction(1, part.delta))
    s_ent = [[coeff * _e(-form.pairing(elems[j], elems[i])) for j in range(n)]
             for i in range(n)]
    return (WeilOperator(elems, t_ent, form), WeilOperator(elems, s_ent, form))


# -- the generator-word oracle ---------------------------------------------


def _t_phases(form: DiscriminantForm, k: int) -> List[ExactScalar]:
    return [_e(k * form.qval(g)) for g in form.elements()]


def rho_oracle(lattice: GramLattice, x: MpElement) -> WeilOperator:
    """Evaluate rho_M(x) by multiplying generator matrices along a word.

    The word is an exact decomposition of the matrix (T and S steps for even
    lattices, T^2 and S steps for odd ones); the metaplectic sign of the
    word is recomputed through the cocycle and a mismatch against the
    requested sign is corrected by rho(Z^2) = (-1)^sgn.  No closed-formula
    machinery enters, which is what makes this an oracle.
    """
    form = lattice.discriminant_form()
    if lattice.is_even:
        word = decompose_ST(x.mat)
    else:
        word = decompose_T2S(x.mat)
    op = WeilOperator.identity(form.elements(), form)
    s_op: Optional[WeilOperator] = None
    s_inv: Optional[WeilOperator] = None
    for sym, k in word:
        if sym == "T":
            op = op.scale_columns(_t_phases(form, k))
            continue
        if s_op is None:
            s_op = rho_S(form)
            s_inv = s_op.conj_transpose()
        factor = s_op if k > 0 else s_inv
        for _ in range(abs(k)):
            op = op * factor
    achieved = word_mp(word)
    assert achieved.mat == x.mat
    if achieved.eps != x.eps:
        op = op.scale(from_rational(-1 if form.signature % 2 else 1))
    return op


# -- the direct r0 sum -----------------------------------------------------


def r0_direct(lattice: GramLattice, mat: SL2) -> WeilOperator:
    """The character sum over M/cM; equals rho_M up to one scalar.

    Entry (delta, gamma) is the sum of
    e(d/c * gamma^2/2 - (gamma, delta + eta)/c + a/c * (delta + eta)^2/2)
    over representatives eta of M/cM, normalized by 1/(|c|^(m/2) sqrt Delta).
    Lifts are the canonical ones; changing a lift permutes the eta range, so
    the value is well defined.
    """
    if mat.c == 0:
        raise ValueError("the r0 sum requires c != 0")
    m = lattice.rank
    if abs(mat.c) ** m > BRUTE_CAP:
        raise CapExceededError("M/cM has %d^%d elements" % (abs(mat.c), m))
    form = lattice.discriminant_form()
    elems = form.elements()
    n = len(elems)
    lifts = [form.lift(g) for g in elems]
    a, b, c, d = mat.a, mat.b, mat.c, mat.d
    norm = sqrt_rat(Fraction(1, abs(c) ** m * form.delta))
    q_gamma = [form.q_of_lift(v) for v in lifts]
    ent: List[List[ExactScalar]] = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        delta_lift = lifts[i]
        shifted = []
        for eta in product(range(abs(c)), repeat=m):
            vec = tuple(delta_lift[r] + eta[r] for r in range(m))
            shifted.append((vec, form.q_of_lift(vec)))
        for j in range(n):
            gamma_lift = lifts[j]
            base = Fraction(d, c) * q_gamma[j]
            terms = []
            for vec, qv in shifted:
                pair = form.pairing_of_lifts(gamma_lift, vec)
                terms.append(_e(base - pair / c + Fraction(a, c) * qv))
            ent[i][j] = norm * scalar_sum(terms)
    return WeilOperator(elems, ent, form)


# -- local factors ---------------------------------------------------------


def _unit_at(x: int, p: int, zero_default: int = 1) -> int:
    """The p-adic unit part of an integer, signed; zero maps to the default."""
    if x == 0:
        return zero_default
    return int(valuation_split(x, p).unit_part)


def xi_p(lattice: GramLattice, mat: SL2, eps: int, p: int) -> ExactScalar:
    """The local root of unity xi_p of the closed formula.

    For odd p this is the quadratic symbol (a_p / Delta_p) times the product
    of conjugate Weil indices of the components of scale q not dividing c,
    scaled by a_p c.  At p = 2 the quadratic symbols in a_2 and c_2 and the
    power gamma(f_2)^(a_2 - 1) enter as well.  For a = 0 the unit a_p is
    taken to be 1 (the value does not depend on the choice); for c = 0 the
    component product is empty and c_2 = +1 by convention.
    """
    m = lattice.rank
    a, c = mat.a, mat.c
    decomp = jordan_decompose(lattice, p)
    a_p = _unit_at(a, p)
    # v_p(c) compared against component scales; c = 0 is divisible by all q.
    v = valuation_split(c, p).valuation if c else None
    comp_prod = _ONE
    if c != 0:
        for comp in decomp.components:
            if comp.e > v:
                scaled = scale_component(comp, a_p * c)
                comp_prod = comp_prod * weil_index_component(scaled).conjugate()
    delta_p = p ** sum(comp.e * comp.n for comp in decomp.components)
    if p != 2:
        return from_rational(legendre(a_p, delta_p)) * comp_prod
    c2 = _unit_at(c, 2)
    v2 = v or 0
    sign = eps ** m
    sign *= legendre(a, c2) ** m
    sign *= (-1) ** (m * eps_parity(a_p) * eps_parity(c2))
    sign *= two_over(a_p) ** (v2 * m)
    sign *= legendre(delta_p, a_p)
    gamma2 = weil_index_lattice(lattice, 2)
    return from_rational(sign) * gamma2 ** (a_p - 1) * comp_prod


def _xi_product(lattice: GramLattice, mat: SL2, eps: int) -> ExactScalar:
    # xi_p = 1 for p not dividing 2 Delta (tested), so the product is finite.
    out = _ONE
    for p in sorted(interesting_primes(lattice) | {2}):
        out = out * xi_p(lattice, mat, eps, p)
    return out


# -- the closed formula ----------------------------------------------------


def _kernel_size(form: DiscriminantForm, c: int) -> int:
    """Delta_{M,c}: the order of the kernel of multiplication by c."""
    out = 1
    for d in form.orders:
        out *= gcd(c, d)
    return out


def _rho_diagonal_block(form: DiscriminantForm, mat: SL2, eps: int) -> WeilOperator:
    """The c = 0 case: rho(A, eps) = delta^(-sgn) e(bd gamma^2/2) e_{d gamma},
    where delta = eps for a = d = 1 and -i eps for a = d = -1."""
    if mat.a == 1:
        delta = from_rational(eps)
    else:
        delta = root_of_unity(-1, 4) * eps
    coeff = delta ** (-(form.signature % 8))
    elems = form.elements()
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    ent = [[_ZERO] * n for _ in range(n)]
    for j, g in enumerate(elems):
        phase = (mat.b * mat.d * form.qval(g)) % 1
        ent[idx[form.smul(mat.d, g)]][j] = coeff * _e(phase)
    return WeilOperator(elems, ent, form)


def _closed_assembly(form: DiscriminantForm, mat: SL2,
                     coeff: ExactScalar, coset: List[DFElement],
                     x_c: DFElement) -> WeilOperator:
    """Sum the closed-formula phases over the c-star coset."""
    a, b, c, d = mat.a, mat.b, mat.c, mat.d
    elems = form.elements()
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    beta_data = [(beta, form.beta_c_sq_half(c, x_c, beta)) for beta in coset]
    ent = [[_ZERO] * n for _ in range(n)]
    for j, gamma in enumerate(elems):
        tail = (b * d * form.qval(gamma)) % 1
        d_gamma = form.smul(d, gamma)
        for beta, half_sq in beta_data:
            phase = (a * half_sq + b * form.pairing(gamma, beta) + tail) % 1
            ent[idx[form.add(beta, d_gamma)]][j] = coeff * _e(phase)
    return WeilOperator(elems, ent, form)


def rho_closed(lattice: GramLattice, x: MpElement) -> WeilOperator:
    """rho_M(x) for an even lattice by the closed formula.

    For c != 0 the operator is Pi_p xi_p * sqrt(Delta_{M,c}/Delta_M) times
    the character sum over the coset D_M^{c*}, with the distinguished class
    x_c entering the quadratic phases.  For c = 0 the operator is diagonal
    up to the index flip, with scalar delta^(-sgn).
    """
    if not lattice.is_even:
        raise ValueError("rho_closed handles even lattices; "
                         "use rho_closed_odd on the parity subgroup")
    form = lattice.discriminant_form()
    mat, eps = x.mat, x.eps
    if mat.c == 0:
        return _rho_diagonal_block(form, mat, eps)
    coeff = _xi_product(lattice, mat, eps) \
        * sqrt_rat(Fraction(_kernel_size(form, mat.c), form.delta))
    x_c, _ = choose_xc(jordan_decompose(lattice, 2), mat.c)
    coset = form.coset_Dcstar(mat.c)
    return _closed_assembly(form, mat, coeff, coset, x_c)


def _coset_odd_c(form: DiscriminantForm, c: int) -> List[DFElement]:
    """The c-star coset for an odd lattice and odd c.

    The scale-1 part of the kernel at 2 is trivial, so only the odd-part
    conditions survive; a value passes when its denominator is a power of 2,
    since the half-integer ambiguity of q on an odd lattice is invisible to
    the odd-prime characters.
    """
    gens = form.kernel_generators(c)
    out = []
    for beta in form.elements():
        ok = True
        for mu in gens:
            val = (c * form.qval(mu) + form.pairing(beta, mu)) % 1
            den = val.denominator
            if den & (den - 1):
                ok = False
                break
        if ok:
            out.append(beta)
    return out


def rho_closed_odd(lattice: GramLattice, x: MpElement) -> WeilOperator:
    """rho_M(x) for an odd lattice, defined on the parity subgroup.

    The even-lattice formula carries over with one extra ingredient at 2:
    for odd c the distinguished element x_c is not dual, so the sum runs
    over the classes beta = c alpha with x_c dropped and xi_2 picks up the
    compensating factor zeta_8^(-a_2 c_2 t_1), with t_1 the oddity of the
    scale-1 component.  For even c (forcing odd a) nothing changes.
    """
    if lattice.is_even:
        raise ValueError("rho_closed_odd requires an odd lattice")
    if not gamma_odd_member(x.mat):
        raise ValueError("matrix outside the parity subgroup: "
                         "no Weil action is defined")
    form = lattice.discriminant_form()
    mat, eps = x.mat, x.eps
    if mat.c == 0:
        return _rho_diagonal_block(form, mat, eps)
    coeff = _xi_product(lattice, mat, eps) \
        * sqrt_rat(Fraction(_kernel_size(form, mat.c), form.delta))
    x_c, t1 = choose_xc(jordan_decompose(lattice, 2), mat.c)
    if mat.c % 2:
        a2 = _unit_at(mat.a, 2)
        c2 = _unit_at(mat.c, 2)
        if t1 is not None:
            coeff = coeff * root_of_unity(-a2 * c2 * t1, 8)
        coset = _coset_odd_c(form, mat.c)
    else:
        coset = form.coset_Dcstar(mat.c)
    return _closed_assembly(form, mat, coeff, coset, x_c)


# -- characters and kernels ------------------------------------------------


def phi_char(lattice: GramLattice, x: MpElement) -> ExactScalar:
    """The character phi on the preimage of Gamma_0(N).

    phi(x) is the scalar by which rho(x) acts on e_0; on Gamma_0^0(N) the
    whole operator is phi(x) e(bd gamma^2/2) e_{d gamma}.  For c != 0 the
    closed product of quadratic symbols applies; for c = 0 the scalar is
    delta^(-sgn), which extends the product (the two agree at a = 1).
    """
    if not lattice.is_even:
        raise ValueError("phi is defined for even lattices")
    N = lattice.level()
    a, c = x.mat.a, x.mat.c
    if c % N:
        raise ValueError("phi requires N | c (N = %d, c = %d)" % (N, c))
    m = lattice.rank
    form = lattice.discriminant_form()
    if c == 0:
        delta = from_rational(x.eps) if a == 1 else root_of_unity(-1, 4) * x.eps
        return delta ** (-(form.signature % 8))
    c2 = _unit_at(c, 2)
    v2 = valuation_split(c, 2).valuation
    v2_delta = valuation_split(form.delta, 2).valuation
    delta_two = 2 ** v2_delta
    delta_odd = form.delta // delta_two
    sign = x.eps ** m
    if m % 2:
        # With odd rank the level is even, hence a is odd and the symbols
        # with exponent m are defined; for even rank they are all 1.
        sign *= legendre(a, c2) ** m
        sign *= (-1) ** (m * eps_parity(a) * eps_parity(c2))
        sign *= two_over(a) ** (v2 * m)
    if delta_two > 1:
        sign *= legendre(delta_two, a)
    sign *= legendre(a, delta_odd)
    gamma2 = weil_index_lattice(lattice, 2)
    return from_rational(sign) * gamma2 ** (a - 1)


def kernel_descriptor(lattice: GramLattice) -> dict:
    """Which congruence subgroup the kernel of rho_M lies over, and how.

    The base group is Gamma(N) in exactly two cases, otherwise the larger
    group Gamma = {A in Gamma_0^0(N): a = d = 1 mod N-tilde}; the kernel is
    a double cover of the base group for even rank and a lift (one
    metaplectic sign per matrix) for odd rank.
    """
    if not lattice.is_even:
        raise ValueError("the kernel classification covers even lattices")
    form = lattice.discriminant_form()
    n_tilde = form.exponent
    N = lattice.level()
    m = lattice.rank
    gamma2 = weil_index_lattice(lattice, 2)
    gamma2_sq_one = (gamma2 * gamma2 == _ONE)
    v2_delta = valuation_split(form.delta, 2).valuation if form.delta > 1 else 0
    case_i = n_tilde % 4 == 2 and not gamma2_sq_one
    case_ii = m % 2 == 0 and n_tilde % 8 == 4 and v2_delta % 2 == 1
    return {
        "N": N,
        "N_tilde": n_tilde,
        "rank": m,
        "base_group": "Gamma(N)" if case_i or case_ii else "Gamma",
        "cover": "lift" if m % 2 else "double-cover",
        "case": "i" if case_i else ("ii" if case_ii else "generic"),
        "gamma_f2_squared_trivial": gamma2_sq_one,
        "v2_delta": v2_delta,
    }


def is_in_kernel(lattice: GramLattice, x: MpElement) -> bool:
    op = rho_closed(lattice, x) if lattice.is_even else rho_closed_odd(lattice, x)
    return op.is_identity()


# -- global consistency checks ---------------------------------------------


def braun_check(lattice: GramLattice, c: int) -> bool:
    """Braun's formula: sum over M/cM of e(eta^2/2c) against the closed side.

    Requires N | c; the right side is zeta_8^sgn |c|^(m/2) sqrt(Delta),
    conjugated for negative c.  Both sides are computed exactly.
    """
    N = lattice.level()
    if c == 0 or c % N:
        raise ValueError("Braun's formula needs a nonzero c with N | c")
    m = lattice.rank
    if abs(c) ** m > BRUTE_CAP:
        raise CapExceededError("M/cM has %d^%d elements" % (abs(c), m))
    form = lattice.discriminant_form()
    terms = []
    for eta in product(range(abs(c)), repeat=m):
        vec = tuple(Fraction(t) for t in eta)
        terms.append(_e(form.q_of_lift(vec) / c))
    left = scalar_sum(terms)
    right = root_of_unity(lattice.signature(), 8) \
        * sqrt_rat(Fraction(abs(c) ** m * form.delta))
    if c < 0:
        right = right.conjugate()
    return left == right


def weil_reciprocity_check(lattice: GramLattice) -> bool:
    """Product formula for the Weil indices: Pi_p gamma(f_p) = zeta_8^sgn."""
    prod_all = _ONE
    for p in sorted(interesting_primes(lattice) | {2}):
        prod_all = prod_all * weil_index_lattice(lattice, p)
    return prod_all == root_of_unity(lattice.signature(), 8)


def tensor_check(lattice: GramLattice) -> bool:
    """The generator matrices factor as tensor products over the p-parts."""
    if not lattice.is_even:
        raise ValueError("the tensor comparison requires an even lattice")
    form = lattice.discriminant_form()
    parts = []
    for p in sorted(interesting_primes(lattice)):
        t_p, s_p = rho_p_generators(lattice, p)
        parts.append((form.p_part(p), t_p, s_p))
    full_t = rho_T(form)
    full_s = rho_S(form)
    elems = form.elements()
    for j, gamma in enumerate(elems):
        t_val = _ONE
        for part, t_p, s_p in parts:
            k = t_p.index_of(part.project(gamma))
            t_val = t_val * t_p.entries[k][k]
        if t_val != full_t.entries[j][j]:
            return False
        for i, delta in enumerate(elems):
            s_val = _ONE
            for part, t_p, s_p in parts:
                s_val = s_val * s_p.entries[s_p.index_of(part.project(delta))][
                    s_p.index_of(part.project(gamma))]
            if s_val != full_s.entries[i][j]:
                return False
    return True
