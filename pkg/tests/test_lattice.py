"""Lattice invariants, Smith forms, and discriminant-form structure."""

from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from conftest import EVEN_GRAMS, ODD_GRAMS
from exactweil.exact import from_rational, root_of_unity, sqrt_rat
from exactweil.lattice import (
    CapExceededError,
    GramLattice,
    _det_int,
    _mat_mul,
    direct_sum,
    interesting_primes,
    smith_normal_form,
)

ALL_GRAMS = EVEN_GRAMS + ODD_GRAMS


def lattices():
    return [GramLattice(g) for g in ALL_GRAMS]


def test_smith_examples():
    _, d, _ = smith_normal_form([[1, 0], [0, 1]])
    assert d == [[1, 0], [0, 1]]
    _, d, _ = smith_normal_form([[2, 0], [0, 4]])
    assert (d[0][0], d[1][1]) == (2, 4)
    _, d, _ = smith_normal_form([[2, 1], [1, 2]])
    assert (d[0][0], d[1][1]) == (1, 3)
    with pytest.raises(ValueError):
        smith_normal_form([[1, 1], [1, 1]])


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=150, deadline=None)
def test_smith_properties(rows):
    if _det_int(rows) == 0:
        return
    u, d, v = smith_normal_form(rows)
    assert _mat_mul(_mat_mul(u, rows), v) == d
    assert abs(_det_int(u)) == 1 and abs(_det_int(v)) == 1
    diag = [d[i][i] for i in range(3)]
    assert all(x > 0 for x in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(2))
    assert all(d[i][j] == 0 for i in range(3) for j in range(3) if i != j)


def test_signature_examples():
    assert GramLattice([[2]]).signature() == 1
    assert GramLattice([[-2]]).signature() == -1
    assert GramLattice([[0, 1], [1, 0]]).signature() == 0
    assert GramLattice([[2, 1], [1, 2]]).signature() == 2
    assert GramLattice([[1, 0], [0, -3]]).signature() == 0


@given(st.sampled_from(ALL_GRAMS),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_signature_congruence_invariant(gram, entries):
    # Sylvester: P^T G P has the same signature for invertible P
    m = len(gram)
    p = [[entries[(i * m + j) % 4] for j in range(m)] for i in range(m)]
    for i in range(m):
        p[i][i] += 4  # push towards invertibility
    if _det_int(p) == 0:
        return
    pt = [[p[j][i] for j in range(m)] for i in range(m)]
    conj = _mat_mul(pt, _mat_mul(gram, p))
    assert GramLattice(conj).signature() == GramLattice(gram).signature()


def test_level_examples():
    assert GramLattice([[2]]).level() == 4
    assert GramLattice([[0, 1], [1, 0]]).level() == 1
    assert GramLattice([[2, 1], [1, 2]]).level() == 3
    assert GramLattice([[1]]).level() == 2


def test_level_divisibility_and_pfin():
    for lat in lattices():
        df = lat.discriminant_form()
        n, delta = lat.level(), lat.delta()
        assert (2 * delta) % n == 0
        assert delta % df.exponent == 0
        if lat.is_even:
            for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
                assert (delta % p == 0) == (n % p == 0)


def test_odd_rank_even_lattice_level_divisible_by_4():
    for gram in EVEN_GRAMS:
        lat = GramLattice(gram)
        if lat.rank % 2 == 1:
            assert lat.level() % 4 == 0


def test_validation():
    with pytest.raises(ValueError):
        GramLattice([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        GramLattice([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        GramLattice([[1, 2]])
    assert GramLattice([[2]]).is_even
    assert not GramLattice([[1, 0], [0, 2]]).is_even


def test_discriminant_form_examples():
    d1 = GramLattice([[2]]).discriminant_form()
    assert d1.orders == (2,)
    assert d1.qval((1,)) == Fraction(1, 4)
    assert d1.pairing((1,), (1,)) == Fraction(1, 2)
    du = GramLattice([[0, 1], [1, 0]]).discriminant_form()
    assert du.orders == () and du.elements() == [()]
    d2 = GramLattice([[2, 1], [1, 2]]).discriminant_form()
    assert d2.orders == (3,)
    assert d2.qval((1,)) in (Fraction(1, 3), Fraction(2, 3))


def test_quadratic_form_consistency():
    # q(x+y) - q(x) - q(y) = (x,y) mod 1 on even lattices
    for gram in EVEN_GRAMS:
        df = GramLattice(gram).discriminant_form()
        for x in df.elements():
            for y in df.elements():
                lhs = (df.qval(df.add(x, y)) - df.qval(x) - df.qval(y)) % 1
                assert lhs == df.pairing(x, y)


def test_qval_lift_independence():
    for gram in ALL_GRAMS:
        lat = GramLattice(gram)
        df = lat.discriminant_form()
        modulus = 1 if lat.is_even else Fraction(1, 2)
        for x in df.elements():
            base = df.lift(x)
            for shift in range(lat.rank):
                moved = list(base)
                moved[shift] += 1
                assert df.q_of_lift(moved) % modulus == df.qval(x)


def test_milgram_corpus():
    for gram in EVEN_GRAMS:
        df = GramLattice(gram).discriminant_form()
        expected = root_of_unity(df.signature, 8) * sqrt_rat(df.delta)
        assert df.milgram_sum() == expected
    a2 = GramLattice([[2, 1], [1, 2]]).discriminant_form()
    assert a2.milgram_sum() == root_of_unity(1, 4) * sqrt_rat(3)
    with pytest.raises(ValueError):
        GramLattice([[1]]).discriminant_form().milgram_sum()


def test_direct_sum_discriminant_forms():
    pairs = [([[2]], [[2, 1], [1, 2]]), ([[4]], [[-2]]),
             ([[0, 1], [1, 0]], [[6]]), ([[2]], [[2, 0], [0, 4]])]
    for ga, gb in pairs:
        la, lb = GramLattice(ga), GramLattice(gb)
        ls = direct_sum(la, lb)
        da, db, ds = (x.discriminant_form() for x in (la, lb, ls))
        assert ds.delta == da.delta * db.delta
        assert ds.signature == da.signature + db.signature
        assert ds.milgram_sum() == da.milgram_sum() * db.milgram_sum()
        # embedded copies: padded lifts respect q and pair to zero across
        zero_b = [Fraction(0)] * lb.rank
        zero_a = [Fraction(0)] * la.rank
        for x in da.elements():
            vx = list(da.lift(x)) + zero_b
            assert ds.q_of_lift(vx) % 1 == da.q_of_lift(da.lift(x)) % 1
            for y in db.elements():
                vy = zero_a + list(db.lift(y))
                assert ds.pairing_of_lifts(vx, vy) == 0


def test_interesting_primes():
    assert interesting_primes(GramLattice([[2]])) == {2}
    assert interesting_primes(GramLattice([[0, 1], [1, 0]])) == set()
    assert interesting_primes(GramLattice([[2, 1], [1, 2]])) == {3}
    assert interesting_primes(GramLattice([[2, 0], [0, 6]])) == {2, 3}


def test_subsets_c_sizes():
    for gram in ALL_GRAMS:
        df = GramLattice(gram).discriminant_form()
        for c in range(-12, 13):
            kernel, image = df.subsets_c(c)
            assert len(kernel) * len(image) == df.delta
            kset = set(kernel)
            for x in kernel[:10]:
                for y in kernel[:10]:
                    assert df.add(x, y) in kset
            assert set(image) == {df.smul(c, x) for x in df.elements()}
            assert kset == {x for x in df.elements() if df.smul(c, x) == df.zero()}


def test_subsets_c_zero():
    df = GramLattice([[2]]).discriminant_form()
    kernel, image = df.subsets_c(0)
    assert set(kernel) == set(df.elements())
    assert image == [df.zero()]


def test_coset_dcstar_examples():
    d1 = GramLattice([[2]]).discriminant_form()
    assert set(d1.coset_Dcstar(1)) == {(0,), (1,)}
    assert d1.coset_Dcstar(2) == [(1,)]
    du = GramLattice([[0, 1], [1, 0]]).discriminant_form()
    assert du.coset_Dcstar(7) == [()]


def test_coset_dcstar_is_coset_of_image():
    for gram in EVEN_GRAMS:
        df = GramLattice(gram).discriminant_form()
        for c in range(-8, 9):
            if c == 0:
                continue
            star = df.coset_Dcstar(c)
            _, image = df.subsets_c(c)
            assert len(star) == len(image) > 0
            base = star[0]
            assert {df.add(b, df.neg(base)) for b in star} == set(image)
            # direct filter definition against the full kernel
            kernel, _ = df.subsets_c(c)
            for beta in star:
                for mu in kernel:
                    val = (c * df.qval(mu) + df.pairing(beta, mu)) % 1
                    assert val == 0


def test_coset_dcstar_odd_lattice_requires_even_c():
    df = GramLattice([[3]]).discriminant_form()
    with pytest.raises(ValueError):
        df.coset_Dcstar(3)
    assert len(df.coset_Dcstar(2)) == 3


def test_beta_c_sq_half_examples_and_well_defined():
    d1 = GramLattice([[2]]).discriminant_form()
    assert d1.beta_c_sq_half(2, (1,), (1,)) == 0
    assert d1.beta_c_sq_half(1, (0,), (1,)) == Fraction(1, 4)
    assert d1.beta_c_sq_half(0, (0,), (0,)) == 0
    with pytest.raises(ValueError):
        d1.beta_c_sq_half(2, (1,), (0,))  # (0,) not in the coset x_c + 2D
    for gram in EVEN_GRAMS:
        df = GramLattice(gram).discriminant_form()
        for c in (1, 2, 3, 4, 6, -2):
            star = df.coset_Dcstar(c)
            x_c = star[0]
            kernel, _ = df.subsets_c(c)
            for beta in star:
                val = df.beta_c_sq_half(c, x_c, beta)
                # every preimage alpha of (beta - x_c)/c gives the same value
                seen = set()
                for alpha in df.elements():
                    if df.add(x_c, df.smul(c, alpha)) == beta:
                        seen.add((c * df.qval(alpha) + df.pairing(x_c, alpha)) % 1)
                assert seen == {val}


def test_class_of_dual_vector_roundtrip():
    for gram in ALL_GRAMS:
        df = GramLattice(gram).discriminant_form()
        for x in df.elements():
            assert df.class_of_dual_vector(df.lift(x)) == x


def test_class_from_dual_vector_projects():
    df = GramLattice([[2, 0], [0, 6]]).discriminant_form()
    p2, p3 = df.p_part(2), df.p_part(3)
    for x in df.elements():
        v = df.lift(x)
        assert df.class_from_dual_vector(v, 2) == p2.project(x)
        assert df.class_from_dual_vector(v, 3) == p3.project(x)
        # shifting the vector by a 3-unit denominator leaves the 3-class alone
        shifted = tuple(c + Fraction(1, 2) * 0 for c in v)
        assert df.class_from_dual_vector(shifted, 3) == p3.project(x)


def test_p_part_structure():
    df = GramLattice([[2, 0], [0, 6]]).discriminant_form()
    p2, p3 = df.p_part(2), df.p_part(3)
    assert p2.delta == 4 and p3.delta == 3
    assert len(p2.elements()) == 4 and len(p3.elements()) == 3
    for x in df.elements():
        assert df.add(p2.project(x), p3.project(x)) == x
        assert p2.project(p2.project(x)) == p2.project(x)
    # orthogonality of distinct Sylow parts
    for a in p2.elements():
        for b in p3.elements():
            assert df.pairing(a, b) == 0
    p5 = df.p_part(5)
    assert p5.delta == 1 and p5.elements() == [df.zero()]


def test_enumeration_cap():
    big = GramLattice([[2 * 100003]])
    with pytest.raises(CapExceededError):
        big.discriminant_form().elements()


def test_json_shape():
    doc = GramLattice([[2]]).discriminant_form().to_json()
    assert doc["orders"] == [2] and doc["delta"] == 2
    assert doc["quad"] == ["1/4"] and doc["bilinear"] == [["1/2"]]
    assert doc["signature"] == 1 and doc["level"] == 4
