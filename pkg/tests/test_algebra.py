import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpcodes.algebra import (
    GF2m,
    GroupAlgebraElem,
    ProjMat2,
    build_pgl2,
    build_psl2,
    circulant_lift,
    cyclic_group,
    legendre,
    unipotent_subgroup,
)
from bpcodes.errors import InvalidModulus, NotPGL
from bpcodes.f2la import F2Matrix


def test_legendre_values():
    assert legendre(1, 7) == 1
    assert legendre(14, 7) == 0
    # oracle: squares mod 13 are {1,3,4,9,10,12}
    squares = {(x * x) % 13 for x in range(1, 13)}
    assert 5 not in squares and legendre(5, 13) == -1
    for a in range(1, 13):
        assert legendre(a, 13) == (1 if a in squares else -1)


def test_legendre_rejects_bad_modulus():
    with pytest.raises(InvalidModulus):
        legendre(3, 8)
    with pytest.raises(InvalidModulus):
        legendre(3, 9)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6), st.sampled_from([3, 7, 13, 29]))
def test_legendre_multiplicative(a, b, p):
    assert legendre(a, p) * legendre(b, p) == legendre(a * b, p)


@pytest.mark.parametrize("q,order", [(3, 24), (7, 336), (13, 2184)])
def test_pgl_orders(q, order):
    assert build_pgl2(q).order == order == q * (q * q - 1)


@pytest.mark.parametrize("q,order", [(3, 12), (5, 60), (7, 168)])
def test_psl_orders(q, order):
    assert build_psl2(q).order == order


def test_pgl3_closure_and_inverses():
    g = build_pgl2(3)
    for i in range(g.order):
        assert g.mul(i, g.inv(i)) == g.identity
        for j in range(g.order):
            g.mul(i, j)  # raises if the product leaves the table


def test_canonical_form_first_nonzero_is_one():
    g = build_pgl2(7)
    for e in g.elements:
        first = next(x for x in (e.a, e.b, e.c, e.d) if x != 0)
        assert first == 1


@pytest.mark.parametrize("q", [7, 13])
def test_unipotent_subgroup(q):
    g = build_pgl2(q)
    u = unipotent_subgroup(g)
    assert u.order == q
    gen = u.index[ProjMat2(q, 1, 1, 0, 1)]
    assert u.element_order(gen) == q
    # determinant class of unipotents is the square class
    for e in u.elements:
        assert legendre(e.det(), q) == 1


def test_unipotent_rejects_non_pgl():
    with pytest.raises(NotPGL):
        unipotent_subgroup(cyclic_group(5))


def test_group_algebra_identity_and_monomials():
    one = GroupAlgebraElem.one(5)
    x = GroupAlgebraElem(5, 0b10110)
    assert x.mul(one) == x
    ga = GroupAlgebraElem.monomial(5, 2)
    gb = GroupAlgebraElem.monomial(5, 4)
    assert ga.mul(gb) == GroupAlgebraElem.monomial(5, 1)


def test_group_algebra_square_of_one_plus_g():
    x = GroupAlgebraElem(5, 0b00011)  # 1 + g
    assert x.mul(x).coeffs == 0b00101  # 1 + g^2 in characteristic 2


def test_circulant_lift_basics():
    assert circulant_lift(GroupAlgebraElem.one(4)) == F2Matrix.identity(4)
    shift = circulant_lift(GroupAlgebraElem.monomial(3, 1))
    assert shift.to_dense().tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    first_row = circulant_lift(GroupAlgebraElem(3, 0b011)).to_dense()[0].tolist()
    assert first_row == [1, 0, 1]  # row 0 carries coefficients of g^k at col -k


def test_circulant_lift_ring_homomorphism_exhaustive():
    for ell in (2, 3, 5, 7):
        for cx, cy in itertools.product(range(1 << ell), repeat=2):
            x, y = GroupAlgebraElem(ell, cx), GroupAlgebraElem(ell, cy)
            assert circulant_lift(x.mul(y)) == circulant_lift(x).matmul(circulant_lift(y))
            assert circulant_lift(x.add(y)) == circulant_lift(x).add(circulant_lift(y))


def test_gf2m_field_axioms_m4():
    f = GF2m(4)
    assert f.element_order(f.generator()) == 15
    for a in range(1, 16):
        assert f.mul(a, f.inv(a)) == 1
    # distributivity spot checks
    for a, b, c in itertools.product(range(16), repeat=3):
        if a > 5:
            break
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


def test_gf2m_poly_eval():
    f = GF2m(3)
    # p(x) = x^2 + 1 at x = g: g^2 + 1
    g = f.generator()
    assert f.poly_eval([1, 0, 1], g) == f.mul(g, g) ^ 1


def test_group_dump():
    g = build_pgl2(3)
    d = g.dump_generators()
    assert d["order"] == 24 and d["name"] == "PGL(2,3)"
