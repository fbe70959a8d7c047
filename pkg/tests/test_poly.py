"""Exact polynomial arithmetic, both layers."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padsum.poly import GenPoly, RatPoly

coeff = st.fractions(min_value=-4, max_value=4, max_denominator=6)
polys = st.lists(coeff, min_size=0, max_size=5).map(RatPoly)


def test_eval_examples():
    assert RatPoly((-2, 1))(0) == -2  # x - 2 at 0
    assert RatPoly.zero()(Fraction(7, 3)) == 0
    # the quadratic coefficient polynomial n^2 - 3n + 3 at n = 2, by hand
    assert RatPoly((3, -3, 1))(2) == 1


def test_canonical_form():
    assert RatPoly((1, 2, 0, 0)).coeffs == (1, 2)
    assert RatPoly((0, 0)).is_zero()
    assert RatPoly(()).degree == -1
    difference = RatPoly((1, 1)) - RatPoly((0, 1))
    assert difference.coeffs == (Fraction(1),)


def test_rejects_floats():
    with pytest.raises(TypeError):
        RatPoly((0.5,))


def test_shift_examples():
    n = RatPoly.monomial(1)
    assert n.shift() == RatPoly((1, 1))
    assert RatPoly.constant(9).shift() == RatPoly.constant(9)
    # (n+1)^2 - n^2 = 2n + 1, by hand expansion
    assert RatPoly((0, 0, 1)).shift() - RatPoly((0, 0, 1)) == RatPoly((1, 2))
    assert RatPoly((0, 0, 1)).shift(-2) == RatPoly((4, -4, 1))


def test_arithmetic_identities():
    p = RatPoly((1, -2, 3))
    assert (p + (-p)).is_zero()
    assert p * RatPoly.one() == p
    assert p * 0 == RatPoly.zero()
    assert (p**2) == p * p
    assert p.derivative() == RatPoly((-2, 6))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(polys, polys)
def test_degree_of_product_adds(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert (a * b).degree == a.degree + b.degree


@given(polys, polys)
def test_shift_is_ring_homomorphism(a, b):
    assert (a * b).shift() == a.shift() * b.shift()
    assert (a + b).shift() == a.shift() + b.shift()


def test_render():
    assert RatPoly((3, -3, 1)).render("n") == "n^2 - 3n + 3"
    assert RatPoly((-1, 3, -1)).render("x") == "-x^2 + 3x - 1"
    assert RatPoly.zero().render() == "0"
    assert RatPoly((Fraction(1, 2),)).render() == "1/2"


def test_genpoly_eval_and_slices():
    # (n - 2)x + eps for both signs
    for eps in (1, -1):
        a1 = GenPoly(eps, (RatPoly.constant(eps), RatPoly((-2, 1))))
        assert a1.eval(0, 1) == -2 + eps
        assert a1.at_n(1) == RatPoly((eps, -1))
        assert a1.at_x(1) == RatPoly((eps - 2, 1))
        assert a1.coeff(1) == RatPoly((-2, 1))
        assert a1.coeff(5).is_zero()


def test_genpoly_sign_product_collapses():
    # (x - eps)(x + eps) = x^2 - 1 for either concrete sign
    for eps in (1, -1):
        left = GenPoly(eps, (RatPoly.constant(-eps), RatPoly.one()))
        right = GenPoly(eps, (RatPoly.constant(eps), RatPoly.one()))
        assert left * right == GenPoly(eps, (RatPoly.constant(-1), RatPoly.zero(), RatPoly.one()))


def test_genpoly_mixed_sign_arithmetic_is_refused():
    plus = GenPoly(1, (RatPoly.one(),))
    minus = GenPoly(-1, (RatPoly.one(),))
    with pytest.raises(ValueError):
        plus + minus
    with pytest.raises(ValueError):
        plus * minus


def test_genpoly_canonical_and_xpow():
    g = GenPoly(1, (RatPoly.one(), RatPoly.zero(), RatPoly.zero()))
    assert g.degree_x == 0
    shifted = g.mul_xpow(2)
    assert shifted.degree_x == 2
    assert shifted.coeff(2) == RatPoly.one()
    assert (g - g).is_zero()


def test_genpoly_render():
    a2 = GenPoly(1, (RatPoly.one(), RatPoly((-5, 1)), RatPoly((3, -3, 1))))
    assert a2.render() == "(n^2 - 3n + 3)x^2 + (n - 5)x + 1"
    a1_minus = GenPoly(-1, (RatPoly.constant(-1), RatPoly((-2, 1))))
    assert a1_minus.render() == "(n - 2)x - 1"
