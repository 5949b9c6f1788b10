from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from orbicover import finfield, numfield
from orbicover.errors import (BadPrime, DenominatorNotCoprime, DyadicPrime, FieldIsRationals, NoSplitPrimeInBound,
                              NotMonic, ReduciblePolynomial)
from orbicover.finfield import FqElem
from orbicover.numfield import PrimeIdealFactor

SQRT5 = [-1, -1, 1]
CUBIC = [-1, -3, 0, 1]  # x^3 - 3x - 1, totally real
SQRT2_FIELD = numfield.make_field([-2, 0, 1])
CUBIC_FIELD = numfield.make_field(CUBIC)


def test_make_field(sqrt2):
    assert sqrt2.degree == 2
    assert sqrt2.poly_disc == 8
    assert sqrt2.real_places == 2
    assert sqrt2.irreducibility_prime == 3
    assert numfield.is_totally_real(sqrt2)


def test_root_approximations(sqrt2):
    assert abs(float(numfield.root_approximation(sqrt2, 0)) + 1.41421) < 1e-4
    assert abs(float(numfield.root_approximation(sqrt2, 1)) - 1.41421) < 1e-4
    golden = numfield.make_field(SQRT5)
    assert abs(float(numfield.root_approximation(golden, 1)) - 1.61803) < 1e-4


def test_rationals():
    field = numfield.make_field([0, 1])
    assert field.degree == 1
    a, b = field.real_roots[0]
    assert a < 0 < b
    assert numfield.is_totally_real(field)


def test_invalid_polynomials():
    with pytest.raises(NotMonic):
        numfield.make_field([1, 2])
    with pytest.raises(NotMonic):
        numfield.make_field([1])
    with pytest.raises(ReduciblePolynomial):
        numfield.make_field([1, 2, 1])
    with pytest.raises(ReduciblePolynomial):
        numfield.make_field([-1, 0, 1])


def test_total_reality():
    assert not numfield.is_totally_real(numfield.make_field([1, 0, 1]))
    cubic = numfield.make_field(CUBIC)
    assert numfield.is_totally_real(cubic)
    assert cubic.real_places == 3


def test_sign_at_places(sqrt2):
    minus_theta = sqrt2.elem([0, -1])
    assert numfield.sign_at(sqrt2, minus_theta, 0) == 1
    assert numfield.sign_at(sqrt2, minus_theta, 1) == -1
    # 3 - 2 theta: 3 - 2.828 > 0 and 3 + 2.828 > 0
    assert numfield.sign_at(sqrt2, sqrt2.elem([3, -2]), 1) == 1
    assert numfield.sign_at(sqrt2, sqrt2.elem([Fraction(-141, 100), 1]), 1) == 1
    assert numfield.sign_at(sqrt2, sqrt2.elem([Fraction(-142, 100), 1]), 1) == -1
    assert numfield.sign_at(sqrt2, sqrt2.elem([0]), 0) == 0


def test_factor_prime(sqrt2):
    split = numfield.factor_prime(sqrt2, 7)
    assert [(pf.factor_poly, pf.r) for pf in split] == [((4, 1), 1), ((3, 1), 1)]
    inert = numfield.factor_prime(sqrt2, 5)
    assert [(pf.factor_poly, pf.r) for pf in inert] == [((3, 0, 1), 2)]
    with pytest.raises(DyadicPrime):
        numfield.factor_prime(sqrt2, 2)
    with pytest.raises(ValueError):
        numfield.factor_prime(sqrt2, 9)
    with pytest.raises(BadPrime):
        numfield.factor_prime(numfield.make_field(SQRT5), 5)


def test_reduce_element(sqrt2):
    first, second = numfield.factor_prime(sqrt2, 7)
    minus_theta = sqrt2.elem([0, -1])
    assert numfield.reduce_element(sqrt2, minus_theta, first) == FqElem((4,))
    assert numfield.reduce_element(sqrt2, minus_theta, second) == FqElem((3,))
    assert numfield.reduce_element(sqrt2, sqrt2.one, first) == FqElem((1,))
    (inert,) = numfield.factor_prime(sqrt2, 5)
    assert numfield.reduce_element(sqrt2, sqrt2.elem([0, 1]), inert) == FqElem((0, 1))
    assert numfield.reduce_element(sqrt2, sqrt2.elem([Fraction(1, 3)]), first) == FqElem((5,))
    with pytest.raises(DenominatorNotCoprime):
        numfield.reduce_element(sqrt2, sqrt2.elem([Fraction(1, 7)]), first)


def test_field_arithmetic(sqrt2):
    theta = sqrt2.elem([0, 1])
    assert sqrt2.mul(theta, theta) == sqrt2.elem([2])
    assert sqrt2.product([theta] * 3) == sqrt2.elem([0, 2])
    assert sqrt2.sub(theta, theta) == sqrt2.elem([0])
    assert sqrt2.add(theta, sqrt2.neg(theta)) == sqrt2.elem([])
    assert sqrt2.elem([1, 0, 1]) == sqrt2.elem([3])
    halves = [sqrt2.elem([Fraction(1, 2), Fraction(1, 3)]), sqrt2.elem([Fraction(5, 6)]), theta]
    assert sqrt2.norm_denominators(halves) == [2, 3, 6]


def test_find_split_pair(sqrt2):
    p, first, second = numfield.find_split_pair(sqrt2, 100)
    assert p == 7
    assert (first.factor_poly, second.factor_poly) == ((4, 1), (3, 1))
    p, first, second = numfield.find_split_pair(numfield.make_field(SQRT5), 100)
    assert p == 11
    assert (first.factor_poly, second.factor_poly) == ((7, 1), (3, 1))
    with pytest.raises(NoSplitPrimeInBound):
        numfield.find_split_pair(sqrt2, 5)
    with pytest.raises(FieldIsRationals):
        numfield.find_split_pair(numfield.make_field([0, 1]), 100)


def test_find_split_pair_filter(sqrt2):
    p, first, second = numfield.find_split_pair(sqrt2, 100, accept=lambda pf: pf.p != 7)
    assert p == 17
    assert first.r == second.r == 1


@pytest.mark.parametrize('min_poly', [[-2, 0, 1], SQRT5, CUBIC, [1, -4, 0, 1]])
def test_dedekind_degrees(min_poly):
    field = numfield.make_field(min_poly)
    for p in sympy.primerange(3, 200):
        if field.poly_disc % p == 0:
            continue
        factors = numfield.factor_prime(field, p)
        assert sum(pf.r * pf.e for pf in factors) == field.degree
        expanded = [pf.factor_poly for pf in factors for _ in range(pf.e)]
        assert finfield.poly_product_mod_p(p, expanded) == finfield.poly_mod(min_poly, p)
        assert [pf.sort_key() for pf in factors] == sorted(pf.sort_key() for pf in factors)


def test_prime_ideal_factor_residue_degree():
    pf = PrimeIdealFactor(p=5, factor_poly=(3, 0, 1), r=2)
    assert pf.residue_degree == 2
    assert numfield.residue_field(pf).q == 25


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@settings(max_examples=1000, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2),
       st.sampled_from([7, 17, 23, 31, 41]))
def test_reduction_is_a_ring_homomorphism(x, y, p):
    field = SQRT2_FIELD
    if any(c.denominator % p == 0 for c in x + y):
        return
    a, b = field.elem(x), field.elem(y)
    for pf in numfield.factor_prime(field, p):
        ctx = numfield.residue_field(pf)
        ra, rb = (numfield.reduce_element(field, e, pf, ctx) for e in (a, b))
        assert numfield.reduce_element(field, field.add(a, b), pf, ctx) == ctx.add(ra, rb)
        assert numfield.reduce_element(field, field.mul(a, b), pf, ctx) == ctx.mul(ra, rb)


@settings(max_examples=1000, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=3), st.integers(1, 6))
def test_signs_stable_under_refinement(coeffs, steps):
    field = CUBIC_FIELD
    elem = field.elem(coeffs)
    refined = numfield.refine_roots(field, steps)
    for place in range(field.real_places):
        assert numfield.sign_at(field, elem, place) == numfield.sign_at(refined, elem, place)
