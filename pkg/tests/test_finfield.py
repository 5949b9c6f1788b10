import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbicover import finfield
from orbicover.errors import DivisionByZero, NotASquare, ZeroInput
from orbicover.finfield import FqContext, FqElem

SMALL_FIELDS = [FqContext(p, finfield.default_modulus(p, r))
                for p, r in [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (3, 3), (5, 2), (7, 2), (11, 2)]]


def nonzero(ctx):
    return [e for e in ctx.elements() if not e.is_zero()]


@st.composite
def field_and_elems(draw, count=3, allow_zero=True):
    ctx = draw(st.sampled_from(SMALL_FIELDS))
    low = 0 if allow_zero else 1
    return ctx, [ctx.from_index(draw(st.integers(low, ctx.q - 1))) for _ in range(count)]


def test_prime_field_arithmetic(f7):
    assert f7.mul(f7.elem(3), f7.elem(5)) == f7.one
    assert f7.inv(f7.elem(3)) == f7.elem(5)
    assert f7.add(f7.elem(4), f7.elem(5)) == f7.elem(2)
    assert f7.pow(f7.elem(3), 6) == f7.one
    assert f7.pow(f7.elem(3), -1) == f7.elem(5)


def test_extension_arithmetic(f9):
    x = f9.elem([0, 1])
    assert f9.mul(x, x) == f9.elem(2)
    assert f9.pow(x, 4) == f9.one
    assert f9.mul(x, f9.inv(x)) == f9.one
    assert f9.elem([0, 0, 1]) == f9.elem(-1)


def test_fq_ops_dispatch(f7):
    a, b = f7.elem(3), f7.elem(5)
    assert finfield.fq_ops(f7, 'mul', a, b) == f7.one
    assert finfield.fq_ops(f7, 'inv', a) == b
    assert finfield.fq_ops(f7, 'neg', a) == f7.elem(4)
    assert finfield.fq_ops(f7, 'pow', a, 2) == f7.elem(2)
    assert finfield.fq_ops(f7, 'div', f7.one, b) == a


def test_inverse_of_zero(f7, f9):
    with pytest.raises(DivisionByZero):
        f7.inv(f7.zero)
    with pytest.raises(ZeroDivisionError):
        f9.div(f9.one, f9.zero)


def test_context_validation():
    with pytest.raises(ValueError):
        FqContext(2, (0, 1))
    with pytest.raises(ValueError):
        FqContext(3, (2, 0, 1))  # x^2 - 1
    with pytest.raises(ValueError):
        FqContext(9, (0, 1))


def test_squares(f7, f9):
    assert finfield.is_square(f7, f7.elem(4))
    assert finfield.is_square(f7, f7.elem(2))
    assert not finfield.is_square(f7, f7.elem(3))
    assert finfield.is_square(f9, f9.elem(2))  # -1 is a square in F_9
    with pytest.raises(ZeroInput):
        finfield.is_square(f7, f7.zero)


@pytest.mark.parametrize('ctx', SMALL_FIELDS, ids=lambda c: f"F{c.q}")
def test_half_of_units_are_squares(ctx):
    units = nonzero(ctx)
    assert sum(finfield.is_square(ctx, a) for a in units) == (ctx.q - 1) // 2
    squares = {ctx.mul(a, a) for a in units}
    assert all(finfield.is_square(ctx, s) for s in squares)
    assert len(squares) == (ctx.q - 1) // 2


def test_element_order(f7, f25):
    assert finfield.element_order(f7, f7.elem(2)) == 3
    assert finfield.element_order(f7, f7.elem(3)) == 6
    assert finfield.element_order(f7, f7.one) == 1
    assert finfield.element_order(f7, f7.elem(6)) == 2
    assert finfield.element_order(f25, finfield.multiplicative_generator(f25)) == 24
    with pytest.raises(ZeroInput):
        finfield.element_order(f7, f7.zero)


def test_multiplicative_generator(f7):
    assert finfield.multiplicative_generator(f7) == f7.elem(3)
    assert finfield.multiplicative_generator(FqContext.prime_field(3)) == FqElem((2,))


@pytest.mark.parametrize('ctx', SMALL_FIELDS, ids=lambda c: f"F{c.q}")
def test_element_orders_divide_group_order(ctx):
    orders = [finfield.element_order(ctx, a) for a in nonzero(ctx)]
    assert all((ctx.q - 1) % o == 0 for o in orders)
    assert orders.count(ctx.q - 1) > 0
    assert orders.count(1) == 1


def test_default_modulus():
    assert finfield.default_modulus(3, 1) == (0, 1)
    assert finfield.default_modulus(3, 2) == (1, 0, 1)
    assert finfield.is_irreducible_mod_p(7, finfield.default_modulus(7, 3))


def test_sqrt(f7, f25):
    root = finfield.sqrt(f7, f7.elem(2))
    assert f7.mul(root, root) == f7.elem(2)
    assert finfield.sqrt(f7, f7.zero) == f7.zero
    with pytest.raises(NotASquare):
        finfield.sqrt(f7, f7.elem(3))
    a = f25.elem([2, 3])
    root = finfield.sqrt(f25, f25.mul(a, a))
    assert f25.mul(root, root) == f25.mul(a, a)


def test_factor_running_prime():
    # x^2 - 2 = (x - 3)(x - 4) mod 7, x - 3 first
    assert finfield.factor_poly_mod_p(7, [-2, 0, 1]) == [((4, 1), 1), ((3, 1), 1)]
    assert finfield.factor_poly_mod_p(5, [-2, 0, 1]) == [((3, 0, 1), 1)]
    assert finfield.factor_poly_mod_p(3, [0, 0, 1]) == [((0, 1), 2)]


def test_factorization_ignores_seed():
    f = [1, 2, 0, 3, 1, 0, 5, 1]
    assert finfield.factor_poly_mod_p(13, f, seed=0) == finfield.factor_poly_mod_p(13, f, seed=99)


@settings(max_examples=1000, deadline=None)
@given(field_and_elems())
def test_field_axioms(data):
    ctx, (a, b, c) = data
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.add(a, ctx.neg(a)) == ctx.zero
    assert ctx.sub(ctx.add(a, b), b) == a
    if not a.is_zero():
        assert ctx.mul(a, ctx.inv(a)) == ctx.one
        assert ctx.pow(a, ctx.q - 1) == ctx.one


@settings(max_examples=1000, deadline=None)
@given(field_and_elems(count=1, allow_zero=False))
def test_square_closure(data):
    ctx, (a,) = data
    square = ctx.mul(a, a)
    assert finfield.is_square(ctx, square)
    root = finfield.sqrt(ctx, square)
    assert root in (a, ctx.neg(a))


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]),
       st.lists(st.integers(-50, 50), min_size=2, max_size=9))
def test_factor_product_recovers_monic_input(p, coeffs):
    while coeffs and coeffs[-1] % p == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return
    lead_inverse = pow(coeffs[-1] % p, -1, p)
    monic = tuple(c * lead_inverse % p for c in coeffs)
    factors = finfield.factor_poly_mod_p(p, coeffs)
    expanded = [poly for poly, mult in factors for _ in range(mult)]
    assert finfield.poly_product_mod_p(p, expanded) == monic
    assert all(finfield.is_irreducible_mod_p(p, poly) and poly[-1] == 1 for poly, _ in factors)
    keys = [finfield.factor_sort_key(poly, p) for poly, _ in factors]
    assert keys == sorted(keys)
