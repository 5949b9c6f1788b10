import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbicover import finfield, matgroup, orders
from orbicover.errors import IsotropicVector, NoIsotropicVector, NotSquareDisc, TooLarge
from orbicover.finfield import FqContext
from orbicover.matgroup import FqMatrix
from orbicover.quadform import FqForm

F3, F5, F7 = (FqContext.prime_field(p) for p in (3, 5, 7))


def form(ctx, *diagonal):
    return FqForm(ctx, tuple(ctx.elem(a) for a in diagonal))


def test_matrix_basics(f7):
    m = FqMatrix.from_entries(f7, [[1, 2], [3, 4]])
    assert m.entries() == [[[1], [2]], [[3], [4]]]
    assert matgroup.det(m) == f7.elem(-2)
    assert m @ matgroup.inverse(m) == matgroup.identity(f7, 2)
    assert matgroup.power(m, -1) == matgroup.inverse(m)
    assert m.transpose().entry(0, 1) == f7.elem(3)
    assert matgroup.apply(m, [1, 1]) == [f7.elem(3), f7.elem(0)]
    assert hash(m) == hash(FqMatrix.from_entries(f7, [[1, 2], [3, 4]]))


def test_extension_matrix(f9):
    x = f9.elem([0, 1])
    m = matgroup.scalar_matrix(f9, 3, x)
    assert matgroup.det(m) == f9.pow(x, 3)
    assert matgroup.matrix_order(m, 8) == 4


def test_singular_inverse(f7):
    with pytest.raises(ZeroDivisionError):
        matgroup.inverse(FqMatrix.from_entries(f7, [[1, 2], [2, 4]]))


@pytest.mark.parametrize('dim, p, square_class', [
    (2, 3, 'square'), (2, 3, 'nonsquare'), (2, 5, 'square'), (2, 5, 'nonsquare'),
    (3, 3, None), (3, 5, None), (4, 3, 'square'), (4, 3, 'nonsquare'),
])
def test_brute_force_matches_formula(dim, p, square_class):
    q = matgroup.standard_form(dim, p, 1, square_class)
    assert q.square_class == square_class
    assert matgroup.brute_force_so_count(q) == orders.so_order(dim, p, 1, square_class).value()


def test_named_forms_over_f3():
    assert matgroup.brute_force_so_count(form(F3, 1, 1, 1)) == 24
    assert matgroup.brute_force_so_count(form(F3, 1, 1, 1, 1)) == 576
    assert matgroup.brute_force_so_count(form(F3, 1, 1, 1, 2)) == 720
    assert matgroup.brute_force_so_count(form(F5, 1, 1, 1)) == 120


def test_brute_force_refuses_large_groups():
    with pytest.raises(TooLarge):
        matgroup.brute_force_so_count(form(F3, 1, 1, 1, 1, 1))


def test_point_count():
    assert matgroup.sphere_count(form(F3, 1, 1, 1), F3.one) == 6
    assert matgroup.sphere_count(form(F3, 1, 1), F3.zero) == 1
    assert matgroup.point_count_so_order(form(F3, 1, 1, 1)) == 24
    assert matgroup.point_count_so_order(form(F3, 1, 1, 1, 1, 1)) == 51840
    assert matgroup.point_count_so_order(form(F7, 3)) == 1


@pytest.mark.parametrize('dim, p, r, square_class', [
    (3, 7, 1, None), (4, 5, 1, 'square'), (4, 5, 1, 'nonsquare'), (5, 5, 1, None), (6, 3, 1, 'nonsquare'),
    (3, 3, 2, None), (4, 3, 2, 'square'),
])
def test_point_count_matches_formula(dim, p, r, square_class):
    q = matgroup.standard_form(dim, p, r, square_class)
    assert matgroup.point_count_so_order(q) == orders.so_order(dim, p, r, square_class).value()


def test_reflection(f7):
    q = form(f7, 1, 1)
    assert matgroup.reflection(q, [1, 0]) == FqMatrix.from_entries(f7, [[6, 0], [0, 1]])
    r = matgroup.reflection(form(F3, 1, 1, 1), [1, 1, 0])
    assert matgroup.apply(r, [1, 1, 0]) == [F3.elem(2), F3.elem(2), F3.zero]
    assert matgroup.apply(r, [1, 2, 0]) == [F3.one, F3.elem(2), F3.zero]
    assert matgroup.apply(r, [0, 0, 1]) == [F3.zero, F3.zero, F3.one]
    assert matgroup.det(r) == F3.elem(-1)
    with pytest.raises(IsotropicVector):
        matgroup.reflection(form(F5, 1, 1), [1, 2])


def test_special_isometries(f7):
    q = form(f7, 1, 1, 1, 1, 4)
    assert matgroup.is_special_isometry(q, matgroup.identity(f7, 5))
    minus = FqMatrix.from_entries(f7, [[1 if i == j else 0 for j in range(5)] for i in range(4)] + [[0, 0, 0, 0, 6]])
    assert matgroup.preserves_form(q, minus)
    assert not matgroup.is_special_isometry(q, minus)
    product = matgroup.reflection(q, [1, 0, 0, 0, 0]) @ matgroup.reflection(q, [1, 1, 0, 0, 0])
    assert matgroup.is_special_isometry(q, product)


def test_random_so_elements_are_special_isometries():
    q = form(F5, 1, 1, 1)
    elements = [matgroup.random_so_element(q, seed) for seed in range(1000)]
    assert all(matgroup.is_special_isometry(q, g) for g in elements)
    assert matgroup.random_so_element(q, 17) == elements[17]
    assert len({matgroup.matrix_order(g, 120) for g in elements}) >= 2


def test_witt_basis():
    hyperbolic = FqMatrix.from_entries(F7, [[0, 1], [1, 0]])
    assert matgroup.witt_hyperbolic_basis(hyperbolic) == matgroup.identity(F7, 2)
    basis = matgroup.witt_hyperbolic_basis(form(F7, 1, -1))
    assert basis.transpose() @ matgroup.gram_matrix(form(F7, 1, -1)) @ basis == hyperbolic
    with pytest.raises(NoIsotropicVector):
        matgroup.witt_hyperbolic_basis(form(F7, 1, 1))
    with pytest.raises(NotSquareDisc):
        matgroup.witt_hyperbolic_basis(form(F7, 1, 1))
    with pytest.raises(NotSquareDisc):
        matgroup.witt_hyperbolic_basis(form(F7, 1, 1, 1, 3))
    matgroup.witt_hyperbolic_basis(form(F5, 1, 1))
    matgroup.witt_hyperbolic_basis(form(F7, 1, 1, 1, 1), seed=3)


def test_cyclic_generator(f7):
    q = form(f7, 1, 1, 1, 1)
    g = matgroup.build_cyclic_generator(q, 3)
    assert matgroup.is_special_isometry(q, g)
    assert matgroup.matrix_order(g, 6) == 6
    for x in range(7):
        expected = f7.pow(f7.mul(f7.elem(x - 3), f7.elem(x - 5)), 2)
        assert matgroup.charpoly_at(g, x) == expected
    w = matgroup.power(g, 2)
    assert matgroup.matrix_order(w, 3) == 3
    assert matgroup.eigenvalue_pm1_avoidance(g, 2, 3)
    assert not matgroup.eigenvalue_pm1_avoidance(matgroup.identity(f7, 4), 1, 3)
    assert matgroup.build_cyclic_generator(q, 1) == matgroup.identity(f7, 4)


def test_cyclic_generator_over_extension(f25):
    q = FqForm(f25, (f25.one,) * 4)
    lam = finfield.multiplicative_generator(f25)
    g = matgroup.build_cyclic_generator(q, lam)
    assert matgroup.is_special_isometry(q, g)
    assert matgroup.matrix_order(g, 24) == 24


def test_order_ell_element(f7):
    q = form(f7, 1, 1, 1, 1, 4)
    g = matgroup.find_order_l_element(q, 5, orders.so_order(5, 7, 1), seed=0)
    assert matgroup.is_special_isometry(q, g)
    assert g != matgroup.identity(f7, 5)
    assert matgroup.power(g, 5) == matgroup.identity(f7, 5)
    assert matgroup.find_order_l_element(q, 5, orders.so_order(5, 7, 1), seed=0) == g
    with pytest.raises(ValueError):
        matgroup.find_order_l_element(q, 11, orders.so_order(5, 7, 1))


def test_order_three_in_so3_f3():
    q = form(F3, 1, 1, 1)
    g = matgroup.find_order_l_element(q, 3, orders.so_order(3, 3, 1), seed=5)
    assert matgroup.matrix_order(g, 3) == 3


SAMPLE_FORMS = [form(F5, 1, 2, 3), form(F7, 1, 1, 1, 3), form(F3, 1, 1, 1, 1, 2)]


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(SAMPLE_FORMS), st.data())
def test_reflections_preserve_the_form(q, data):
    v = data.draw(st.lists(st.integers(0, q.ctx.p - 1), min_size=q.dim, max_size=q.dim))
    if q.value([q.ctx.elem(c) for c in v]).is_zero():
        with pytest.raises(IsotropicVector):
            matgroup.reflection(q, v)
        return
    r = matgroup.reflection(q, v)
    assert matgroup.preserves_form(q, r)
    assert matgroup.det(r) == q.ctx.elem(-1)
    assert r @ r == matgroup.identity(q.ctx, q.dim)
    assert matgroup.apply(r, v) == [q.ctx.neg(q.ctx.elem(c)) for c in v]
