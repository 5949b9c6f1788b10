"""Explicit matrices over F_{p^r}.

A matrix is an int64 tensor of shape (dim, dim, r): entry (i, j) holds the coefficient vector of
an element of F_p[x]/(g). Products go through einsum with the context's multiplication tensor,
followed by reduction mod p.
"""
import logging
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

import opt
from orbicover import factoring, finfield, orders
from orbicover.errors import (DimMismatch, DivisionByZero, IsotropicVector, NoIsotropicVector, NotSquareDisc,
                              SearchBudgetExceeded, TooLarge)
from orbicover.finfield import FqContext, FqElem
from orbicover.orders import FactoredOrder
from orbicover.quadform import FqForm

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FqMatrix:
    ctx: FqContext
    data: np.ndarray  # [dim, dim, r]

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def entry(self, i:int, j:int) -> FqElem:
        return self.ctx.from_array(self.data[i, j])

    def entries(self) -> list:
        return [[list(self.entry(i, j).coeffs) for j in range(self.dim)] for i in range(self.dim)]

    @classmethod
    def from_entries(cls, ctx:FqContext, rows) -> 'FqMatrix':
        data = np.array([[ctx.to_array(ctx.elem(e)) for e in row] for row in rows], dtype=np.int64)
        return cls(ctx, data.reshape(len(rows), len(rows), ctx.r))

    def __eq__(self, other):
        return isinstance(other, FqMatrix) and self.ctx == other.ctx and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.ctx, self.data.tobytes()))

    def __matmul__(self, other:'FqMatrix') -> 'FqMatrix':
        return FqMatrix(self.ctx, _matmul(self.ctx, self.data, other.data))

    def transpose(self) -> 'FqMatrix':
        return FqMatrix(self.ctx, self.data.transpose(1, 0, 2).copy())


def _matmul(ctx:FqContext, a:np.ndarray, b:np.ndarray) -> np.ndarray:
    return np.einsum('ika,kjb,abc->ijc', a, b, ctx.mul_tensor) % ctx.p


def _matvec(ctx:FqContext, a:np.ndarray, v:np.ndarray) -> np.ndarray:
    return np.einsum('ika,kb,abc->ic', a, v, ctx.mul_tensor) % ctx.p


def _dot(ctx:FqContext, x:np.ndarray, y:np.ndarray) -> np.ndarray:
    return np.einsum('ia,ib,abc->c', x, y, ctx.mul_tensor) % ctx.p


def _scale(ctx:FqContext, c:FqElem, x:np.ndarray) -> np.ndarray:
    return np.einsum('a,...b,abc->...c', ctx.to_array(c), x, ctx.mul_tensor) % ctx.p


def identity(ctx:FqContext, dim:int) -> FqMatrix:
    data = np.zeros((dim, dim, ctx.r), dtype=np.int64)
    data[np.arange(dim), np.arange(dim), 0] = 1
    return FqMatrix(ctx, data)


def scalar_matrix(ctx:FqContext, dim:int, c:FqElem) -> FqMatrix:
    return FqMatrix(ctx, _scale(ctx, c, identity(ctx, dim).data))


def subtract(a:FqMatrix, b:FqMatrix) -> FqMatrix:
    return FqMatrix(a.ctx, (a.data - b.data) % a.ctx.p)


def gram_matrix(form) -> FqMatrix:
    if isinstance(form, FqMatrix):
        return form
    data = np.zeros((form.dim, form.dim, form.ctx.r), dtype=np.int64)
    for i, a in enumerate(form.diagonal):
        data[i, i] = form.ctx.to_array(a)
    return FqMatrix(form.ctx, data)


def bilinear(form, x, y) -> FqElem:
    gram = gram_matrix(form)
    return gram.ctx.from_array(_dot(gram.ctx, _vector(gram.ctx, x), _matvec(gram.ctx, gram.data, _vector(gram.ctx, y))))


def _vector(ctx:FqContext, v) -> np.ndarray:
    if isinstance(v, np.ndarray):
        return v % ctx.p
    return np.array([ctx.to_array(ctx.elem(e)) for e in v], dtype=np.int64)


def _echelon(ctx:FqContext, rows:list) -> tuple:
    """Row-reduce a list of FqElem rows in place; returns (pivot columns, determinant factor)."""
    pivots = []
    det = ctx.one
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    row = 0
    for col in range(n_cols):
        pivot = next((i for i in range(row, n_rows) if not rows[i][col].is_zero()), None)
        if pivot is None:
            det = ctx.zero
            continue
        if pivot != row:
            rows[row], rows[pivot] = rows[pivot], rows[row]
            det = ctx.neg(det)
        lead = rows[row][col]
        det = ctx.mul(det, lead)
        inv = ctx.inv(lead)
        rows[row] = [ctx.mul(inv, e) for e in rows[row]]
        for i in range(n_rows):
            if i != row and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [ctx.sub(e, ctx.mul(factor, f)) for e, f in zip(rows[i], rows[row])]
        pivots.append(col)
        row += 1
        if row == n_rows:
            break
    return pivots, det


def det(m:FqMatrix) -> FqElem:
    rows = [[m.entry(i, j) for j in range(m.dim)] for i in range(m.dim)]
    pivots, value = _echelon(m.ctx, rows)
    return value if len(pivots) == m.dim else m.ctx.zero


def inverse(m:FqMatrix) -> FqMatrix:
    ctx, dim = m.ctx, m.dim
    rows = [[m.entry(i, j) for j in range(dim)] + [ctx.one if i == j else ctx.zero for j in range(dim)]
            for i in range(dim)]
    pivots, _ = _echelon(ctx, rows)
    if pivots[:dim] != list(range(dim)):
        raise DivisionByZero("matrix is singular")
    return FqMatrix.from_entries(ctx, [row[dim:] for row in rows])


def _rank_subset(ctx:FqContext, vectors:list) -> list:
    chosen, basis = [], []
    for i, v in enumerate(vectors):
        rows = basis + [[ctx.from_array(c) for c in v]]
        pivots, _ = _echelon(ctx, [list(r) for r in rows])
        if len(pivots) == len(rows):
            chosen.append(i)
            basis.append([ctx.from_array(c) for c in v])
    return chosen


def power(m:FqMatrix, n:int) -> FqMatrix:
    if n < 0:
        return power(inverse(m), -n)
    result = identity(m.ctx, m.dim)
    base = m
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def matrix_order(g:FqMatrix, multiple:int) -> int:
    """Exact order of g given a known multiple, by divisor descent."""
    one = identity(g.ctx, g.dim)
    if power(g, multiple) != one:
        raise ValueError(f"g^{multiple} is not the identity")
    order = multiple
    for prime in factoring.factorize(multiple):
        while order % prime == 0 and power(g, order // prime) == one:
            order //= prime
    return order


def charpoly_at(g:FqMatrix, x) -> FqElem:
    return det(subtract(scalar_matrix(g.ctx, g.dim, g.ctx.elem(x)), g))


def _check_dim(form, m:FqMatrix):
    gram = gram_matrix(form)
    if gram.dim != m.dim or gram.ctx != m.ctx:
        raise DimMismatch(f"form of dimension {gram.dim} against a {m.dim}x{m.dim} matrix")
    return gram


def preserves_form(form, m:FqMatrix) -> bool:
    gram = _check_dim(form, m)
    return m.transpose() @ gram @ m == gram


def is_special_isometry(form, m:FqMatrix) -> bool:
    return preserves_form(form, m) and det(m) == m.ctx.one


def reflection(form:FqForm, v) -> FqMatrix:
    """x -> x - (2 B(x, v) / q(v)) v, i.e. R = I - (2 / q(v)) v v^T G."""
    ctx = form.ctx
    vec = _vector(ctx, v)
    if vec.shape[0] != form.dim:
        raise DimMismatch(f"vector of length {vec.shape[0]} for a form of dimension {form.dim}")
    gram = gram_matrix(form)
    qv = bilinear(gram, vec, vec)
    if qv.is_zero():
        raise IsotropicVector(f"q(v) = 0 for v = {vec.tolist()}")
    coefficient = ctx.div(ctx.elem(2), qv)
    outer = np.einsum('ia,jb,abc->ijc', vec, vec, ctx.mul_tensor) % ctx.p
    projection = _scale(ctx, coefficient, _matmul(ctx, outer, gram.data))
    return subtract(identity(ctx, form.dim), FqMatrix(ctx, projection))


def _random_vector(ctx:FqContext, dim:int, rng:np.random.Generator) -> np.ndarray:
    return rng.integers(0, ctx.p, size=(dim, ctx.r), dtype=np.int64)


def random_so_element(form:FqForm, seed) -> FqMatrix:
    rng = np.random.default_rng(seed)
    gram = gram_matrix(form)
    result = identity(form.ctx, form.dim)
    for _ in range(2 * form.dim):
        while True:
            v = _random_vector(form.ctx, form.dim, rng)
            if not bilinear(gram, v, v).is_zero():
                break
        result = result @ reflection(form, v)
    return result


def _all_vectors(ctx:FqContext, dim:int) -> np.ndarray:
    elements = np.array([ctx.to_array(e) for e in ctx.elements()], dtype=np.int64)
    grids = np.meshgrid(*[np.arange(ctx.q)] * dim, indexing='ij')
    indices = np.stack([g.ravel() for g in grids], axis=1)
    return elements[indices]


def _element_index(ctx:FqContext, coeffs:np.ndarray) -> np.ndarray:
    return (coeffs * ctx.p ** np.arange(ctx.r)).sum(axis=-1)


def brute_force_so_count(form) -> int:
    """|SO| by exhaustive search over matrices with M^T G M = G, column by column."""
    gram = gram_matrix(form)
    ctx, dim = gram.ctx, gram.dim
    if ctx.q ** (dim * dim) > opt.brute_force_limit:
        raise TooLarge(f"q^(dim^2) = {ctx.q}^{dim * dim} exceeds {opt.brute_force_limit}")
    vectors = _all_vectors(ctx, dim)  # [N, dim, r]
    gv = np.einsum('ika,nkb,abc->nic', gram.data, vectors, ctx.mul_tensor) % ctx.p
    pairing = np.einsum('nia,mib,abc->nmc', vectors, gv, ctx.mul_tensor) % ctx.p
    pairing = _element_index(ctx, pairing)  # [N, N], index of B(v_n, v_m)
    target = _element_index(ctx, gram.data)  # [dim, dim]

    count = 0
    columns = []

    def extend(mask:np.ndarray):
        nonlocal count
        j = len(columns)
        candidates = np.flatnonzero(mask & (pairing.diagonal() == target[j, j]))
        for c in candidates:
            columns.append(c)
            if j + 1 == dim:
                m = FqMatrix(ctx, vectors[columns].transpose(1, 0, 2).copy())
                if det(m) == ctx.one:
                    count += 1
            else:
                extend(mask & np.all(pairing[:, columns] == target[j + 1, :j + 1], axis=1))
            columns.pop()

    first = np.flatnonzero(pairing.diagonal() == target[0, 0])
    for c in tqdm(first, desc='brute force', disable=not opt.show_progress):
        columns.append(c)
        if dim == 1:
            count += int(det(FqMatrix(ctx, vectors[columns].transpose(1, 0, 2).copy())) == ctx.one)
        else:
            extend(np.all(pairing[:, columns] == target[1, :1], axis=1))
        columns.pop()
    return count


def sphere_count(form:FqForm, value:FqElem) -> int:
    ctx = form.ctx
    if ctx.q ** form.dim > opt.point_count_limit:
        raise TooLarge(f"q^dim = {ctx.q}^{form.dim} exceeds {opt.point_count_limit}")
    elements = np.array([ctx.to_array(e) for e in ctx.elements()], dtype=np.int64)  # [q, r]
    squares = np.einsum('na,nb,abc->nc', elements, elements, ctx.mul_tensor) % ctx.p
    partial = np.zeros((1, ctx.r), dtype=np.int64)
    for a in form.diagonal:
        terms = _scale(ctx, a, squares)  # [q, r]
        partial = ((partial[:, None, :] + terms[None, :, :]) % ctx.p).reshape(-1, ctx.r)
    return int(np.all(partial == ctx.to_array(value), axis=1).sum())


def point_count_so_order(form:FqForm) -> int:
    """|SO| from |O(d)| = #{v : q(v) = a_1} * |O(d - 1)|, |O(1)| = 2."""
    order = 2
    for i in range(form.dim - 1):
        tail = FqForm(form.ctx, form.diagonal[i:])
        order *= sphere_count(tail, form.diagonal[i])
    logger.debug("point count for %s over F_%d: |O| = %d", form.type_label, form.ctx.q, order)
    return order // 2


def _hyperbolic_gram(ctx:FqContext, dim:int) -> FqMatrix:
    data = np.zeros((dim, dim, ctx.r), dtype=np.int64)
    for i in range(0, dim, 2):
        data[i, i + 1, 0] = data[i + 1, i, 0] = 1
    return FqMatrix(ctx, data)


def _isotropic_in_plane(gram:FqMatrix, u:np.ndarray, w:np.ndarray):
    ctx = gram.ctx
    qu, qw, buw = bilinear(gram, u, u), bilinear(gram, w, w), bilinear(gram, u, w)
    if qu.is_zero() and u.any():
        return u
    if qu.is_zero():
        return None
    # q(x u + w) = x^2 q(u) + 2 x B(u, w) + q(w)
    delta = ctx.sub(ctx.mul(buw, buw), ctx.mul(qu, qw))
    if not delta.is_zero() and not finfield.is_square(ctx, delta):
        return None
    x = ctx.div(ctx.sub(finfield.sqrt(ctx, delta), buw), qu)
    v = (_scale(ctx, x, u) + w) % ctx.p
    return v if v.any() else None


def witt_hyperbolic_basis(form, seed:int=0) -> FqMatrix:
    """B with B^T G B = blockdiag([[0, 1], [1, 0]], ...) for a fully hyperbolic form."""
    gram = gram_matrix(form)
    ctx, dim = gram.ctx, gram.dim
    hyperbolic = _hyperbolic_gram(ctx, dim) if dim % 2 == 0 else None
    if gram == hyperbolic:
        return identity(ctx, dim)
    if dim % 2 == 1:
        raise NotSquareDisc(f"odd dimension {dim} is never fully hyperbolic")
    signed = det(gram) if (dim // 2) % 2 == 0 else ctx.neg(det(gram))
    if signed.is_zero():
        raise DimMismatch("form is degenerate")
    if not finfield.is_square(ctx, signed):
        if dim == 2:
            raise NoIsotropicVector("-disc is not a square: the binary form is anisotropic")
        raise NotSquareDisc("signed discriminant is not a square")

    rng = np.random.default_rng(seed)
    space = [identity(ctx, dim).data[:, i] for i in range(dim)]  # basis columns of the current W
    columns = []
    while space:
        e = None
        for attempt in range(opt.isotropic_search_budget):
            if attempt == 0:
                u, w = space[0], space[1]
            else:
                u = sum(_scale(ctx, ctx.random_elem(rng), s) for s in space) % ctx.p
                w = sum(_scale(ctx, ctx.random_elem(rng), s) for s in space) % ctx.p
            e = _isotropic_in_plane(gram, u, w)
            if e is not None:
                break
        if e is None:
            raise SearchBudgetExceeded(f"no isotropic vector after {opt.isotropic_search_budget} attempts")
        u = next(s for s in space if not bilinear(gram, e, s).is_zero())
        u = _scale(ctx, ctx.inv(bilinear(gram, e, u)), u)
        half = ctx.div(bilinear(gram, u, u), ctx.elem(2))
        f = (u - _scale(ctx, half, e)) % ctx.p
        columns += [e, f]
        projected = [(s - _scale(ctx, bilinear(gram, s, f), e) - _scale(ctx, bilinear(gram, s, e), f)) % ctx.p
                     for s in space]
        space = [projected[i] for i in _rank_subset(ctx, projected)]
    basis = FqMatrix(ctx, np.stack(columns, axis=1))
    assert basis.transpose() @ gram @ basis == hyperbolic, "hyperbolic basis check failed"
    return basis


def build_cyclic_generator(form, lam) -> FqMatrix:
    """g = B diag(lam, lam^-1, ...) B^-1 in a hyperbolic basis B."""
    basis = witt_hyperbolic_basis(form)
    ctx, dim = basis.ctx, basis.dim
    lam = ctx.elem(lam)
    inv = ctx.inv(lam)
    data = np.zeros((dim, dim, ctx.r), dtype=np.int64)
    for i in range(0, dim, 2):
        data[i, i] = ctx.to_array(lam)
        data[i + 1, i + 1] = ctx.to_array(inv)
    return basis @ FqMatrix(ctx, data) @ inverse(basis)


def eigenvalue_pm1_avoidance(g:FqMatrix, a:int, ell:int) -> bool:
    ctx = g.ctx
    base = power(g, a)
    h = identity(ctx, g.dim)
    for _ in range(1, ell):
        h = h @ base
        if charpoly_at(h, 1).is_zero() or charpoly_at(h, -1).is_zero():
            return False
    return True


def find_order_l_element(form:FqForm, ell:int, group_order:FactoredOrder, seed:int=0) -> FqMatrix:
    """Element of exact order ell, from random h powered to the ell-free part of |G|."""
    n = group_order.value()
    if n % ell != 0:
        raise ValueError(f"{ell} does not divide |G| = {n}")
    cofactor = n // ell ** orders.ell_adic_valuation(n, ell)
    one = identity(form.ctx, form.dim)
    for attempt in range(opt.witness_attempts):
        x = power(random_so_element(form, (seed, attempt)), cofactor)
        if x == one:
            continue
        while power(x, ell) != one:
            x = power(x, ell)
        logger.debug("order-%d element found after %d attempts", ell, attempt + 1)
        return x
    raise SearchBudgetExceeded(f"no element of order {ell} in {opt.witness_attempts} attempts")


def apply(m:FqMatrix, v) -> list:
    return [m.ctx.from_array(c) for c in _matvec(m.ctx, m.data, _vector(m.ctx, v))]


def standard_form(dim:int, p:int, r:int=1, square_class:str=None) -> FqForm:
    ctx = FqContext(p, finfield.default_modulus(p, r))
    last = ctx.one
    if dim % 2 == 0:
        if square_class == 'nonsquare':
            last = finfield.multiplicative_generator(ctx)
        if (dim // 2) % 2 == 1:
            last = ctx.neg(last)
    return FqForm(ctx, (ctx.one,) * (dim - 1) + (last,))
