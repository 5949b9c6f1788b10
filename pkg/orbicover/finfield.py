"""Finite fields F_{p^r} = F_p[x]/(g) and polynomial factorization over F_p.

Polynomials are tuples of residues, constant term first. The dense arithmetic is delegated
to sympy's galoistools, which wants the leading coefficient first; `_to_gf`/`_from_gf`
convert at the boundary.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy
from sympy.polys import galoistools as gf
from sympy.polys.domains import ZZ

from orbicover import factoring
from orbicover.errors import DivisionByZero, NotASquare, ZeroInput

logger = logging.getLogger(__name__)


def _to_gf(poly, p:int) -> list:
    return gf.gf_strip([ZZ(int(c) % p) for c in reversed(poly)])


def _from_gf(poly:list, length:int=None) -> tuple:
    coeffs = [int(c) for c in reversed(poly)]
    if length is not None:
        coeffs += [0] * (length - len(coeffs))
    return tuple(coeffs)


def poly_mod(poly, p:int) -> tuple:
    return _from_gf(_to_gf(poly, p))


def factor_sort_key(poly:tuple, p:int) -> tuple:
    # by degree, then by the coefficients of -poly: x - c comes in increasing c
    return (len(poly) - 1, tuple((-c) % p for c in poly))


@dataclass(frozen=True)
class FqElem:
    coeffs: tuple  # length r, constant term first, entries in [0, p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class FqContext:
    p: int
    modulus: tuple  # monic irreducible over F_p, constant term first

    def __post_init__(self):
        if self.p % 2 == 0 or not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        modulus = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, 'modulus', modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError(f"modulus {list(modulus)} is not monic of degree >= 1")
        if not gf.gf_irreducible_p(_to_gf(modulus, self.p), self.p, ZZ):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{self.p}")

    @classmethod
    def prime_field(cls, p:int) -> 'FqContext':
        return cls(p, (0, 1))

    @property
    def r(self) -> int:
        return len(self.modulus) - 1

    @property
    def q(self) -> int:
        return self.p ** self.r

    @cached_property
    def _gf_modulus(self) -> list:
        return _to_gf(self.modulus, self.p)

    @cached_property
    def mul_tensor(self) -> np.ndarray:
        """T[a, b, :] = coefficients of x^(a+b) mod modulus, for numpy products."""
        r = self.r
        tensor = np.zeros((r, r, r), dtype=np.int64)
        for a in range(r):
            for b in range(r):
                monomial = [0] * (a + b) + [1]
                tensor[a, b] = self._reduce(_to_gf(monomial, self.p)).coeffs
        return tensor

    # construction
    def elem(self, value) -> FqElem:
        if isinstance(value, FqElem):
            return value
        if isinstance(value, (int, np.integer)):
            return FqElem((int(value) % self.p,) + (0,) * (self.r - 1))
        return self._reduce(_to_gf(value, self.p))

    @property
    def zero(self) -> FqElem:
        return FqElem((0,) * self.r)

    @property
    def one(self) -> FqElem:
        return self.elem(1)

    def from_index(self, index:int) -> FqElem:
        coeffs = []
        for _ in range(self.r):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FqElem(tuple(coeffs))

    def index(self, a:FqElem) -> int:
        return sum(c * self.p ** i for i, c in enumerate(a.coeffs))

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.r):
            yield FqElem(tuple(reversed(coeffs)))

    def random_elem(self, rng:np.random.Generator) -> FqElem:
        return self.from_array(rng.integers(0, self.p, size=self.r))

    def to_array(self, a:FqElem) -> np.ndarray:
        return np.array(a.coeffs, dtype=np.int64)

    def from_array(self, arr) -> FqElem:
        return FqElem(tuple(int(c) % self.p for c in arr))

    def _reduce(self, poly_gf:list) -> FqElem:
        rem = gf.gf_rem(poly_gf, self._gf_modulus, self.p, ZZ)
        return FqElem(_from_gf(rem, self.r))

    # arithmetic
    def add(self, a:FqElem, b:FqElem) -> FqElem:
        return FqElem(tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a:FqElem, b:FqElem) -> FqElem:
        return FqElem(tuple((x - y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a:FqElem) -> FqElem:
        return FqElem(tuple((-x) % self.p for x in a.coeffs))

    def mul(self, a:FqElem, b:FqElem) -> FqElem:
        if self.r == 1:
            return FqElem((a.coeffs[0] * b.coeffs[0] % self.p,))
        product = gf.gf_mul(_to_gf(a.coeffs, self.p), _to_gf(b.coeffs, self.p), self.p, ZZ)
        return self._reduce(product)

    def inv(self, a:FqElem) -> FqElem:
        if a.is_zero():
            raise DivisionByZero("zero has no inverse")
        if self.r == 1:
            return FqElem((pow(a.coeffs[0], -1, self.p),))
        s, _, h = gf.gf_gcdex(_to_gf(a.coeffs, self.p), self._gf_modulus, self.p, ZZ)
        assert h == [1], "modulus is irreducible, gcd must be 1"
        return self._reduce(s)

    def div(self, a:FqElem, b:FqElem) -> FqElem:
        return self.mul(a, self.inv(b))

    def pow(self, a:FqElem, n:int) -> FqElem:
        """Square-and-multiply; n may be arbitrarily large or negative (a != 0)."""
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return self.one
        if self.r == 1:
            return FqElem((pow(a.coeffs[0], n, self.p),))
        result = gf.gf_pow_mod(_to_gf(a.coeffs, self.p), n, self._gf_modulus, self.p, ZZ)
        return FqElem(_from_gf(result, self.r))


def fq_ops(ctx:FqContext, op:str, a:FqElem, b=None) -> FqElem:
    if op in ('inv', 'neg'):
        return getattr(ctx, op)(a)
    return getattr(ctx, op)(a, b)


def is_square(ctx:FqContext, a:FqElem) -> bool:
    if a.is_zero():
        raise ZeroInput("square test on zero")
    return ctx.pow(a, (ctx.q - 1) // 2) == ctx.one


def element_order(ctx:FqContext, a:FqElem) -> int:
    if a.is_zero():
        raise ZeroInput("zero has no multiplicative order")
    order = ctx.q - 1
    for prime in factoring.factorize(order):
        while order % prime == 0 and ctx.pow(a, order // prime) == ctx.one:
            order //= prime
    return order


def multiplicative_generator(ctx:FqContext) -> FqElem:
    group_order = ctx.q - 1
    primes = factoring.prime_divisors(group_order)
    for index in range(1, ctx.q):
        candidate = ctx.from_index(index)
        if all(ctx.pow(candidate, group_order // s) != ctx.one for s in primes):
            return candidate
    raise AssertionError("the multiplicative group of a finite field is cyclic")


def sqrt(ctx:FqContext, a:FqElem) -> FqElem:
    """Tonelli-Shanks in the cyclic group of order q - 1."""
    if a.is_zero():
        return ctx.zero
    if not is_square(ctx, a):
        raise NotASquare(f"{list(a.coeffs)} is not a square in F_{ctx.q}")
    s, t = 0, ctx.q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = next(x for x in (ctx.from_index(i) for i in range(2, ctx.q)) if not is_square(ctx, x))
    c = ctx.pow(z, t)
    x = ctx.pow(a, (t + 1) // 2)
    b = ctx.pow(a, t)
    m = s
    while b != ctx.one:
        i, b2 = 0, b
        while b2 != ctx.one:
            b2 = ctx.mul(b2, b2)
            i += 1
        c2 = ctx.pow(c, 2 ** (m - i - 1))
        x = ctx.mul(x, c2)
        c = ctx.mul(c2, c2)
        b = ctx.mul(b, c)
        m = i
    return x


def _equal_degree_split(f:list, d:int, p:int, rng:np.random.Generator) -> list:
    """Cantor-Zassenhaus splitting of a monic squarefree product of degree-d irreducibles."""
    n = gf.gf_degree(f)
    if n <= d:
        return [f]
    exponent = (p ** d - 1) // 2
    while True:
        a = gf.gf_strip([ZZ(int(c)) for c in rng.integers(0, p, size=n)])
        if gf.gf_degree(a) < 1:
            continue
        b = gf.gf_pow_mod(a, exponent, f, p, ZZ)
        g = gf.gf_gcd(f, gf.gf_sub_ground(b, ZZ(1), p, ZZ), p, ZZ)
        if 0 < gf.gf_degree(g) < n:
            break
    h = gf.gf_quo(f, g, p, ZZ)
    return _equal_degree_split(g, d, p, rng) + _equal_degree_split(h, d, p, rng)


def factor_poly_mod_p(p:int, f, seed:int=0) -> list:
    """Monic irreducible factors of f over F_p with multiplicities.

    Squarefree decomposition, distinct-degree, then equal-degree splitting driven by
    numpy default_rng(seed). Factors are returned in the canonical `factor_sort_key` order, so the
    result does not depend on the seed; the leading unit is dropped.
    """
    if p % 2 == 0:
        raise ValueError("characteristic 2 is not supported")
    f_gf = _to_gf(f, p)
    if not f_gf:
        raise ValueError("cannot factor the zero polynomial")
    _, monic = gf.gf_monic(f_gf, p, ZZ)
    rng = np.random.default_rng(seed)
    result = []
    _, squarefree = gf.gf_sqf_list(monic, p, ZZ)
    for part, multiplicity in squarefree:
        for block, degree in gf.gf_ddf_zassenhaus(part, p, ZZ):
            for factor in _equal_degree_split(block, degree, p, rng):
                result.append((_from_gf(factor), int(multiplicity)))
    result.sort(key=lambda item: factor_sort_key(item[0], p))
    logger.debug("factored %s mod %d into %d factors", list(f), p, len(result))
    return result


def poly_product_mod_p(p:int, polys) -> tuple:
    product = [ZZ(1)]
    for poly in polys:
        product = gf.gf_mul(product, _to_gf(poly, p), p, ZZ)
    return _from_gf(product)


def poly_divides_mod_p(p:int, divisor, f) -> bool:
    return not gf.gf_rem(_to_gf(f, p), _to_gf(divisor, p), p, ZZ)


def is_irreducible_mod_p(p:int, f) -> bool:
    f_gf = _to_gf(f, p)
    return gf.gf_degree(f_gf) >= 1 and bool(gf.gf_irreducible_p(gf.gf_monic(f_gf, p, ZZ)[1], p, ZZ))


def default_modulus(p:int, r:int) -> tuple:
    if r == 1:
        return (0, 1)
    for coeffs in itertools.product(range(p), repeat=r):
        candidate = tuple(reversed(coeffs)) + (1,)
        if is_irreducible_mod_p(p, candidate):
            return candidate
    raise AssertionError(f"no irreducible polynomial of degree {r} over F_{p}")
