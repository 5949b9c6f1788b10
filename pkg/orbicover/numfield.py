"""Totally real number fields k = Q[x]/(f) in the monogenic model O_k = Z[theta].

Real places are exact isolating intervals with rational endpoints (Sturm sequences plus
bisection). Nothing in here touches floating point; mpmath is only used to print roots.
"""
import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath
import sympy
from sympy import QQ, Poly

import opt
from orbicover import finfield
from orbicover.errors import (BadPrime, DenominatorNotCoprime, DyadicPrime, FieldIsRationals,
                              NoSplitPrimeInBound, NotMonic, ReduciblePolynomial)
from orbicover.finfield import FqContext, FqElem

logger = logging.getLogger(__name__)

_X = sympy.Symbol('x')


def _horner(coeffs, x:Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * x + c
    return value


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _to_fractions(poly:Poly) -> tuple:
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def _sympy_poly(coeffs) -> Poly:
    return Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                 for c in reversed(coeffs)], _X, domain=QQ)


def _sturm_chain(coeffs) -> list:
    return [_to_fractions(s) for s in sympy.sturm(_sympy_poly(coeffs))]


def _sign_variations(chain, x:Fraction) -> int:
    signs = [s for s in (_sign(_horner(poly, x)) for poly in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _bisect(min_poly, interval:tuple) -> tuple:
    a, b = interval
    mid = (a + b) / 2
    if _sign(_horner(min_poly, a)) * _sign(_horner(min_poly, mid)) < 0:
        return (a, mid)
    return (mid, b)


def _isolate_real_roots(min_poly:tuple) -> tuple:
    if len(min_poly) == 2:
        root = Fraction(-min_poly[0])
        return ((root - Fraction(1, 2), root + Fraction(1, 2)),)
    chain = _sturm_chain(min_poly)
    bound = 1 + max(abs(Fraction(c)) for c in min_poly[:-1])
    pending = [(-bound, bound)]
    isolated = []
    while pending:
        a, b = pending.pop()
        count = _sign_variations(chain, a) - _sign_variations(chain, b)
        if count == 0:
            continue
        if count == 1:
            isolated.append((a, b))
            continue
        # irreducible of degree >= 2: no rational roots, midpoints are never roots
        mid = (a + b) / 2
        pending.extend([(a, mid), (mid, b)])
    return tuple(sorted(isolated))


@dataclass(frozen=True)
class FieldElem:
    coeffs: tuple  # Fractions, constant term first, length = field degree


@dataclass(frozen=True)
class PrimeIdealFactor:
    p: int
    factor_poly: tuple  # monic irreducible mod p, constant term first
    r: int
    e: int = 1

    @property
    def residue_degree(self) -> int:
        return self.r

    def sort_key(self) -> tuple:
        return (self.p,) + finfield.factor_sort_key(self.factor_poly, self.p)


@dataclass(frozen=True)
class NumberField:
    min_poly: tuple
    degree: int
    poly_disc: int
    real_roots: tuple  # isolating intervals (a, b) with Fraction endpoints, increasing
    irreducibility_prime: int = None  # prime certifying irreducibility mod p, None for the exact check

    @cached_property
    def _modulus(self) -> Poly:
        return _sympy_poly(self.min_poly)

    # elements
    def elem(self, coeffs) -> FieldElem:
        values = [Fraction(c) for c in coeffs]
        if len(values) > self.degree:
            poly = _sympy_poly(values).rem(self._modulus)
            values = list(_to_fractions(poly))
        values += [Fraction(0)] * (self.degree - len(values))
        return FieldElem(tuple(values))

    @property
    def one(self) -> FieldElem:
        return self.elem([1])

    def add(self, a:FieldElem, b:FieldElem) -> FieldElem:
        return FieldElem(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a:FieldElem, b:FieldElem) -> FieldElem:
        return FieldElem(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a:FieldElem) -> FieldElem:
        return FieldElem(tuple(-x for x in a.coeffs))

    def mul(self, a:FieldElem, b:FieldElem) -> FieldElem:
        product = (_sympy_poly(a.coeffs) * _sympy_poly(b.coeffs)).rem(self._modulus)
        return self.elem(_to_fractions(product))

    def product(self, elems) -> FieldElem:
        result = self.one
        for e in elems:
            result = self.mul(result, e)
        return result

    def norm_denominators(self, elems) -> list:
        return sorted({c.denominator for e in elems for c in e.coeffs if c.denominator != 1})

    def is_zero(self, a:FieldElem) -> bool:
        return not any(a.coeffs)

    @property
    def real_places(self) -> int:
        return len(self.real_roots)


def make_field(coeffs) -> NumberField:
    if any(isinstance(c, bool) or int(c) != c for c in coeffs):
        raise NotMonic(f"coefficients of {list(coeffs)} must be integers")
    min_poly = tuple(int(c) for c in coeffs)
    if len(min_poly) < 2 or min_poly[-1] != 1:
        raise NotMonic(f"{list(min_poly)} is not monic of degree >= 1")
    degree = len(min_poly) - 1
    poly = Poly(list(reversed(min_poly)), _X, domain='ZZ')
    poly_disc = int(sympy.discriminant(poly)) if degree > 1 else 1
    if poly_disc == 0:
        raise ReduciblePolynomial(f"{list(min_poly)} has a repeated factor")

    witness = None
    if degree > 1:
        tried, p = 0, 2
        while tried < opt.irreducibility_primes:
            p = sympy.nextprime(p)
            if poly_disc % p == 0:
                continue
            tried += 1
            if finfield.is_irreducible_mod_p(p, min_poly):
                witness = p
                break
        if witness is None:
            logger.debug("no mod-p irreducibility witness for %s, factoring over Q", list(min_poly))
            if not poly.is_irreducible:
                raise ReduciblePolynomial(f"{list(min_poly)} factors over Q")

    return NumberField(min_poly=min_poly, degree=degree, poly_disc=poly_disc,
                       real_roots=_isolate_real_roots(min_poly), irreducibility_prime=witness)


def is_totally_real(field:NumberField) -> bool:
    return len(field.real_roots) == field.degree


def refine_roots(field:NumberField, steps:int=1) -> NumberField:
    roots = []
    for interval in field.real_roots:
        for _ in range(steps if field.degree > 1 else 0):
            interval = _bisect(field.min_poly, interval)
        roots.append(interval)
    return dataclasses.replace(field, real_roots=tuple(roots))


def sign_at(field:NumberField, elem:FieldElem, place:int) -> int:
    """Certified sign of elem at the real embedding theta -> root `place`."""
    coeffs = elem.coeffs
    if not any(coeffs):
        return 0
    if not any(coeffs[1:]):
        return _sign(coeffs[0])
    interval = field.real_roots[place]
    chain = _sturm_chain(coeffs)
    while True:
        a, b = interval
        va, vb = _horner(coeffs, a), _horner(coeffs, b)
        if va != 0 and vb != 0 and _sign_variations(chain, a) == _sign_variations(chain, b):
            return _sign(va)
        interval = _bisect(field.min_poly, interval)
        logger.debug("refined place %d to width %s", place, interval[1] - interval[0])


def root_approximation(field:NumberField, place:int, digits:int=None) -> mpmath.mpf:
    digits = opt.root_digits if digits is None else digits
    a, b = field.real_roots[place]
    tolerance = Fraction(1, 10 ** (digits + 2))
    while field.degree > 1 and b - a > tolerance:
        a, b = _bisect(field.min_poly, (a, b))
    mid = (a + b) / 2
    with mpmath.workdps(digits + 10):
        return mpmath.mpf(mid.numerator) / mid.denominator


def factor_prime(field:NumberField, p:int) -> list:
    """Dedekind factorization of p O_k for odd p not dividing the polynomial discriminant."""
    if p == 2:
        raise DyadicPrime("2 is dyadic")
    if p < 2 or not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if field.poly_disc % p == 0:
        raise BadPrime(p, field.poly_disc)
    factors = finfield.factor_poly_mod_p(p, field.min_poly)
    return [PrimeIdealFactor(p=p, factor_poly=poly, r=len(poly) - 1, e=multiplicity)
            for poly, multiplicity in factors]


def residue_field(pf:PrimeIdealFactor) -> FqContext:
    return FqContext(pf.p, pf.factor_poly)


def reduce_element(field:NumberField, elem:FieldElem, pf:PrimeIdealFactor, ctx:FqContext=None) -> FqElem:
    ctx = residue_field(pf) if ctx is None else ctx
    if ctx.p != pf.p or ctx.modulus != pf.factor_poly:
        raise ValueError("residue field does not match the prime")
    residues = []
    for c in elem.coeffs:
        if c.denominator % pf.p == 0:
            raise DenominatorNotCoprime(pf.p, c.denominator)
        residues.append(c.numerator * pow(c.denominator, -1, pf.p) % pf.p)
    return ctx.elem(residues)


def find_split_pair(field:NumberField, bound:int, accept=None) -> tuple:
    """Smallest odd good prime p <= bound with two factors of equal residue degree.

    `accept` optionally filters factors (e.g. to primes of good reduction); returns
    (p, first, second) with the smallest shared degree and the first two factors in order.
    """
    if field.degree == 1:
        raise FieldIsRationals("Q has no split primes")
    for p in sympy.primerange(3, bound + 1):
        if field.poly_disc % p == 0:
            continue
        by_degree = {}
        for pf in factor_prime(field, p):
            if accept is None or accept(pf):
                by_degree.setdefault(pf.r, []).append(pf)
        for degree in sorted(by_degree):
            if len(by_degree[degree]) >= 2:
                first, second = by_degree[degree][:2]
                return p, first, second
    raise NoSplitPrimeInBound(f"no prime <= {bound} has two factors of equal residue degree")
