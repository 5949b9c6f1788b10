"""Orders of finite special orthogonal groups kept in factored form.

An order is p^X * prod (p^a + s); divisibility by a prime ell != p is decided from
ord_ell(p) alone, so nothing here expands a group order unless `value()` is asked for.
"""
import logging
from dataclasses import dataclass, field
from math import prod

import sympy

from orbicover import factoring
from orbicover.errors import (DimMismatch, DimensionTooSmall, EllEqualsP, EllNotValid, EvenDimension,
                              MissingSquareClass, NoOddPrimeDivisor, ZsigmondyFailure)

logger = logging.getLogger(__name__)

UNBOUNDED = 'unbounded'
SQUARE_CLASSES = ('square', 'nonsquare')
MODES = ('paper', 'strict')

ODD_DIM = 'OddDim'
EVEN_NONSQUARE = 'EvenNonsquareDisc'
EVEN_SQUARE = 'EvenSquareDisc'


@dataclass(frozen=True)
class FactoredOrder:
    p: int
    p_exponent: object  # int >= 0 or UNBOUNDED
    factors: tuple  # (a, s) pairs meaning p^a + s, s in {+1, -1}
    label: str = ''

    @property
    def bounded(self) -> bool:
        return self.p_exponent != UNBOUNDED

    def prime_to_p_part(self) -> int:
        return prod(self.p ** a + s for a, s in self.factors)

    def value(self) -> int:
        if not self.bounded:
            raise ValueError(f"{self.label} has an unbounded p-part")
        return self.p ** self.p_exponent * self.prime_to_p_part()

    def same_factors(self, other:'FactoredOrder') -> bool:
        return sorted(self.factors) == sorted(other.factors)

    def __str__(self):
        p_part = f"{self.p}^X" if not self.bounded else f"{self.p}^{self.p_exponent}"
        terms = ''.join(f"({self.p}^{a}{'+' if s > 0 else '-'}1)" for a, s in self.factors)
        return p_part + terms


@dataclass(frozen=True)
class AvoidanceCheck:
    bound_label: str
    factors: tuple
    divides: bool
    role: str = 'required'  # required | diagnostic | strict
    kind: str = 'coarse'  # coarse | table | split | order | eigenvalue

    @property
    def passed(self) -> bool:
        return not (self.role == 'required' and self.divides)


@dataclass(frozen=True)
class CoverPrime:
    ell: int
    branch: str
    d: int
    avoidance_report: tuple
    a: int = None  # (q - 1) / ell on the square-discriminant branch
    mode: str = 'paper'
    witness: object = field(default=None, compare=False)


def _product(p:int, r:int, upper:int) -> list:
    # prod_{j=1}^{upper} (p^{2rj} - 1)
    return [(2 * r * j, -1) for j in range(1, upper + 1)]


def so_order(dim:int, p:int, r:int, square_class:str=None) -> FactoredOrder:
    if dim < 1:
        raise DimensionTooSmall(f"dimension {dim}")
    n = dim // 2
    if dim % 2 == 1:
        return FactoredOrder(p, r * n * n, tuple(_product(p, r, n)), f"B_{n}")
    if square_class not in SQUARE_CLASSES:
        raise MissingSquareClass(f"even dimension {dim} needs a square class, got {square_class!r}")
    sign = -1 if square_class == 'square' else 1
    label = f"D_{n}_split" if square_class == 'square' else f"D_{n}_nonsplit"
    return FactoredOrder(p, r * n * (n - 1), tuple([(r * n, sign)] + _product(p, r, n - 1)), label)


def _row(p:int, r:int, label:str, singles:list, uppers:list):
    if any(a <= 0 for a, _ in singles) or any(u < 0 for u in uppers):
        return None
    factors = list(singles)
    for u in uppers:
        factors += _product(p, r, u)
    return FactoredOrder(p, UNBOUNDED, tuple(factors), label)


def _odd_rows(n:int, p:int, r:int) -> list:
    rows = [_row(p, r, 'T1', [], [n - 1]),
            _row(p, r, 'T2', [(2 * r, -1), (2 * r, -1)], [n - 3])]
    for k in range(3, n - 2):
        for s in (1, -1):
            rows.append(_row(p, r, f"T3 k={k} {'+' if s > 0 else '-'}", [(r * (k - 1), s)], [k - 2, n - k]))
    for s in (1, -1):
        sign = '+' if s > 0 else '-'
        rows.append(_row(p, r, f"T4 {sign}", [(2 * r, -1), (r * (n - 2), s)], [n - 3]))
    for s in (1, -1):
        rows.append(_row(p, r, f"T5 {'+' if s > 0 else '-'}", [(r * (n - 1), s)], [n - 2]))
    rows.append(_row(p, r, 'T6', [], [n - 2]))
    rows.append(_row(p, r, 'T7', [(2 * r, -1)], [n - 3]))
    for k in range(3, n - 2):
        rows.append(_row(p, r, f"T8 k={k}", [], [k - 1, n - k - 1]))
    return rows


def _even_rows(n:int, p:int, r:int) -> list:
    rows = []
    for s in (1, -1):
        rows.append(_row(p, r, f"S1 {'+' if s > 0 else '-'}", [(r * n, s)], [n - 1]))
    for s in (1, -1):
        rows.append(_row(p, r, f"S2 {'+' if s > 0 else '-'}", [(2 * r, -1), (2 * r, -1), (r * (n - 2), s)], [n - 3]))
    for k in range(3, n - 2):
        for s1 in (1, -1):
            for s2 in (1, -1):
                label = f"S3 k={k} {'+' if s1 > 0 else '-'}{'+' if s2 > 0 else '-'}"
                rows.append(_row(p, r, label, [(r * k, s1), (r * (n - k), s2)], [k - 1, n - k - 1]))
    rows.append(_row(p, r, 'S4', [], [n - 1]))
    rows.append(_row(p, r, 'S5', [(2 * r, -1)], [n - 2]))
    for k in range(3, n - 1):
        rows.append(_row(p, r, f"S6 k={k}", [], [k - 1, n - k]))
    return rows


def subgroup_bound_tables(subform_dim:int, p:int, r:int) -> list:
    """Every order bound p^X * Y for images of subgroups attached to a subform of this dimension.

    Odd subforms use 2n - 1 = subform_dim; even subforms use 2n = subform_dim and also get the
    odd-type rows for the same n. Rows whose indices fall out of range are dropped.
    """
    if subform_dim < 4:
        raise DimensionTooSmall(f"tables start at subform dimension 4, got {subform_dim}")
    if subform_dim % 2 == 1:
        rows = _odd_rows((subform_dim + 1) // 2, p, r)
    else:
        n = subform_dim // 2
        rows = _even_rows(n, p, r) + _odd_rows(n, p, r)
    return [row for row in rows if row is not None]


def _coarse(p:int, r:int, n:int, label:str) -> FactoredOrder:
    factors = [(j, -1) for j in range(1, 2 * r * (n - 1) + 1)]
    factors += [(j, 1) for j in range(1, r * (n - 1) + 1)]
    return FactoredOrder(p, UNBOUNDED, tuple(factors), label)


def coarse_subgroup_bound(dim_q:int, p:int, r:int) -> FactoredOrder:
    if dim_q % 2 == 0:
        raise EvenDimension(f"coarse bound is for odd dimension, got {dim_q}")
    return _coarse(p, r, (dim_q - 1) // 2, 'coarse')


def factor_divisible(ell:int, p:int, a:int, s:int, order:int=None) -> bool:
    """ell | p^a + s, decided through o = ord_ell(p)."""
    if ell == 2:
        return True
    o = factoring.multiplicative_order(p, ell) if order is None else order
    if s == -1:
        return a % o == 0
    return (2 * a) % o == 0 and a % o != 0


def prime_divides_factored(ell:int, fo:FactoredOrder) -> bool:
    if ell == fo.p:
        raise EllEqualsP(f"ell = p = {ell}")
    if not fo.factors:
        return False
    if ell == 2:
        # p odd, so every p^a +- 1 is even
        return True
    o = factoring.multiplicative_order(fo.p, ell)
    return any(factor_divisible(ell, fo.p, a, s, o) for a, s in fo.factors)


def zsigmondy_prime(p:int, d:int, seed:int=0) -> int:
    """Smallest prime ell | p^d + 1 with ord_ell(p) = 2d."""
    if d < 2 or p % 2 == 0 or not sympy.isprime(p):
        raise ValueError(f"need an odd prime p and d >= 2, got p={p}, d={d}")
    for ell in factoring.factorize(p ** d + 1, seed=seed):
        if ell != 2 and factoring.multiplicative_order(p, ell) == 2 * d:
            return ell
    raise ZsigmondyFailure(f"{p}^{d} + 1 has no primitive prime divisor")


def smallest_odd_prime_divisor(n:int, seed:int=0) -> int:
    odd = n >> factoring.valuation(n, 2) if n else 0
    if odd <= 1:
        raise NoOddPrimeDivisor(f"{n} has no odd prime divisor")
    return min(factoring.factorize(odd, seed=seed))


def ell_adic_valuation(n:int, ell:int) -> int:
    return factoring.valuation(n, ell)


def cover_branch(fqform) -> tuple:
    n = fqform.dim // 2
    if fqform.dim % 2 == 1:
        return ODD_DIM, n
    if fqform.square_class == 'square':
        return EVEN_SQUARE, n
    return EVEN_NONSQUARE, n


def branch_condition(ell:int, p:int, r:int, branch:str, n:int) -> bool:
    """ell is admissible for the branch: primitive of order 2nr, or an odd divisor of p^r - 1."""
    if ell == p or ell % 2 == 0 or not sympy.isprime(ell):
        return False
    if branch == EVEN_SQUARE:
        return (p ** r - 1) % ell == 0
    return factoring.multiplicative_order(p, ell) == 2 * n * r


def _check(ell:int, fo:FactoredOrder, role:str, kind:str, label:str=None) -> AvoidanceCheck:
    return AvoidanceCheck(label or fo.label, fo.factors, prime_divides_factored(ell, fo), role, kind)


def avoidance_report(dim:int, m:int, p:int, r:int, ell:int, branch:str, mode:str='paper') -> tuple:
    n = dim // 2
    checks = []
    if branch == EVEN_SQUARE:
        # ell odd and ell | q - 1: every nontrivial power of a generator of order ell avoids +-1
        checks.append(AvoidanceCheck('eigenvalue +-1', (),
                                     not branch_condition(ell, p, r, branch, n), 'required', 'eigenvalue'))
    else:
        checks.append(_check(ell, _coarse(p, r, n, 'coarse'), 'required', 'coarse'))

    for d0 in range(4, m + 1):
        for row in subgroup_bound_tables(d0, p, r):
            checks.append(_check(ell, row, 'diagnostic', 'table', f"dim {d0} {row.label}"))
    for d0 in range(1, (m + 1) // 2 + 1):
        d1 = m + 1 - d0
        classes0 = (None,) if d0 % 2 else SQUARE_CLASSES
        classes1 = (None,) if d1 % 2 else SQUARE_CLASSES
        for c0 in classes0:
            for c1 in classes1:
                left, right = so_order(d0, p, r, c0), so_order(d1, p, r, c1)
                fo = FactoredOrder(p, UNBOUNDED, left.factors + right.factors, f"{left.label} x {right.label}")
                checks.append(_check(ell, fo, 'diagnostic', 'split', f"split {d0}+{d1} {fo.label}"))
    if mode == 'strict':
        for d0 in range(3, m + 1):
            for c in ((None,) if d0 % 2 else SQUARE_CLASSES):
                fo = so_order(d0, p, r, c)
                check = _check(ell, fo, 'strict', 'order', f"SO({d0}) {fo.label}")
                if check.divides:
                    logger.warning("strict mode: ell = %d divides |%s| over F_%d^%d", ell, check.bound_label, p, r)
                checks.append(check)
    return tuple(checks)


def cover_prime_for_ell(fqform, m:int, ell:int, mode:str='paper') -> CoverPrime:
    """CoverPrime for a caller-chosen ell; EllNotValid unless ell fits the branch and avoids."""
    if fqform.dim != m + 1:
        raise DimMismatch(f"form of dimension {fqform.dim} for m = {m}")
    p, r = fqform.ctx.p, fqform.ctx.r
    branch, n = cover_branch(fqform)
    if not branch_condition(ell, p, r, branch, n):
        raise EllNotValid(f"ell = {ell} is not admissible for {branch} over F_{p}^{r}")
    report = avoidance_report(fqform.dim, m, p, r, ell, branch, mode)
    failed = [c.bound_label for c in report if not c.passed]
    if failed:
        raise EllNotValid(f"ell = {ell} divides {failed}")
    d = r if branch == EVEN_SQUARE else n * r
    a = (p ** r - 1) // ell if branch == EVEN_SQUARE else None
    return CoverPrime(ell=ell, branch=branch, d=d, avoidance_report=report, a=a, mode=mode)


def select_cover_prime(fqform, m:int, mode:str='paper', seed:int=0) -> CoverPrime:
    p, r = fqform.ctx.p, fqform.ctx.r
    branch, n = cover_branch(fqform)
    if branch == EVEN_SQUARE:
        ell = smallest_odd_prime_divisor(p ** r - 1, seed=seed)
    else:
        ell = zsigmondy_prime(p, n * r, seed=seed)
    logger.debug("F_%d^%d, %s: ell = %d", p, r, branch, ell)
    return cover_prime_for_ell(fqform, m, ell, mode)
