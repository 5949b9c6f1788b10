import logging
from dataclasses import dataclass
from functools import cached_property

from orbicover import finfield, numfield
from orbicover.errors import (BadReduction, FormTooSmall, NonDiagonalForm, NotTotallyReal,
                              WrongSignatureProfile, ZeroEntryAtPlace)
from orbicover.finfield import FqContext, FqElem
from orbicover.numfield import FieldElem, NumberField, PrimeIdealFactor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticForm:
    diagonal: tuple  # FieldElem entries, all nonzero

    def __post_init__(self):
        if any(not any(e.coeffs) for e in self.diagonal):
            raise ValueError("diagonal entries must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.diagonal)

    @classmethod
    def from_gram(cls, field:NumberField, gram) -> 'QuadraticForm':
        entries = [[e if isinstance(e, FieldElem) else field.elem(e) for e in row] for row in gram]
        for i, row in enumerate(entries):
            if len(row) != len(entries):
                raise NonDiagonalForm("Gram matrix is not square")
            for j, e in enumerate(row):
                if i != j and any(e.coeffs):
                    raise NonDiagonalForm(f"entry ({i}, {j}) is nonzero; diagonalize the form first")
        return cls(tuple(entries[i][i] for i in range(len(entries))))


@dataclass(frozen=True)
class AdmissiblePair:
    field: NumberField
    form: QuadraticForm
    m: int
    distinguished_place: int

    def __post_init__(self):
        if self.m < 3:
            raise FormTooSmall(f"need m >= 3, got m = {self.m}")
        if self.form.dim != self.m + 1:
            raise ValueError(f"form of dimension {self.form.dim} does not match m = {self.m}")


@dataclass(frozen=True)
class FqForm:
    ctx: FqContext
    diagonal: tuple  # FqElem

    @property
    def dim(self) -> int:
        return len(self.diagonal)

    @cached_property
    def disc(self) -> FqElem:
        value = self.ctx.one
        for e in self.diagonal:
            value = self.ctx.mul(value, e)
        return value

    @property
    def signed_disc(self) -> FqElem:
        # (-1)^(dim/2) disc decides split vs nonsplit in even dimension
        if (self.dim // 2) % 2 == 0:
            return self.disc
        return self.ctx.neg(self.disc)

    @property
    def disc_is_square(self) -> bool:
        return finfield.is_square(self.ctx, self.disc)

    @property
    def square_class(self):
        """'square' / 'nonsquare' for even dim (of the signed discriminant), None for odd dim."""
        if self.dim % 2 == 1 or self.disc.is_zero():
            return None
        return 'square' if finfield.is_square(self.ctx, self.signed_disc) else 'nonsquare'

    @property
    def type_label(self) -> str:
        n = self.dim // 2
        if self.dim % 2 == 1:
            return f"B_{n}"
        return f"D_{n}_split" if self.square_class == 'square' else f"D_{n}_nonsplit"

    def value(self, v) -> FqElem:
        total = self.ctx.zero
        for a, x in zip(self.diagonal, v):
            total = self.ctx.add(total, self.ctx.mul(a, self.ctx.mul(x, x)))
        return total


def signature_at(field:NumberField, form:QuadraticForm, place:int) -> tuple:
    if not 0 <= place < len(field.real_roots):
        raise IndexError(f"field has {len(field.real_roots)} real places, no place {place}")
    pos = neg = 0
    for i, entry in enumerate(form.diagonal):
        sign = numfield.sign_at(field, entry, place)
        if sign == 0:
            raise ZeroEntryAtPlace(f"diagonal entry {i} vanishes at place {place}")
        if sign > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg


def is_admissible(field:NumberField, form:QuadraticForm) -> AdmissiblePair:
    if not numfield.is_totally_real(field):
        raise NotTotallyReal(f"{list(field.min_poly)} has {len(field.real_roots)} real roots out of {field.degree}")
    m = form.dim - 1
    signatures = [signature_at(field, form, place) for place in range(field.degree)]
    hyperbolic = [place for place, sig in enumerate(signatures) if sig == (m, 1)]
    for place, sig in enumerate(signatures):
        if sig not in ((m, 1), (m + 1, 0)):
            raise WrongSignatureProfile(place, sig, signatures)
    if len(hyperbolic) != 1:
        place = hyperbolic[1] if hyperbolic else 0
        raise WrongSignatureProfile(place, signatures[place], signatures)
    if m == 3:
        logger.warning("m = 3: the three-dimensional case is covered by earlier work")
    return AdmissiblePair(field=field, form=form, m=m, distinguished_place=hyperbolic[0])


def discriminant(pair:AdmissiblePair) -> FieldElem:
    return pair.field.product(pair.form.diagonal)


def reduce_form(pair:AdmissiblePair, pf:PrimeIdealFactor, ctx:FqContext=None) -> FqForm:
    """Reduction q_P of the diagonal form; BadReduction when some entry dies modulo P."""
    ctx = numfield.residue_field(pf) if ctx is None else ctx
    diagonal = []
    for i, entry in enumerate(pair.form.diagonal):
        reduced = numfield.reduce_element(pair.field, entry, pf, ctx)
        if reduced.is_zero():
            raise BadReduction(pf.p, pf.factor_poly, i)
        diagonal.append(reduced)
    return FqForm(ctx, tuple(diagonal))
