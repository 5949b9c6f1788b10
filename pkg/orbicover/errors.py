class OrbicoverError(Exception):
    exit_code = 3


class InputError(OrbicoverError):
    """Malformed or unusable input; the CLI exits with status 2."""
    exit_code = 2


class PreconditionError(OrbicoverError):
    """A mathematical precondition failed; the CLI exits with status 3."""
    exit_code = 3


# Input
class MalformedInput(InputError):
    pass

class NotMonic(InputError):
    pass

class NonDiagonalForm(InputError):
    pass

class MalformedCertificate(InputError):
    pass

class UsageError(InputError):
    pass


# numfield
class ReduciblePolynomial(PreconditionError):
    pass

class DyadicPrime(PreconditionError):
    pass

class BadPrime(PreconditionError):
    def __init__(self, p:int, poly_disc:int):
        super().__init__(f"{p} divides the polynomial discriminant {poly_disc}")
        self.p = p
        self.poly_disc = poly_disc

class DenominatorNotCoprime(PreconditionError):
    def __init__(self, p:int, denominator:int):
        super().__init__(f"denominator {denominator} is not coprime to {p}")
        self.p = p
        self.denominator = denominator

class FieldIsRationals(PreconditionError):
    pass

class NoSplitPrimeInBound(PreconditionError):
    pass


# finfield / factoring
class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass

class ZeroInput(PreconditionError):
    pass

class NotASquare(PreconditionError):
    pass

class FactorBudgetExceeded(PreconditionError):
    def __init__(self, n:int):
        super().__init__(f"could not split {n} within the factoring budget")
        self.n = n


# quadform
class NotTotallyReal(PreconditionError):
    pass

class WrongSignatureProfile(PreconditionError):
    def __init__(self, place:int, signature:tuple, signatures:list):
        super().__init__(f"place {place} has signature {signature}; signatures by place: {signatures}")
        self.place = place
        self.signature = signature
        self.signatures = signatures

class ZeroEntryAtPlace(PreconditionError):
    pass

class FormTooSmall(PreconditionError):
    pass

class BadReduction(PreconditionError):
    def __init__(self, p:int, factor_poly:tuple, entry:int):
        super().__init__(f"diagonal entry {entry} vanishes modulo ({p}, {list(factor_poly)})")
        self.p = p
        self.factor_poly = factor_poly
        self.entry = entry


# orders
class MissingSquareClass(PreconditionError):
    pass

class DimensionTooSmall(PreconditionError):
    pass

class EvenDimension(PreconditionError):
    pass

class EllEqualsP(PreconditionError):
    pass

class ZsigmondyFailure(PreconditionError):
    pass

class NoOddPrimeDivisor(PreconditionError):
    pass

class EllNotValid(PreconditionError):
    pass


# matgroup
class DimMismatch(PreconditionError):
    pass

class IsotropicVector(PreconditionError):
    pass

class NotSquareDisc(PreconditionError):
    pass

class NoIsotropicVector(NotSquareDisc):
    pass

class SearchBudgetExceeded(PreconditionError):
    pass

class TooLarge(PreconditionError):
    pass


# certify
class NoCommonEll(PreconditionError):
    pass

class InsufficientPrimes(PreconditionError):
    pass
