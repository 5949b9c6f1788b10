"""JSON codec for pair inputs and certificates ("orbicover/1").

Canonical form is json with sorted keys; digests hash the compact canonical text. Integers that
can grow without bound (group orders, ell, indices) are written as decimal strings and
rationals as "num/den".
"""
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import opt
from orbicover import numfield, orders, quadform
from orbicover.errors import MalformedInput
from orbicover.quadform import QuadraticForm


def rational_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedInput(f"expected an integer or a 'num/den' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise MalformedInput(f"bad rational {value!r}") from e


def dumps(obj, compact:bool=False) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(',', ':'), ensure_ascii=True)
    return json.dumps(obj, sort_keys=True, indent=opt.json_indent, ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.new(opt.hash_algorithm, dumps(obj, compact=True).encode('ascii')).hexdigest()


def read_json(path:str):
    try:
        if path == '-':
            return json.load(sys.stdin)
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path}: invalid JSON ({e})") from e
    except OSError as e:
        raise MalformedInput(f"{path}: {e.strerror}") from e


@dataclass(frozen=True)
class InputSpec:
    min_poly: tuple
    form_diagonal: tuple  # tuples of Fractions, coefficients in theta
    options: dict = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int:
        return len(self.form_diagonal) - 1

    def to_dict(self) -> dict:
        return {'min_poly': list(self.min_poly),
                'form_diagonal': [[rational_to_str(c) for c in entry] for entry in self.form_diagonal],
                'm': self.m}

    def build_field(self) -> numfield.NumberField:
        return numfield.make_field(self.min_poly)

    def build_form(self, field:numfield.NumberField) -> QuadraticForm:
        for entry in self.form_diagonal:
            if len(entry) > field.degree:
                raise MalformedInput(f"entry {[str(c) for c in entry]} has more coefficients than the field degree")
        entries = tuple(field.elem(entry) for entry in self.form_diagonal)
        if any(field.is_zero(e) for e in entries):
            raise MalformedInput("diagonal entries must be nonzero")
        return QuadraticForm(entries)

    def build_pair(self) -> quadform.AdmissiblePair:
        field = self.build_field()
        return quadform.is_admissible(field, self.build_form(field))


def parse_input(obj) -> InputSpec:
    if not isinstance(obj, dict):
        raise MalformedInput("input must be a JSON object")
    if 'form_gram' in obj:
        # validated and rejected if off-diagonal entries are present
        field = numfield.make_field(_int_list(obj.get('min_poly'), 'min_poly'))
        gram = [[[parse_rational(c) for c in _as_list(e)] for e in row] for row in obj['form_gram']]
        form = QuadraticForm.from_gram(field, gram)
        diagonal = tuple(e.coeffs for e in form.diagonal)
    else:
        raw = obj.get('form_diagonal')
        if not isinstance(raw, list) or not raw:
            raise MalformedInput("form_diagonal must be a nonempty list")
        diagonal = tuple(tuple(parse_rational(c) for c in _as_list(entry)) for entry in raw)
    spec = InputSpec(min_poly=tuple(_int_list(obj.get('min_poly'), 'min_poly')), form_diagonal=diagonal,
                     options=parse_options(obj.get('options')))
    if 'm' in obj and obj['m'] != spec.m:
        raise MalformedInput(f"m = {obj['m']} but the form has dimension {spec.m + 1}")
    return spec


def input_from_pair(pair:quadform.AdmissiblePair) -> InputSpec:
    return InputSpec(min_poly=pair.field.min_poly, form_diagonal=tuple(e.coeffs for e in pair.form.diagonal))


OPTION_CHECKS = {
    'bound': lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 3,
    'mode': lambda v: v in orders.MODES,
    'seed': lambda v: isinstance(v, int) and not isinstance(v, bool),
    'with_witness': lambda v: isinstance(v, bool),
    'format': lambda v: v in ('text', 'json'),
}


def parse_options(value) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise MalformedInput("options must be a JSON object")
    for key, v in value.items():
        if key not in OPTION_CHECKS:
            raise MalformedInput(f"unknown option {key!r}")
        if not OPTION_CHECKS[key](v):
            raise MalformedInput(f"option {key!r} has an invalid value {v!r}")
    return dict(value)


def _as_list(entry) -> list:
    return entry if isinstance(entry, list) else [entry]


def _int_list(value, name:str) -> list:
    if not isinstance(value, list) or not value or any(isinstance(c, bool) or not isinstance(c, int) for c in value):
        raise MalformedInput(f"{name} must be a nonempty list of integers")
    return value


# encoders
def encode_fq(elem) -> list:
    return list(elem.coeffs)


def encode_factored(fo) -> dict:
    return {'p': fo.p,
            'p_exponent': fo.p_exponent,
            'factors': [[a, s] for a, s in fo.factors],
            'label': fo.label,
            'value': str(fo.value()) if fo.bounded else None}


def encode_check(check) -> dict:
    return {'bound_label': check.bound_label,
            'factors': [[a, s] for a, s in check.factors],
            'divides': check.divides,
            'role': check.role,
            'kind': check.kind}


def encode_prime(pf) -> dict:
    return {'p': pf.p, 'factor_poly': list(pf.factor_poly), 'r': pf.r}


def encode_reduction(fqform) -> dict:
    return {'diagonal': [encode_fq(e) for e in fqform.diagonal],
            'disc': encode_fq(fqform.disc),
            'square_class': fqform.square_class,
            'disc_is_square': fqform.disc_is_square,
            'type_label': fqform.type_label}


def encode_cover_prime(cp) -> dict:
    return {'ell': str(cp.ell), 'branch': cp.branch, 'd': cp.d, 'a': None if cp.a is None else str(cp.a)}


def encode_witness(witness):
    if witness is None:
        return None
    return {'matrix': witness.matrix.entries(),
            'order': str(witness.order),
            'eigenvalue_avoidance': witness.eigenvalue_avoidance}
