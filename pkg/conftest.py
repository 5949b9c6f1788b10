import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from orbicover import numfield, quadform  # noqa: E402
from orbicover.finfield import FqContext  # noqa: E402
from orbicover.quadform import QuadraticForm  # noqa: E402

RUNNING_INPUT = {'min_poly': [-2, 0, 1], 'form_diagonal': [['1'], ['1'], ['1'], ['1'], ['0', '-1']], 'm': 4}


def make_pair(min_poly, diagonal):
    field = numfield.make_field(min_poly)
    return quadform.is_admissible(field, QuadraticForm(tuple(field.elem(e) for e in diagonal)))


@pytest.fixture(scope='session')
def sqrt2():
    return numfield.make_field([-2, 0, 1])


@pytest.fixture(scope='session')
def running_pair():
    """x^2 - 2 with diag(1, 1, 1, 1, -theta), m = 4."""
    return make_pair([-2, 0, 1], [[1], [1], [1], [1], [0, -1]])


@pytest.fixture(scope='session')
def pair_m3():
    return make_pair([-2, 0, 1], [[1], [1], [1], [0, -1]])


@pytest.fixture(scope='session')
def f7():
    return FqContext.prime_field(7)


@pytest.fixture(scope='session')
def f9():
    return FqContext(3, (1, 0, 1))


@pytest.fixture(scope='session')
def f25():
    return FqContext(5, (3, 0, 1))


@pytest.fixture
def running_input(tmp_path):
    path = tmp_path / 'sqrt2_m4.json'
    path.write_text(json.dumps(RUNNING_INPUT), encoding='utf-8')
    return str(path)


@pytest.fixture(scope='session')
def build_pair():
    return make_pair
