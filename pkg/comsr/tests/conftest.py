import os

import pytest

from ..seqdb import load_spmf
from .tables import TABLE_ONE, TABLE_THREE, code_h1, code_h2, database

SIGN_VARIABLE = 'COMSR_SIGN_PATH'


@pytest.fixture
def table_one():
    return database(TABLE_ONE)


@pytest.fixture
def table_three():
    return database(TABLE_THREE)


@pytest.fixture
def h1(table_three):
    return code_h1(table_three)


@pytest.fixture
def h2(table_three):
    return code_h2(table_three)


@pytest.fixture
def six_identical():
    return database([[1, 2, 3, 4]] * 6)


@pytest.fixture(scope='session')
def sign_path():
    path = os.environ.get(SIGN_VARIABLE)
    if not path:
        pytest.skip("{} is not set".format(SIGN_VARIABLE))
    return path


@pytest.fixture(scope='session')
def sign_100(sign_path):
    return load_spmf(sign_path, limit=100)


@pytest.fixture(scope='session')
def sign_full(sign_path):
    return load_spmf(sign_path)
