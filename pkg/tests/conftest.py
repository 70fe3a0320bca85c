import pytest

from ahsm.chmodel import CHCase, ch_pde
from ahsm.pde_generators import random_pde_batch
from ahsm.symcore import normalize, parse


@pytest.fixture(scope="session")
def ch_generic():
    return ch_pde(CHCase.GENERIC)


@pytest.fixture(scope="session")
def random_pdes():
    return random_pde_batch(20, seed=2024)


def assert_same(lhs, rhs):
    """Normal-form equality; strings are parsed first."""
    if isinstance(lhs, str):
        lhs = parse(lhs)
    if isinstance(rhs, str):
        rhs = parse(rhs)
    difference = normalize(lhs - rhs)
    assert difference.is_zero, f"difference: {difference}"
