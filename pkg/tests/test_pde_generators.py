import pytest

from ahsm.fdb import derivative_slots
from ahsm.pde_generators import random_pde_batch, random_polynomial_pde
from ahsm.symcore import func_derivs, series_atoms


def test_same_seed_same_pde():
    assert random_polynomial_pde(3) == random_polynomial_pde(3)
    assert random_polynomial_pde(3).name == "random-3"


def test_batch_uses_consecutive_seeds():
    batch = random_pde_batch(4, seed=10)
    assert [pde.name for pde in batch] == [f"random-{s}" for s in range(10, 14)]


@pytest.mark.parametrize("seed", range(10))
def test_pdes_are_evolutionary_and_low_order(seed):
    pde = random_polynomial_pde(seed)
    slots = derivative_slots(pde.E0, pde.placeholder)
    assert (0, 1) in slots
    assert all(sum(slot) <= 2 for slot in slots)
    assert not func_derivs(pde.E0) and not series_atoms(pde.E0)


def test_max_order_zero_has_no_x_derivatives():
    for pde in random_pde_batch(5, max_order=0):
        slots = derivative_slots(pde.E0, pde.placeholder) + derivative_slots(
            pde.E1, pde.placeholder
        )
        assert all(slot[0] == 0 for slot in slots)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        random_polynomial_pde(0, max_order=3)
    with pytest.raises(ValueError):
        random_polynomial_pde(0, n_terms=0)
