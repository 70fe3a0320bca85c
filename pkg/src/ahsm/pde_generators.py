"""
Generate random perturbed pdes for property checks and batch exports
"""

__all__ = ["random_polynomial_pde", "random_pde_batch"]

import random

from .seriesgen import PerturbedPDE
from .symcore import parse

# u and its x derivatives up to second order
_ATOMS = ("u", "u_x", "u_xx")


def random_polynomial_pde(
    seed: int, max_order: int = 2, n_terms: int = 3, max_degree: int = 3
) -> PerturbedPDE:
    """
    Generate a random polynomial pde E0 + eps*E1 = 0.

    E0 is u_t plus ``n_terms`` random monomials in u, u_x and u_xx, so that
    every hierarchy generated from it is evolutionary; E1 is a single random
    monomial.

    Args:
        seed: the seed of the generator; equal seeds give equal pdes.
        max_order: the highest x derivative allowed, 0 to 2.
            Defaults to 2.
        n_terms: the number of monomials added to u_t in E0.
            Defaults to 3.
        max_degree: the largest number of factors in a monomial.
            Defaults to 3.

    Returns:
        A PerturbedPDE named ``random-<seed>``.
    """
    if not 0 <= max_order <= 2:
        raise ValueError(f"max_order must be between 0 and 2, got {max_order}")
    if n_terms < 1 or max_degree < 1:
        raise ValueError("n_terms and max_degree must be positive")

    rng = random.Random(seed)
    atoms = _ATOMS[: max_order + 1]

    def monomial() -> str:
        factors = [rng.choice(atoms) for _ in range(rng.randint(1, max_degree))]
        coefficient = rng.choice([-3, -2, -1, 1, 2, 3])
        return f"{coefficient}*" + "*".join(sorted(factors))

    E0 = " + ".join(["u_t"] + [monomial() for _ in range(n_terms)])
    E1 = monomial()
    return PerturbedPDE(f"random-{seed}", parse(E0), parse(E1))


def random_pde_batch(n: int, seed: int = 0, **kwargs) -> list[PerturbedPDE]:
    """
    Generate ``n`` random pdes with consecutive seeds starting at ``seed``.
    Keyword arguments are passed on to :func:`random_polynomial_pde`.
    """
    return [random_polynomial_pde(seed + i, **kwargs) for i in range(n)]
