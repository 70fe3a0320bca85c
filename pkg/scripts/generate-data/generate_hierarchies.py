"""
generate_hierarchies.py: generate the hierarchy dataset used to check the
bridging results on models other than Cahn-Hilliard.

    python3 generate_hierarchies.py [--verbose] [--overwrite] [--dry-run] <DATA_DIRECTORY>

Generated hierarchies are saved to DATA_DIRECTORY.


THE GENERATED HIERARCHIES

The generic Cahn-Hilliard model and 100 random polynomial pdes (seeds 0..99),
each with the following hierarchy kinds:
    asm ahsm-raw ahsm

to the following orders:
    2 3 4

Files are JSON holding the model text, the kind, the order and one equation
per line of the hierarchy, and follow the naming schema:

    {model}-{kind}-{order}.json
"""

import sys
from collections.abc import Iterator

from ahsm import CHCase, HierarchyExportScript, HierarchyKind, PerturbedPDE, ch_pde
from ahsm.pde_generators import random_pde_batch

ORDERS = [2, 3, 4]
N_RANDOM = 100


def main() -> int:
    script = HierarchyExportScript(new_generator())
    script.run()
    return 0


def new_generator() -> Iterator[tuple[str, PerturbedPDE, HierarchyKind, int]]:
    pdes = [ch_pde(CHCase.GENERIC)] + random_pde_batch(N_RANDOM)
    for pde in pdes:
        for kind in HierarchyKind:
            for order in ORDERS:
                yield (f"{pde.name}-{kind.value}-{order}.json", pde, kind, order)


if __name__ == "__main__":
    sys.exit(main())
