# ruff: noqa: F401
"""
A library to generate the series hierarchies of perturbed pdes, check the map
between the homotopy and approximate symmetry hierarchies, and evaluate the
Cahn-Hilliard series solutions.
"""

from ._export_script import HierarchyExportScript
from ._reports import OrderReport, VerificationReport
from ._utils import load_experiment_config
from .bridge import CoefficientMap, MapKind, build_map, invert_map, transform
from .chmodel import CHCase, builtin_asm_solution, ch_pde, homotopy_solution
from .modelfile import dump_model, load_model, parse_model
from .numlab import EvalPoint, optimize_theta, residual, sweep
from .seriesgen import (
    Hierarchy,
    HierarchyKind,
    PerturbedPDE,
    generate_ahsm,
    generate_ahsm_raw,
    generate_asm,
)
from .solution import Flavor, SeriesSolution
