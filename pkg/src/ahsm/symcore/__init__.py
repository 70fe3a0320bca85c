# ruff: noqa: F401
"""
Exact symbolic expressions: construction, parsing, differentiation,
substitution, canonical forms and point evaluation.

Expressions are plain sympy expressions over exact rationals. This package
fixes the vocabulary (series coefficients, uninterpreted functions, the
parameters eps, theta, q and a) and the handful of operations the rest of the
library builds on.
"""

from ._atoms import (
    EPS,
    FAMILIES,
    INDEPENDENT,
    RESERVED_PARAMS,
    THETA,
    A,
    FuncDeriv,
    Q,
    coefficient,
    coefficient_derivative,
    coefficient_function,
    func_deriv,
    func_derivs,
    is_series_atom,
    placeholder,
    series_atom_index,
    series_atoms,
    t,
    x,
)
from ._calculus import diff_total, substitute
from ._errors import (
    DerivativeVariableError,
    DivisionByZeroError,
    ParseError,
    PoleError,
    SubstitutionCycleError,
    UnboundAtomError,
    UnknownIdentifierError,
)
from ._eval import closed_form, eval_exact, resolve_functions
from ._normal import NormalForm, degree_in, is_zero, normalize
from ._parser import DEFAULT_NAMESPACE, Namespace, line_col, parse
from ._printing import to_latex, to_text
