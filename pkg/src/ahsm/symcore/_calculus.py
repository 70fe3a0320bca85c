"""
Differentiation and derivative-aware substitution.
"""

from collections.abc import Mapping

import sympy
from sympy.core.function import AppliedUndef

from ._errors import SubstitutionCycleError

__all__ = ["diff_total", "substitute"]


def diff_total(e: sympy.Expr, v: sympy.Symbol, n: int = 1) -> sympy.Expr:
    """
    Total derivative of ``e`` with respect to the independent variable ``v``.

    Series coefficients depend on every independent variable, parameters on
    none, and ``F_j(g)`` differentiates to ``F_{j+1}(g) * dg/dv``.
    """
    if n < 1:
        raise ValueError(f"derivative order must be positive, got {n}")
    if not isinstance(v, sympy.Symbol):
        raise ValueError(f"can only differentiate with respect to a symbol, got {v}")
    return sympy.diff(e, v, n)


def _derivative_bindings(
    e: sympy.Basic, key: AppliedUndef, value: sympy.Expr
) -> dict[sympy.Basic, sympy.Expr]:
    bindings = {key: value}
    for derivative in e.atoms(sympy.Derivative):
        if derivative.expr == key:
            bindings[derivative] = sympy.diff(value, *derivative.variable_count)
    return bindings


def substitute(
    e: sympy.Basic, bindings: Mapping[sympy.Basic, sympy.Expr]
) -> sympy.Expr:
    """
    Simultaneously replace atoms of ``e``.

    Keys are parameters (symbols) or applied functions such as ``u1(x, t)``
    and the dependent-variable placeholder ``u(x, t)``. Replacing an applied
    function also replaces each of its derivatives by the matching derivative
    of the replacement.

    Raises:
        SubstitutionCycleError: if a replacement contains the atom it replaces.
    """
    if not bindings:
        return e

    rules: dict[sympy.Basic, sympy.Expr] = {}
    for key, value in bindings.items():
        value = sympy.sympify(value)
        if isinstance(key, AppliedUndef):
            if value.has(key):
                raise SubstitutionCycleError(f"{key} appears in its own replacement")
            rules.update(_derivative_bindings(e, key, value))
        else:
            rules[key] = value

    return e.xreplace(rules)
