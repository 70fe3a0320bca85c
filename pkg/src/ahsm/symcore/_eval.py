"""
Exact point evaluation.
"""

from collections.abc import Mapping

import sympy

from ._atoms import FuncDeriv, series_atoms
from ._errors import PoleError, UnboundAtomError

__all__ = ["closed_form", "resolve_functions", "eval_exact"]


def closed_form(body: str | sympy.Expr, var: str = "s") -> sympy.Lambda:
    """
    A one-argument closed form for an uninterpreted function, e.g.
    ``closed_form(1 / s)`` for F(u) = 1/u.
    """
    s = sympy.Symbol(var)
    return sympy.Lambda(s, sympy.sympify(body, locals={var: s}))


def resolve_functions(
    e: sympy.Expr, funcs: Mapping[str, sympy.Lambda]
) -> sympy.Expr:
    """
    Replace every ``F_j(g)`` whose name has a closed form by the j-th
    derivative of that closed form evaluated at ``g``. Applications without a
    closed form are left alone.
    """
    rules = {}
    for fd in e.atoms(FuncDeriv):
        form = funcs.get(fd.func_name)
        if form is None:
            continue
        (var,) = form.variables
        body = form.expr if fd.order == 0 else sympy.diff(form.expr, var, fd.order)
        rules[fd] = body.xreplace({var: fd.args[0]})

    if not rules:
        return e
    return e.xreplace(rules)


def eval_exact(
    e: sympy.Expr,
    point: Mapping[sympy.Basic, sympy.Rational],
    funcs: Mapping[str, sympy.Lambda] | None = None,
) -> sympy.Rational:
    """
    Evaluate ``e`` exactly.

    ``point`` binds symbols and, optionally, series coefficient atoms (a
    coefficient or one of its derivatives) to rationals. Coefficient atoms are
    bound before symbols. ``funcs`` gives closed forms for the uninterpreted
    functions.

    Raises:
        UnboundAtomError: if something in ``e`` has no value.
        PoleError: if the point is a pole of ``e``.
    """
    e = sympy.sympify(e)
    if funcs:
        e = resolve_functions(e, funcs)

    atom_values = {k: sympy.Rational(v) for k, v in point.items() if not k.is_Symbol}
    symbol_values = {k: sympy.Rational(v) for k, v in point.items() if k.is_Symbol}

    if atom_values:
        e = e.xreplace(atom_values)

    unbound = series_atoms(e) | e.atoms(FuncDeriv)
    if unbound:
        raise UnboundAtomError(unbound)

    unbound = e.free_symbols - set(symbol_values)
    if unbound:
        raise UnboundAtomError(unbound)

    value = e.xreplace(symbol_values)
    if value.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise PoleError(f"{e} has a pole at {symbol_values}")
    if not value.is_Rational:
        raise UnboundAtomError(value.free_symbols or {value})
    return value
