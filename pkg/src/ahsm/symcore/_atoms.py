"""
The atoms every expression is built from.

Independent variables and parameters are plain sympy symbols. Series
coefficients are undefined functions of the independent variables, so that
sympy's own differentiation produces their derivatives. Uninterpreted
functions of one argument (F, F', F'', ...) are a family of Function
subclasses whose derivative is the next member of the family.
"""

import functools
import re
from collections.abc import Iterable, Sequence

import sympy
from sympy.core.function import AppliedUndef, ArgumentIndexError

__all__ = [
    "x",
    "t",
    "EPS",
    "THETA",
    "Q",
    "A",
    "INDEPENDENT",
    "RESERVED_PARAMS",
    "FAMILIES",
    "FuncDeriv",
    "func_deriv",
    "coefficient_function",
    "coefficient",
    "coefficient_derivative",
    "placeholder",
    "series_atoms",
    "is_series_atom",
    "series_atom_index",
    "func_derivs",
]

x, t = sympy.symbols("x t")

EPS = sympy.Symbol("eps")
THETA = sympy.Symbol("theta")
Q = sympy.Symbol("q")
A = sympy.Symbol("a")

INDEPENDENT: tuple[sympy.Symbol, ...] = (x, t)

# Parameters every namespace knows about; models may not redeclare them.
RESERVED_PARAMS: dict[str, sympy.Symbol] = {"eps": EPS, "theta": THETA, "q": Q}

# u: plain (homotopy) coefficients, uhat: after the theta-only map,
# utilde: approximate symmetry (ASM) coefficients.
FAMILIES: tuple[str, ...] = ("u", "uhat", "utilde")

_COEFFICIENT_NAME = re.compile(r"^(u|uhat|utilde)(\d+)$")


class FuncDeriv(sympy.Function):
    """
    The ``order``-th derivative of the uninterpreted function ``func_name``.

    Concrete classes are created by :func:`func_deriv`, one per
    (name, order) pair, so that ``F_1(u0)`` compares equal wherever it is
    built.
    """

    nargs = 1
    func_name: str = ""
    order: int = 0

    def fdiff(self, argindex=1):
        if argindex != 1:
            raise ArgumentIndexError(self, argindex)
        return func_deriv(self.func_name, self.order + 1)(self.args[0])


def func_deriv(name: str, order: int = 0) -> type[FuncDeriv]:
    """
    Return the class of the ``order``-th derivative of ``name``.

    ``func_deriv("F", 0)`` prints as ``F``, ``func_deriv("F", 2)`` as ``F_2``.
    """
    if order < 0:
        raise ValueError(f"derivative order must be nonnegative, got {order}")
    return _func_deriv(name, int(order))


# one class per (name, order), however the order was passed
@functools.cache
def _func_deriv(name: str, order: int) -> type[FuncDeriv]:
    cls_name = name if order == 0 else f"{name}_{order}"
    return type(
        cls_name,
        (FuncDeriv,),
        {"func_name": name, "order": order, "nargs": 1, "__module__": __name__},
    )


@functools.cache
def coefficient_function(family: str, order: int) -> sympy.FunctionClass:
    if family not in FAMILIES:
        raise ValueError(f"unknown coefficient family {family!r}")
    if order < 0:
        raise ValueError(f"series order must be nonnegative, got {order}")
    return sympy.Function(f"{family}{order}")


def coefficient(
    family: str, order: int, variables: Sequence[sympy.Symbol] = INDEPENDENT
) -> sympy.Expr:
    """The series coefficient ``family``+``order`` as a function of ``variables``."""
    return coefficient_function(family, order)(*variables)


def coefficient_derivative(
    family: str,
    order: int,
    slot: Sequence[int],
    variables: Sequence[sympy.Symbol] = INDEPENDENT,
) -> sympy.Expr:
    """
    Derivative of a coefficient; ``slot`` holds one count per variable, so
    ``slot=(2, 1)`` over ``(x, t)`` is ``u_l`` differentiated twice in x and
    once in t.
    """
    base = coefficient(family, order, variables)
    counts = [(v, n) for v, n in zip(variables, slot) if n > 0]
    if not counts:
        return base
    return sympy.diff(base, *counts)


def placeholder(dep: str = "u", variables: Sequence[sympy.Symbol] = INDEPENDENT):
    """The dependent variable before series expansion, e.g. ``u(x, t)``."""
    return sympy.Function(dep)(*variables)


def series_atom_index(atom: sympy.Basic) -> tuple[str, int] | None:
    """
    Return (family, order) if ``atom`` is a series coefficient or a derivative
    of one, else None.
    """
    if isinstance(atom, sympy.Derivative):
        atom = atom.expr
    if not isinstance(atom, AppliedUndef):
        return None
    match = _COEFFICIENT_NAME.match(atom.func.__name__)
    if match is None:
        return None
    return match.group(1), int(match.group(2))


def is_series_atom(atom: sympy.Basic) -> bool:
    return series_atom_index(atom) is not None


def series_atoms(
    expr: sympy.Basic,
    family: str | None = None,
    orders: Iterable[int] | None = None,
) -> set[sympy.Expr]:
    """
    Every series coefficient atom of ``expr`` (the applied coefficient and each
    of its derivatives), optionally restricted to a family and a set of orders.
    """
    wanted = None if orders is None else set(orders)
    found = set()
    candidates = expr.atoms(sympy.Derivative) | expr.atoms(AppliedUndef)
    for atom in candidates:
        index = series_atom_index(atom)
        if index is None:
            continue
        atom_family, atom_order = index
        if family is not None and atom_family != family:
            continue
        if wanted is not None and atom_order not in wanted:
            continue
        found.add(atom)
    return found


def func_derivs(expr: sympy.Basic) -> set[FuncDeriv]:
    return expr.atoms(FuncDeriv)
