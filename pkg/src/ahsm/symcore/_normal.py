"""
Canonical forms and zero testing.

A normal form is a reduced fraction of two expanded polynomials over the
rationals. Every non-arithmetic subexpression (symbols, series coefficients
and their derivatives, ``F_j(...)`` applications) is an indeterminate. The
denominator is scaled so that its leading coefficient is 1, which makes the
representation unique.
"""

import functools
from collections.abc import Iterable
from dataclasses import dataclass

import sympy
from sympy.polys.polyerrors import PolynomialError

from ._errors import DivisionByZeroError
from ._printing import to_latex, to_text

__all__ = ["NormalForm", "normalize", "is_zero", "degree_in"]


@dataclass(frozen=True)
class NormalForm:
    numerator: sympy.Expr
    denominator: sympy.Expr

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_expr(self) -> sympy.Expr:
        if self.denominator == 1:
            return self.numerator
        return self.numerator / self.denominator

    def to_text(self) -> str:
        if self.denominator == 1:
            return to_text(self.numerator)
        return f"({to_text(self.numerator)})/({to_text(self.denominator)})"

    def to_latex(self) -> str:
        if self.denominator == 1:
            return to_latex(self.numerator)
        return rf"\frac{{{to_latex(self.numerator)}}}{{{to_latex(self.denominator)}}}"

    def __str__(self) -> str:
        return self.to_text()


_ZERO = NormalForm(sympy.S.Zero, sympy.S.One)


def _leading_coefficient(p: sympy.Expr) -> sympy.Expr:
    if p.is_Number:
        return p
    return sympy.Poly(p).LC()


@functools.lru_cache(maxsize=4096)
def _normalize(e: sympy.Expr) -> NormalForm:
    if e.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
        raise DivisionByZeroError(f"expression has an infinite part: {to_text(e)}")

    try:
        cancelled = sympy.cancel(e)
    except (ZeroDivisionError, PolynomialError) as exc:
        raise DivisionByZeroError(f"cannot normalize {to_text(e)}: {exc}") from exc

    numerator, denominator = sympy.fraction(cancelled)
    numerator = sympy.expand(numerator)
    denominator = sympy.expand(denominator)

    if denominator == 0 or cancelled.has(sympy.zoo, sympy.nan):
        raise DivisionByZeroError(f"denominator of {to_text(e)} is zero")
    if numerator == 0:
        return _ZERO

    lc = _leading_coefficient(denominator)
    return NormalForm(sympy.expand(numerator / lc), sympy.expand(denominator / lc))


def normalize(e) -> NormalForm:
    """
    Canonical form of ``e``.

    Raises:
        DivisionByZeroError: if ``e`` divides by something that is
            identically zero.
    """
    if isinstance(e, NormalForm):
        e = e.as_expr()
    return _normalize(sympy.sympify(e))


def is_zero(e) -> bool:
    return normalize(e).is_zero


def degree_in(e: sympy.Expr, atoms: Iterable[sympy.Basic]) -> int | None:
    """
    Total degree of ``e`` in ``atoms``, or None if ``e`` is not polynomial in
    them (an atom appears in a denominator or inside a function argument).

    The degree of zero is reported as 0.
    """
    atoms = set(atoms)
    if not atoms:
        return 0

    scale = sympy.Dummy("scale")
    scaled = e.xreplace({atom: scale * atom for atom in atoms})
    form = normalize(scaled)

    if form.denominator.has(scale):
        return None
    if form.is_zero:
        return 0

    for fd in form.numerator.atoms(sympy.Function):
        if fd.args and any(arg.has(scale) for arg in fd.args):
            return None

    return sympy.Poly(form.numerator, scale).degree()
