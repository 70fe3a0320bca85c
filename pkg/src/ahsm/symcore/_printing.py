"""
Text and LaTeX renderings of expressions.

The text form is the inverse of the parser: powers print as ``^``, series
coefficients as ``u1`` and their derivatives as ``u1_xxt``, uninterpreted
function derivatives as ``F_2(u0)``.
"""

import sympy
from sympy.core.function import AppliedUndef
from sympy.printing.latex import LatexPrinter
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from ._atoms import EPS, series_atom_index

__all__ = ["to_text", "to_latex"]

_LATEX_FAMILY = {"u": "u", "uhat": r"\hat{u}", "utilde": r"\tilde{u}"}


def _on_symbols(expr: AppliedUndef) -> bool:
    return all(isinstance(arg, sympy.Symbol) for arg in expr.args)


def _suffix(expr: sympy.Derivative) -> str:
    return "".join(var.name * int(count) for var, count in expr.variable_count)


class _TextPrinter(StrPrinter):
    def _print_AppliedUndef(self, expr):
        if _on_symbols(expr):
            return expr.func.__name__
        return super()._print_Function(expr)

    def _print_Derivative(self, expr):
        base = expr.expr
        if isinstance(base, AppliedUndef) and _on_symbols(base):
            return f"{base.func.__name__}_{_suffix(expr)}"
        return super()._print_Derivative(expr)

    def _print_FuncDeriv(self, expr):
        return f"{type(expr).__name__}({self._print(expr.args[0])})"

    def _print_Pow(self, expr, rational=False):
        base, exp = expr.base, expr.exp
        if not exp.is_Integer:
            return super()._print_Pow(expr, rational)

        if exp.is_negative:
            positive = base if exp == -1 else sympy.Pow(base, -exp, evaluate=False)
            return f"1/{self.parenthesize(positive, PRECEDENCE['Pow'])}"

        return f"{self.parenthesize(base, PRECEDENCE['Pow'], strict=True)}^{exp}"


class _LatexPrinter(LatexPrinter):
    def _wrap(self, body: str, exp=None) -> str:
        return body if exp is None else f"{body}^{{{exp}}}"

    def _print_AppliedUndef(self, expr, exp=None):
        if not _on_symbols(expr):
            return super()._print_Function(expr, exp)

        index = series_atom_index(expr)
        if index is None:
            return self._wrap(expr.func.__name__, exp)

        family, order = index
        return self._wrap(f"{_LATEX_FAMILY[family]}_{{{order}}}", exp)

    def _print_Derivative(self, expr):
        base = expr.expr
        if not (isinstance(base, AppliedUndef) and _on_symbols(base)):
            return super()._print_Derivative(expr)

        index = series_atom_index(base)
        if index is None:
            return f"{base.func.__name__}_{{{_suffix(expr)}}}"

        family, order = index
        return f"{_LATEX_FAMILY[family]}_{{{order},{_suffix(expr)}}}"

    def _print_FuncDeriv(self, expr, exp=None):
        if expr.order <= 3:
            head = expr.func_name + "'" * expr.order
        else:
            head = f"{expr.func_name}^{{({expr.order})}}"

        body = rf"{head}\left({self._print(expr.args[0])}\right)"
        return self._wrap(body, exp)


def to_text(expr: sympy.Basic) -> str:
    """Deterministic, re-parseable text of ``expr``."""
    return _TextPrinter().doprint(expr)


def to_latex(expr: sympy.Basic) -> str:
    return _LatexPrinter({"symbol_names": {EPS: r"\epsilon"}}).doprint(expr)
