"""
Truncated series solutions.
"""

import enum
from dataclasses import dataclass

import sympy

from .symcore import EPS, Q, THETA, normalize, to_latex, to_text

__all__ = ["Flavor", "SeriesSolution"]


class Flavor(enum.Enum):
    ASM = "asm"
    HOMOTOPY = "homotopy"


@dataclass(frozen=True)
class SeriesSolution:
    """
    Coefficients u_0..u_N of a truncated series solution.

    ASM solutions are power series in eps and their coefficients contain none
    of eps, theta or q. Homotopy solutions are power series in q; their
    coefficients carry eps and theta but never q.
    """

    flavor: Flavor
    coefficients: tuple[sympy.Expr, ...]
    params: tuple[sympy.Symbol, ...] = ()

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a series solution needs at least one coefficient")

        forbidden = {Q} if self.flavor is Flavor.HOMOTOPY else {EPS, THETA, Q}
        for i, c in enumerate(self.coefficients):
            clash = forbidden & sympy.sympify(c).free_symbols
            if clash:
                names = ", ".join(sorted(map(str, clash)))
                raise ValueError(
                    f"{self.flavor.value} coefficient {i} may not contain {names}"
                )

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def series_param(self) -> sympy.Symbol:
        return EPS if self.flavor is Flavor.ASM else Q

    def assemble(self, param: sympy.Expr | None = None) -> sympy.Expr:
        """Sum of param^l u_l; ``param`` defaults to the series parameter."""
        if param is None:
            param = self.series_param
        return sympy.Add(*(param**l * c for l, c in enumerate(self.coefficients)))

    def truncate(self, order: int) -> "SeriesSolution":
        if not 0 <= order <= self.order:
            raise ValueError(f"cannot truncate order {self.order} solution to {order}")
        return SeriesSolution(self.flavor, self.coefficients[: order + 1], self.params)

    def to_text(self) -> list[str]:
        return [to_text(normalize(c).as_expr()) for c in self.coefficients]

    def to_latex(self) -> list[str]:
        return [to_latex(normalize(c).as_expr()) for c in self.coefficients]
