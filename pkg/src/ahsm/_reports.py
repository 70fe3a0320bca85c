"""
Result objects shared by the verification routines.
"""

from dataclasses import dataclass

import sympy

from .symcore import NormalForm, to_text

__all__ = ["OrderReport", "VerificationReport"]


@dataclass(frozen=True)
class OrderReport:
    """
    Outcome of one identity check at one order.

    ``residual`` is the normal form of the difference of the two sides; it is
    zero exactly when the check passed. ``certificate`` lists the
    (source, multiplier) pairs of any linear combination the check used.
    """

    order: int
    passed: bool
    residual: NormalForm
    certificate: tuple[tuple[int, sympy.Expr], ...] = ()
    detail: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "status": self.status,
            "residual_normal_form": str(self.residual),
            "certificate": [
                {"source": source, "multiplier": to_text(multiplier)}
                for source, multiplier in self.certificate
            ],
        }


@dataclass(frozen=True)
class VerificationReport:
    name: str
    orders: tuple[OrderReport, ...]

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.orders)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "orders": [report.to_json() for report in self.orders],
        }

    def to_text(self) -> str:
        lines = []
        for report in self.orders:
            line = f"order {report.order}: {report.status}"
            if report.detail:
                line += f" ({report.detail})"
            lines.append(line)
            if not report.passed:
                lines.append(f"    residual: {report.residual}")
        lines.append(f"{self.name}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)
