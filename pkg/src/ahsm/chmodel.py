"""
The Cahn-Hilliard equation

    u_t + [F(u) u_x]_x + eps * u_xxxx = 0,

split as E0 = u_t + [F(u) u_x]_x and E1 = u_xxxx, with F either left
uninterpreted or fixed to 1/u or u, together with the known ASM solutions of
the two fixed cases and the homotopy solutions obtained from them.
"""

import enum
import logging

import sympy

from ._reports import OrderReport, VerificationReport
from .bridge import MapKind, apply_map_to_solution, build_map
from .seriesgen import PerturbedPDE, generate_ahsm, generate_asm
from .solution import Flavor, SeriesSolution
from .symcore import (
    THETA,
    A,
    closed_form,
    coefficient,
    func_deriv,
    normalize,
    parse,
    placeholder,
    substitute,
    t,
    x,
)

__all__ = [
    "CHCase",
    "NoBuiltinSolutionError",
    "SeriesSolution",
    "GOLDEN_AHSM",
    "ch_pde",
    "builtin_asm_solution",
    "homotopy_solution",
    "ch_hierarchy_golden_check",
    "verify_builtin_solutions",
]

log = logging.getLogger(__name__)


class NoBuiltinSolutionError(ValueError):
    pass


class CHCase(enum.Enum):
    GENERIC = "ch-generic"
    INV_U = "ch-inv-u"
    LINEAR_U = "ch-linear-u"


_CLOSED_FORMS = {
    CHCase.INV_U: {"F": closed_form("1/s")},
    CHCase.LINEAR_U: {"F": closed_form("s")},
}

# Derivative-form rearranged AHSM equations 0..3 of the generic case.
GOLDEN_AHSM = (
    "dt(u0) + dx(F(u0)*dx(u0))",
    "dt(u1) + d(F(u0)*u1, x, 2) + eps*(1-theta)*d(u0,x,4)",
    "2*dt(u2) + d(F_1(u0)*u1^2 + 2*F(u0)*u2, x, 2)"
    " + 2*eps*(1-theta)*(d(u1,x,4) + theta*d(u0,x,4))",
    "6*dt(u3) + d(F_2(u0)*u1^3 + 6*F_1(u0)*u1*u2 + 6*F(u0)*u3, x, 2)"
    " + 6*eps*(1-theta)*(d(u2,x,4) + theta*d(u1,x,4) + theta^2*d(u0,x,4))",
)


def ch_pde(case: CHCase = CHCase.GENERIC, resolve_f: bool = True) -> PerturbedPDE:
    """
    The Cahn-Hilliard pde for ``case``. With ``resolve_f`` the closed form of
    F is substituted before anything is generated from the pde; otherwise it
    is only attached to the pde.
    """
    u = placeholder()
    F = func_deriv("F")
    pde = PerturbedPDE(
        case.value,
        sympy.diff(u, t) + sympy.diff(F(u) * sympy.diff(u, x), x),
        sympy.diff(u, x, 4),
        closed_forms=_CLOSED_FORMS.get(case, {}),
    )
    return pde.resolved() if resolve_f else pde


def builtin_asm_solution(case: CHCase, as_printed: bool = False) -> SeriesSolution:
    """
    The ASM solution of a fixed case: third order for F = 1/u (wave speed
    ``a``), fourth order for F = u.

    The displayed F = u solution has the opposite sign on its eps^3 term,
    which does not satisfy the hierarchy; ``as_printed`` returns it anyway.

    Raises:
        NoBuiltinSolutionError: for the generic case.
    """
    if case is CHCase.INV_U:
        z = A * t - x
        coefficients = (
            1 / (A * z),
            -3 / (A**2 * z**4),
            sympy.Rational(774, 10) / (A**3 * z**7),
            sympy.Rational(-51273, 10) / (A**4 * z**10),
        )
        return SeriesSolution(Flavor.ASM, coefficients, (A,))

    if case is CHCase.LINEAR_U:
        third = sympy.Rational(46440, 7) * (-1 if as_printed else 1)
        coefficients = (
            x**2 / (6 * t),
            1 / x**2,
            -30 * t / x**6,
            third * t**2 / x**10,
            sympy.Rational(-804646440, 203) * t**3 / x**14,
        )
        return SeriesSolution(Flavor.ASM, coefficients)

    raise NoBuiltinSolutionError(f"{case.value} has no built-in ASM solution")


def homotopy_solution(
    case: CHCase, theta: sympy.Expr = THETA, as_printed: bool = False
) -> SeriesSolution:
    """The built-in ASM solution carried over by the bridging map."""
    asm = builtin_asm_solution(case, as_printed)
    return apply_map_to_solution(build_map(MapKind.THEOREM1, asm.order, theta), asm)


def ch_hierarchy_golden_check(N: int = 3) -> VerificationReport:
    """Compare the generated generic hierarchy with the known lines 0..N."""
    if not 0 <= N < len(GOLDEN_AHSM):
        raise ValueError(f"golden lines exist for orders 0..{len(GOLDEN_AHSM) - 1}")

    h = generate_ahsm(ch_pde(CHCase.GENERIC), N, derivative_form=True)
    reports = []
    for k in range(N + 1):
        residual = normalize(h[k] - parse(GOLDEN_AHSM[k]))
        reports.append(OrderReport(k, residual.is_zero, residual))
    return VerificationReport("golden-ch", tuple(reports))


def verify_builtin_solutions(case: CHCase, as_printed: bool = False) -> VerificationReport:
    """Substitute the built-in solution into every equation of the ASM hierarchy."""
    solution = builtin_asm_solution(case, as_printed)
    h = generate_asm(ch_pde(case), solution.order, derivative_form=False, family="utilde")
    bindings = {
        coefficient("utilde", l): c for l, c in enumerate(solution.coefficients)
    }

    reports = []
    for i, equation in enumerate(h):
        residual = normalize(substitute(equation, bindings))
        log.debug("%s solution at order %d: %s", case.value, i, residual)
        reports.append(OrderReport(i, residual.is_zero, residual))
    return VerificationReport(f"solutions ({case.value})", tuple(reports))

