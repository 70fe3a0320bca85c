"""
Independent oracle for (d^n E / dq^n) at q = 0 via the generalized Faa di
Bruno formula.

Each derivative of u occurring in E is taken as an independent argument (a
"slot"). The n-th q-derivative of E(u(q), u_x(q), ...) is a sum over the
nonnegative integer solutions of

    r_1 + 2 r_2 + ... + n r_n = n,
    p_m1 + p_m2 + ... + p_m(k+1) = r_m        (m = 1..n),

of n! / (prod (i!)^r_i * prod p_ij!) times the mixed slot partial of E of
multi-order (p_1, ..., p_(k+1)) (column sums) times
prod_ij (d^i u^(slot j) / dq^i)^p_ij. At q = 0 every d^i u^(slot)/dq^i is
i! * u_i^(slot).
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import sympy

from ._reports import OrderReport, VerificationReport
from .seriesgen import PerturbedPDE, qderivs_at0
from .symcore import (
    INDEPENDENT,
    Q,
    coefficient_derivative,
    degree_in,
    normalize,
    series_atoms,
)

__all__ = [
    "DioSolution",
    "enumerate_dio",
    "derivative_slots",
    "qderiv_series",
    "fdb_qderiv_at0",
    "verify_oracle",
    "linearity_witness",
]

log = logging.getLogger(__name__)

Slot = tuple[int, ...]


@dataclass(frozen=True)
class DioSolution:
    """
    One solution of the Diophantine system: ``r[m-1]`` is r_m and
    ``p[m-1][j]`` is p_m(j+1).
    """

    r: tuple[int, ...]
    p: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return sum((m + 1) * r_m for m, r_m in enumerate(self.r))

    @property
    def total(self) -> int:
        return sum(self.r)

    @property
    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(column) for column in zip(*self.p))

    def to_json(self) -> dict:
        return {
            "r": list(self.r),
            "p": [list(row) for row in self.p],
            "r_total": self.total,
            "p_columns": list(self.column_sums),
        }


def _partitions(n: int, smallest: int = 1) -> Iterator[tuple[int, ...]]:
    yield (n,)
    for i in range(smallest, n // 2 + 1):
        for rest in _partitions(n - i, i):
            yield (i,) + rest


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ``parts``-tuples of nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_dio(n: int, k: int) -> list[DioSolution]:
    """
    Every solution for order ``n`` and k+1 slots, sorted lexicographically
    on (r, p read row by row).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")

    solutions = []
    for partition in _partitions(n):
        r = tuple(partition.count(m) for m in range(1, n + 1))
        rows = [list(_compositions(r_m, k + 1)) for r_m in r]
        for p in itertools.product(*rows):
            solutions.append(DioSolution(r, tuple(p)))

    solutions.sort(key=lambda s: (s.r, tuple(itertools.chain.from_iterable(s.p))))
    return solutions


def derivative_slots(e: sympy.Expr, placeholder: sympy.Expr) -> list[Slot]:
    """
    The derivatives of the dependent variable occurring in ``e``, as counts
    per independent variable, sorted by total order.
    """
    variables = placeholder.args
    slots = set()
    if e.has(placeholder):
        for derivative in e.atoms(sympy.Derivative):
            if derivative.expr == placeholder:
                counts = dict(derivative.variable_count)
                slots.add(tuple(int(counts.get(v, 0)) for v in variables))

        stripped = e.xreplace(
            {
                d: sympy.Dummy()
                for d in e.atoms(sympy.Derivative)
                if d.expr == placeholder
            }
        )
        if stripped.has(placeholder):
            slots.add(tuple(0 for _ in variables))

    return sorted(slots, key=lambda slot: (sum(slot), slot))


def _slot_atom(placeholder: sympy.Expr, slot: Slot) -> sympy.Expr:
    counts = [(v, n) for v, n in zip(placeholder.args, slot) if n > 0]
    if not counts:
        return placeholder
    return sympy.Derivative(placeholder, *counts)


def qderiv_series(
    slot: Slot,
    i: int,
    N: int,
    family: str = "u",
    variables: Sequence[sympy.Symbol] = INDEPENDENT,
) -> sympy.Expr:
    """d^i u^(slot) / dq^i = sum_{l=i..N} l!/(l-i)! q^(l-i) u_l^(slot)."""
    if not 0 <= i <= N:
        raise ValueError(f"need 0 <= i <= N, got i={i}, N={N}")
    return sympy.Add(
        *(
            sympy.Rational(math.factorial(l), math.factorial(l - i))
            * Q ** (l - i)
            * coefficient_derivative(family, l, slot, variables)
            for l in range(i, N + 1)
        )
    )


def fdb_qderiv_at0(
    pde: PerturbedPDE, target: str, n: int, family: str = "u"
) -> sympy.Expr:
    """(d^n target / dq^n) at q = 0 assembled term by term from the formula."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    part = {"E0": pde.E0, "E1": pde.E1}[target]
    placeholder = pde.placeholder
    variables = pde.variables
    slots = derivative_slots(part, placeholder)
    if not slots:
        return sympy.S.Zero

    formal = [sympy.Dummy(f"slot{j}") for j in range(len(slots))]
    formal_part = part.xreplace(
        {_slot_atom(placeholder, slot): s for slot, s in zip(slots, formal)}
    )
    at_u0 = {
        s: coefficient_derivative(family, 0, slot, variables)
        for slot, s in zip(slots, formal)
    }
    at_q0 = {
        (i, j): qderiv_series(slot, i, n, family, variables).xreplace({Q: 0})
        for i in range(1, n + 1)
        for j, slot in enumerate(slots)
    }

    terms = []
    for solution in enumerate_dio(n, len(slots) - 1):
        orders = [(s, p) for s, p in zip(formal, solution.column_sums) if p > 0]
        partial = sympy.diff(formal_part, *orders)
        if partial == 0:
            continue

        denominator = 1
        product = sympy.S.One
        for i, (r_i, row) in enumerate(zip(solution.r, solution.p), start=1):
            denominator *= math.factorial(i) ** r_i
            for j, p_ij in enumerate(row):
                if p_ij:
                    denominator *= math.factorial(p_ij)
                    product *= at_q0[(i, j)] ** p_ij

        weight = sympy.Rational(math.factorial(n), denominator)
        terms.append(weight * partial.xreplace(at_u0) * product)

    return sympy.expand(sympy.Add(*terms))


def linearity_witness(e: sympy.Expr, n: int, family: str = "u") -> bool:
    """True if every term of ``e`` holding an order-``n`` coefficient holds exactly one."""
    atoms = series_atoms(e, family, [n])
    return degree_in(e, atoms) in (0, 1)


def verify_oracle(pde: PerturbedPDE, N: int, family: str = "u") -> VerificationReport:
    """
    Compare the formula against direct Taylor extraction for n = 1..N, and
    check that the order-n coefficients enter linearly.
    """
    direct = qderivs_at0(pde, "E0", N, family)
    reports = []
    for n in range(1, N + 1):
        oracle = fdb_qderiv_at0(pde, "E0", n, family)
        residual = normalize(oracle - direct[n])
        linear = linearity_witness(oracle, n, family)
        log.debug("oracle check n=%d: zero=%s linear=%s", n, residual.is_zero, linear)
        reports.append(
            OrderReport(
                n,
                residual.is_zero and linear,
                residual,
                detail="" if linear else f"order {n} coefficients enter nonlinearly",
            )
        )
    return VerificationReport("fdb-oracle", tuple(reports))
