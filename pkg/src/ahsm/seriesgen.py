"""
Series expansion of a perturbed PDE and the coupled hierarchies it produces.

A perturbed PDE is E = E0(u) + eps*E1(u) = 0. Expanding u as a truncated
power series and collecting powers of the series parameter gives

* the ASM hierarchy: powers of eps in E0 + eps*E1,
* the raw AHSM hierarchy: powers of q in the homotopy model
  H(u, q) = (1 - theta*q)*E0 + q*eps*(1 - theta)*E1,
* the rearranged AHSM hierarchy: the raw one with the -theta*E0 couplings
  eliminated by means of the lower equations.

In derivative form equation i carries the i-th derivative with respect to the
series parameter at zero; in coefficient form it is divided by i!.
"""

import enum
import json
import logging
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

import sympy

from ._reports import OrderReport, VerificationReport
from .symcore import (
    DEFAULT_NAMESPACE,
    EPS,
    Q,
    THETA,
    Namespace,
    coefficient,
    degree_in,
    normalize,
    resolve_functions,
    series_atoms,
    substitute,
)

__all__ = [
    "PerturbedPDE",
    "HierarchyKind",
    "Hierarchy",
    "Certificate",
    "LinearityReport",
    "IncompleteHierarchyError",
    "expand_series",
    "taylor_derivatives",
    "qderivs_at0",
    "generate_asm",
    "homotopy_model",
    "generate_ahsm_raw",
    "generate_ahsm",
    "rearrange",
    "check_linearity",
    "verify_linearity",
    "verify_rearrangement",
]

log = logging.getLogger(__name__)


class IncompleteHierarchyError(ValueError):
    pass


@dataclass(frozen=True)
class PerturbedPDE:
    """
    The pair (E0, E1) of a perturbed PDE E0 + eps*E1 = 0.

    Both parts are written in the dependent-variable placeholder (``u`` by
    default) and contain neither series coefficients nor eps, theta or q.
    ``closed_forms`` optionally interprets the uninterpreted functions.
    """

    name: str
    E0: sympy.Expr
    E1: sympy.Expr
    namespace: Namespace = DEFAULT_NAMESPACE
    closed_forms: Mapping[str, sympy.Lambda] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, part in (("E0", self.E0), ("E1", self.E1)):
            clash = {EPS, THETA, Q} & part.free_symbols
            if clash:
                names = ", ".join(sorted(map(str, clash)))
                raise ValueError(f"{label} of {self.name} may not contain {names}")
            if series_atoms(part):
                raise ValueError(
                    f"{label} of {self.name} must be written in {self.namespace.dep},"
                    " not in series coefficients"
                )

    @property
    def variables(self) -> tuple[sympy.Symbol, ...]:
        return self.namespace.variables

    @property
    def placeholder(self) -> sympy.Expr:
        return self.namespace.placeholder

    @property
    def full(self) -> sympy.Expr:
        """E0 + eps*E1."""
        return self.E0 + EPS * self.E1

    def resolved(self) -> "PerturbedPDE":
        """The same pde with every function that has a closed form replaced by it."""
        if not self.closed_forms:
            return self
        return PerturbedPDE(
            self.name,
            resolve_functions(self.E0, self.closed_forms),
            resolve_functions(self.E1, self.closed_forms),
            self.namespace,
            self.closed_forms,
        )


class HierarchyKind(enum.Enum):
    ASM = "asm"
    AHSM_RAW = "ahsm-raw"
    AHSM_REARRANGED = "ahsm"


# Certificate[i] lists (source order j, multiplier) such that
# rearranged_i = raw_i + sum(multiplier * raw_j).
Certificate = tuple[tuple[tuple[int, sympy.Expr], ...], ...]


@dataclass(frozen=True)
class Hierarchy:
    kind: HierarchyKind
    order: int
    equations: tuple[sympy.Expr, ...]
    derivative_form: bool = True
    family: str = "u"
    theta: sympy.Expr = THETA

    def __len__(self) -> int:
        return len(self.equations)

    def __getitem__(self, i: int) -> sympy.Expr:
        return self.equations[i]

    def __iter__(self) -> Iterator[sympy.Expr]:
        return iter(self.equations)

    def to_text(self) -> str:
        return "\n".join(f"{normalize(eq)} = 0" for eq in self.equations)

    def to_json(self) -> str:
        return json.dumps([str(normalize(eq)) for eq in self.equations], indent=2)

    def to_latex(self) -> str:
        lines = [rf"{normalize(eq).to_latex()} &= 0" for eq in self.equations]
        body = " \\\\\n".join(lines)
        return f"\\begin{{aligned}}\n{body}\n\\end{{aligned}}"


@dataclass(frozen=True)
class LinearityReport:
    order: int
    wrt: int
    degree: int | None

    @property
    def linear(self) -> bool:
        return self.degree is not None and self.degree <= 1


def expand_series(
    e: sympy.Expr,
    param: sympy.Symbol,
    N: int,
    family: str = "u",
    namespace: Namespace = DEFAULT_NAMESPACE,
) -> sympy.Expr:
    """
    Replace the dependent variable (and its derivatives) in ``e`` by the
    truncated series sum(param^l * u_l, l = 0..N).
    """
    if N < 0:
        raise ValueError(f"truncation order must be nonnegative, got {N}")

    series = sympy.Add(
        *(param**l * coefficient(family, l, namespace.variables) for l in range(N + 1))
    )
    return substitute(e, {namespace.placeholder: series})


def taylor_derivatives(e: sympy.Expr, param: sympy.Symbol, N: int) -> list[sympy.Expr]:
    """[d^i e / d param^i at param = 0 for i = 0..N]."""
    derivatives = []
    current = e
    for i in range(N + 1):
        if i > 0:
            current = sympy.diff(current, param)
        derivatives.append(sympy.expand(current.xreplace({param: 0})))
    return derivatives


def qderivs_at0(
    pde: PerturbedPDE,
    target: str,
    N: int,
    family: str = "u",
    param: sympy.Symbol = Q,
) -> list[sympy.Expr]:
    """
    (d^i target / dq^i) at q = 0 for i = 0..N, where ``target`` is "E0" or
    "E1" and u is the truncated series in ``param``.
    """
    part = {"E0": pde.E0, "E1": pde.E1}[target]
    expanded = expand_series(part, param, N, family, pde.namespace)
    return taylor_derivatives(expanded, param, N)


def _finish(
    kind: HierarchyKind,
    derivatives: list[sympy.Expr],
    derivative_form: bool,
    family: str,
    theta: sympy.Expr = THETA,
) -> Hierarchy:
    if derivative_form:
        equations = tuple(derivatives)
    else:
        equations = tuple(
            sympy.expand(d / math.factorial(i)) for i, d in enumerate(derivatives)
        )
    return Hierarchy(kind, len(derivatives) - 1, equations, derivative_form, family, theta)


def generate_asm(
    pde: PerturbedPDE, N: int, derivative_form: bool = True, family: str = "u"
) -> Hierarchy:
    """Equation i is the coefficient of eps^i in (E0 + eps*E1)(sum eps^l u_l)."""
    log.debug("generating ASM hierarchy of %s to order %d", pde.name, N)
    expanded = expand_series(pde.full, EPS, N, family, pde.namespace)
    return _finish(
        HierarchyKind.ASM, taylor_derivatives(expanded, EPS, N), derivative_form, family
    )


def homotopy_model(
    pde: PerturbedPDE, N: int, theta: sympy.Expr = THETA, family: str = "u"
) -> sympy.Expr:
    """H(u, q) = (1 - theta*q)*E0 + q*eps*(1 - theta)*E1 with u expanded in q."""
    E0 = expand_series(pde.E0, Q, N, family, pde.namespace)
    E1 = expand_series(pde.E1, Q, N, family, pde.namespace)
    return (1 - theta * Q) * E0 + Q * EPS * (1 - theta) * E1


def generate_ahsm_raw(
    pde: PerturbedPDE,
    N: int,
    derivative_form: bool = True,
    theta: sympy.Expr = THETA,
    family: str = "u",
) -> Hierarchy:
    log.debug("generating raw AHSM hierarchy of %s to order %d", pde.name, N)
    H = homotopy_model(pde, N, theta, family)
    return _finish(
        HierarchyKind.AHSM_RAW, taylor_derivatives(H, Q, N), derivative_form, family, theta
    )


def rearrange(h: Hierarchy) -> tuple[Hierarchy, Certificate]:
    """
    Eliminate the lower-order E0 couplings from a raw AHSM hierarchy.

    Row i of the result is raw_i + sum_j m_ij * raw_j over j < i with
    m_ij = i!/j! * theta^(i-j) in derivative form and theta^(i-j) in coefficient
    form. The multipliers are returned as the certificate.

    Raises:
        IncompleteHierarchyError: if ``h`` does not hold every order 0..N.
    """
    if h.kind is not HierarchyKind.AHSM_RAW:
        raise ValueError(f"can only rearrange a raw AHSM hierarchy, got {h.kind.value}")
    if len(h.equations) != h.order + 1:
        raise IncompleteHierarchyError(
            f"hierarchy of order {h.order} holds {len(h.equations)} equations"
        )

    rows = []
    certificate = []
    for i, raw in enumerate(h.equations):
        multipliers = []
        for j in range(i):
            m = h.theta ** (i - j)
            if h.derivative_form:
                m *= sympy.Rational(math.factorial(i), math.factorial(j))
            multipliers.append((j, m))

        row = raw + sympy.Add(*(m * h.equations[j] for j, m in multipliers))
        rows.append(sympy.expand(row))
        certificate.append(tuple(multipliers))

    rearranged = Hierarchy(
        HierarchyKind.AHSM_REARRANGED,
        h.order,
        tuple(rows),
        h.derivative_form,
        h.family,
        h.theta,
    )
    return rearranged, tuple(certificate)


def generate_ahsm(
    pde: PerturbedPDE,
    N: int,
    derivative_form: bool = True,
    theta: sympy.Expr = THETA,
    family: str = "u",
) -> Hierarchy:
    """The rearranged AHSM hierarchy."""
    rearranged, _ = rearrange(generate_ahsm_raw(pde, N, derivative_form, theta, family))
    return rearranged


def check_linearity(h: Hierarchy, i: int, wrt: int | None = None) -> LinearityReport:
    """
    Degree of equation ``i`` in the series coefficient of order ``wrt``
    (default ``i``) and its derivatives.
    """
    if not 0 <= i <= h.order:
        raise ValueError(f"order {i} is outside the hierarchy (0..{h.order})")
    if wrt is None:
        wrt = i

    equation = h.equations[i]
    atoms = series_atoms(equation, h.family, [wrt])
    return LinearityReport(i, wrt, degree_in(equation, atoms))


def verify_linearity(
    pde: PerturbedPDE,
    N: int,
    kind: HierarchyKind = HierarchyKind.AHSM_REARRANGED,
) -> VerificationReport:
    """Check that every equation i >= 1 of the hierarchy is affine-linear in u_i."""
    if kind is HierarchyKind.ASM:
        h = generate_asm(pde, N)
    elif kind is HierarchyKind.AHSM_RAW:
        h = generate_ahsm_raw(pde, N)
    else:
        h = generate_ahsm(pde, N)

    reports = []
    for i in range(1, N + 1):
        linearity = check_linearity(h, i)
        log.debug("order %d of %s: degree %s", i, kind.value, linearity.degree)
        degree = "not polynomial" if linearity.degree is None else str(linearity.degree)
        reports.append(
            OrderReport(
                i,
                linearity.linear,
                normalize(0),
                detail=f"degree {degree} in {h.family}{i}",
            )
        )
    return VerificationReport(f"linearity ({kind.value})", tuple(reports))


def verify_rearrangement(
    pde: PerturbedPDE, N: int, derivative_form: bool = True
) -> VerificationReport:
    """
    Compare the rearranged hierarchy with its closed form

        R_i = D_i + eps*(1 - theta) * sum_{k<i} theta^(i-1-k) * i!/k! * G_k,

    where D_i and G_i are the i-th q-derivatives of E0 and E1 at q = 0
    (divided by i! in coefficient form).
    """
    rearranged, certificate = rearrange(generate_ahsm_raw(pde, N, derivative_form))
    D = qderivs_at0(pde, "E0", N)
    G = qderivs_at0(pde, "E1", N)

    reports = []
    for i in range(N + 1):
        chain = sympy.Add(
            *(
                THETA ** (i - 1 - k)
                * sympy.Rational(math.factorial(i), math.factorial(k))
                * G[k]
                for k in range(i)
            )
        )
        expected = D[i] + EPS * (1 - THETA) * chain
        if not derivative_form:
            expected = expected / math.factorial(i)

        residual = normalize(rearranged[i] - expected)
        reports.append(OrderReport(i, residual.is_zero, residual, certificate[i]))
    return VerificationReport("rearrange", tuple(reports))
