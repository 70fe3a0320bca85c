"""
Triangular maps between series coefficients, and the checks built on them.

A coefficient map of order N sends each source coefficient to a combination
of target coefficients of equal or lower order:

    source_l = sum_{j=0}^{l-1} entries[l][j] * target_{l-j}    (l >= 1),
    source_0 = target_0.

Four maps are built in:

* THETA_ONLY   u_l = sum_j C(l-1, j) theta^j uhat_{l-j}
* SCALING      uhat_l = [eps(1 - theta)]^l utilde_l
* THEOREM1     u_l = sum_j C(l-1, j) theta^j [eps(1 - theta)]^(l-j) utilde_{l-j}
* OPERATOR_ALT u_l = sum_j C(l-1, j) (l-j)/l theta^j utilde_{l-j}

THEOREM1 is THETA_ONLY followed by SCALING. Under THEOREM1 the rearranged
AHSM hierarchy turns, after eliminating lower equations, into the ASM
hierarchy scaled by [eps(1 - theta)]^l.
"""

import enum
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import sympy

from ._reports import OrderReport, VerificationReport
from .seriesgen import (
    PerturbedPDE,
    generate_ahsm,
    generate_asm,
    qderivs_at0,
)
from .solution import Flavor, SeriesSolution
from .symcore import (
    EPS,
    INDEPENDENT,
    THETA,
    NormalForm,
    coefficient,
    is_zero,
    normalize,
    substitute,
    to_text,
)

__all__ = [
    "MapKind",
    "MapOrderError",
    "CoefficientMap",
    "OperatorDiagnostic",
    "build_map",
    "compose",
    "invert_map",
    "transform",
    "apply_map_to_solution",
    "apply_inverse_to_solution",
    "lemma2_multiplier",
    "verify_lemma2",
    "verify_lemma2_upto",
    "reduce",
    "verify_theorem1",
    "operator_diagnostic",
]

log = logging.getLogger(__name__)


class MapOrderError(ValueError):
    pass


class MapKind(enum.Enum):
    THETA_ONLY = "theta-only"
    SCALING = "scaling"
    THEOREM1 = "theorem1"
    OPERATOR_ALT = "operator-alt"


_FAMILIES = {
    MapKind.THETA_ONLY: ("u", "uhat"),
    MapKind.SCALING: ("uhat", "utilde"),
    MapKind.THEOREM1: ("u", "utilde"),
    MapKind.OPERATOR_ALT: ("u", "utilde"),
}


@dataclass(frozen=True)
class CoefficientMap:
    """
    ``entries[l][j]`` multiplies target coefficient ``l - j`` in the image of
    source coefficient ``l``. ``kind`` is None for composed maps.
    """

    entries: tuple[tuple[sympy.Expr, ...], ...]
    source: str = "u"
    target: str = "utilde"
    kind: MapKind | None = None
    inverted: bool = False

    def __post_init__(self) -> None:
        for l, row in enumerate(self.entries):
            if len(row) != max(l, 1):
                raise ValueError(f"row {l} of a coefficient map needs {max(l, 1)} entries")

    @property
    def order(self) -> int:
        return len(self.entries) - 1

    def entry(self, l: int, j: int) -> sympy.Expr:
        return self.entries[l][j]

    def image(
        self, l: int, variables: Sequence[sympy.Symbol] = INDEPENDENT
    ) -> sympy.Expr:
        """The target combination that source coefficient ``l`` is sent to."""
        return sympy.Add(
            *(
                c * coefficient(self.target, l - j, variables)
                for j, c in enumerate(self.entries[l])
            )
        )

    def bindings(
        self, variables: Sequence[sympy.Symbol] = INDEPENDENT
    ) -> dict[sympy.Expr, sympy.Expr]:
        return {
            coefficient(self.source, l, variables): self.image(l, variables)
            for l in range(self.order + 1)
        }

    def to_text(self) -> list[str]:
        return [
            f"{self.source}{l} = {to_text(sympy.factor(self.image(l)))}"
            for l in range(self.order + 1)
        ]


def _theorem1_entry(l: int, j: int, theta, eps) -> sympy.Expr:
    return sympy.binomial(l - 1, j) * theta**j * (eps * (1 - theta)) ** (l - j)


def build_map(
    kind: MapKind, N: int, theta: sympy.Expr = THETA, eps: sympy.Expr = EPS
) -> CoefficientMap:
    if N < 0:
        raise ValueError(f"map order must be nonnegative, got {N}")

    rows: list[tuple[sympy.Expr, ...]] = [(sympy.S.One,)]
    for l in range(1, N + 1):
        if kind is MapKind.THETA_ONLY:
            row = [sympy.binomial(l - 1, j) * theta**j for j in range(l)]
        elif kind is MapKind.SCALING:
            row = [(eps * (1 - theta)) ** l] + [sympy.S.Zero] * (l - 1)
        elif kind is MapKind.THEOREM1:
            row = [_theorem1_entry(l, j, theta, eps) for j in range(l)]
        elif kind is MapKind.OPERATOR_ALT:
            row = [
                sympy.binomial(l - 1, j) * sympy.Rational(l - j, l) * theta**j
                for j in range(l)
            ]
        else:
            raise ValueError(f"unknown map kind {kind}")
        rows.append(tuple(sympy.sympify(c) for c in row))

    source, target = _FAMILIES[kind]
    return CoefficientMap(tuple(rows), source, target, kind)


def compose(first: CoefficientMap, then: CoefficientMap) -> CoefficientMap:
    """
    ``first`` maps a -> b and ``then`` maps b -> c; the result maps a -> c,
    truncated to the lower of the two orders.
    """
    if first.target != then.source:
        raise ValueError(
            f"cannot compose a map into {first.target} with a map from {then.source}"
        )

    N = min(first.order, then.order)
    rows = [(sympy.expand(first.entry(0, 0) * then.entry(0, 0)),)]
    for l in range(1, N + 1):
        row = []
        for s in range(l):
            total = sympy.Add(
                *(
                    first.entry(l, j) * then.entry(l - j, s - j)
                    for j in range(s + 1)
                )
            )
            row.append(sympy.expand(total))
        rows.append(tuple(row))
    return CoefficientMap(tuple(rows), first.source, then.target)


def invert_map(m: CoefficientMap) -> CoefficientMap:
    """
    The triangular inverse: target_l = sum_k inverse[l][k] * source_{l-k}.

    Raises:
        ValueError: if a diagonal entry is identically zero.
    """
    rows: list[tuple[sympy.Expr, ...]] = []
    for l in range(m.order + 1):
        diagonal = m.entry(l, 0)
        if is_zero(diagonal):
            raise ValueError(f"map is singular: diagonal entry of row {l} is zero")

        row = [1 / diagonal]
        for k in range(1, l):
            total = sympy.Add(
                *(m.entry(l, j) * rows[l - j][k - j] for j in range(1, k + 1))
            )
            row.append(sympy.factor(-total / diagonal))
        rows.append(tuple(sympy.factor(c) for c in row))

    return CoefficientMap(tuple(rows), m.target, m.source, m.kind, not m.inverted)


def transform(
    e: sympy.Expr, m: CoefficientMap, variables: Sequence[sympy.Symbol] = INDEPENDENT
) -> sympy.Expr:
    """Replace every source coefficient (and derivative) in ``e`` by its image."""
    return sympy.expand(substitute(e, m.bindings(variables)))


def _combine(
    m: CoefficientMap, coefficients: Sequence[sympy.Expr]
) -> tuple[sympy.Expr, ...]:
    return tuple(
        normalize(
            sympy.Add(*(c * coefficients[l - j] for j, c in enumerate(m.entries[l])))
        ).as_expr()
        for l in range(len(coefficients))
    )


def apply_map_to_solution(m: CoefficientMap, sol: SeriesSolution) -> SeriesSolution:
    """
    Turn an ASM solution utilde_0..utilde_N into the homotopy solution
    u_0..u_N given by the map.

    Raises:
        MapOrderError: if the map is of lower order than the solution.
    """
    if sol.flavor is not Flavor.ASM:
        raise ValueError("can only map an ASM solution to a homotopy solution")
    if m.order < sol.order:
        raise MapOrderError(
            f"map of order {m.order} cannot carry a solution of order {sol.order}"
        )
    return SeriesSolution(Flavor.HOMOTOPY, _combine(m, sol.coefficients), sol.params)


def apply_inverse_to_solution(m: CoefficientMap, sol: SeriesSolution) -> SeriesSolution:
    """
    Recover the ASM coefficients from a homotopy solution built with ``m``.

    Raises:
        MapOrderError: if the map is of lower order than the solution.
        ValueError: if the recovered coefficients still depend on eps or theta,
            i.e. ``sol`` was not produced by ``m``.
    """
    if sol.flavor is not Flavor.HOMOTOPY:
        raise ValueError("can only invert a homotopy solution")
    if m.order < sol.order:
        raise MapOrderError(
            f"map of order {m.order} cannot carry a solution of order {sol.order}"
        )
    truncated = CoefficientMap(m.entries[: sol.order + 1], m.source, m.target, m.kind)
    inverse = invert_map(truncated)
    return SeriesSolution(Flavor.ASM, _combine(inverse, sol.coefficients), sol.params)


def lemma2_multiplier(n: int, i: int, theta: sympy.Expr = THETA) -> sympy.Expr:
    """n!/(i-1)! * C(n-1, i-2) * theta^(n-i+1), for source i = 2..n."""
    return (
        sympy.Rational(math.factorial(n), math.factorial(i - 1))
        * sympy.binomial(n - 1, i - 2)
        * theta ** (n - i + 1)
    )


def verify_lemma2(pde: PerturbedPDE, n: int, theta: sympy.Expr = THETA) -> OrderReport:
    """
    Check that the n-th q-derivative of E0 at zero, rewritten with the
    THETA_ONLY map, equals the same derivative in the hatted coefficients plus
    sum_{i=2..n} n!/(i-1)! C(n-1, i-2) theta^(n-i+1) times the (i-1)-th one.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    m = build_map(MapKind.THETA_ONLY, n, theta)
    D = qderivs_at0(pde, "E0", n)
    D_hat = qderivs_at0(pde, "E0", n, family="uhat")

    lhs = transform(D[n], m, pde.variables)
    certificate = tuple((i, lemma2_multiplier(n, i, theta)) for i in range(2, n + 1))
    rhs = D_hat[n] + sympy.Add(*(c * D_hat[i - 1] for i, c in certificate))

    residual = normalize(lhs - rhs)
    log.debug("lemma 2 at n=%d: %s", n, "zero" if residual.is_zero else "nonzero")
    return OrderReport(n, residual.is_zero, residual, certificate)


def verify_lemma2_upto(
    pde: PerturbedPDE, N: int, theta: sympy.Expr = THETA
) -> VerificationReport:
    return VerificationReport(
        "lemma2", tuple(verify_lemma2(pde, n, theta) for n in range(2, N + 1))
    )


def reduce(
    pde: PerturbedPDE,
    N: int,
    kind: MapKind = MapKind.THEOREM1,
    theta: sympy.Expr = THETA,
) -> tuple[tuple[sympy.Expr, ...], tuple[tuple[tuple[int, sympy.Expr], ...], ...]]:
    """
    Map the rearranged AHSM hierarchy (derivative form) and eliminate lower orders:

        result_l = map(R_l) - sum_{i=2..l} c(l, i) * result_{i-1}

    with c(l, i) = l!/(i-1)! C(l-1, i-2) theta^(l-i+1). Returns the reduced
    equations and, per order, the (source i, c(l, i)) pairs.
    """
    if kind not in (MapKind.THEOREM1, MapKind.THETA_ONLY):
        raise ValueError(f"cannot reduce with a {kind.value} map")

    m = build_map(kind, N, theta)
    rearranged = generate_ahsm(pde, N, derivative_form=True, theta=theta)

    results: list[sympy.Expr] = []
    certificate = []
    for l in range(N + 1):
        weights = tuple((i, lemma2_multiplier(l, i, theta)) for i in range(2, l + 1))
        mapped = transform(rearranged[l], m, pde.variables)
        reduced = mapped - sympy.Add(*(c * results[i - 1] for i, c in weights))
        results.append(sympy.expand(reduced))
        certificate.append(weights)
    return tuple(results), tuple(certificate)


def verify_theorem1(
    pde: PerturbedPDE, N: int, theta: sympy.Expr = THETA
) -> VerificationReport:
    """
    For each order l, the reduced image of rearranged AHSM equation l under
    the THEOREM1 map must equal [eps(1 - theta)]^l times ASM equation l in
    the tilde coefficients.
    """
    reduced, certificate = reduce(pde, N, MapKind.THEOREM1, theta)
    asm = generate_asm(pde, N, derivative_form=True, family="utilde")

    reports = []
    for l in range(N + 1):
        expected = (EPS * (1 - theta)) ** l * asm[l]
        residual = normalize(reduced[l] - expected)
        log.info("theorem 1 at order %d: %s", l, "PASS" if residual.is_zero else "FAIL")
        reports.append(OrderReport(l, residual.is_zero, residual, certificate[l]))
    return VerificationReport("theorem1", tuple(reports))


@dataclass(frozen=True)
class OperatorDiagnostic:
    """
    ``forward`` is the pushforward of X1 through the map, written in u,
    minus Y1's coefficient; ``swapped`` reads the map the other way round.
    """

    order: int
    forward: NormalForm
    swapped: NormalForm

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "forward": str(self.forward),
            "swapped": str(self.swapped),
        }


def _y1_coefficient(l: int, family: str, theta) -> sympy.Expr:
    if l == 0:
        return sympy.S.Zero
    return l * coefficient(family, l) - (l - 1) * theta * coefficient(family, l - 1)


def operator_diagnostic(N: int, theta: sympy.Expr = THETA) -> list[OperatorDiagnostic]:
    """
    Compare the scaling generator X1 (coefficient i*utilde_i) with Y1
    (coefficient l*u_l - (l-1)*theta*u_{l-1}) through the OPERATOR_ALT map.

    Nothing is asserted; each order reports both differences.
    """
    if N < 0:
        raise ValueError(f"order must be nonnegative, got {N}")

    m = build_map(MapKind.OPERATOR_ALT, N, theta)
    inverse = invert_map(m)
    tilde_in_u = {coefficient("utilde", l): inverse.image(l) for l in range(N + 1)}
    # the same inverse entries, read as u_k = sum_i f[k][i] utilde_{k-i}
    relabelled = CoefficientMap(inverse.entries, "u", "utilde")
    u_in_tilde = {coefficient("u", l): relabelled.image(l) for l in range(N + 1)}

    diagnostics = []
    for l in range(N + 1):
        pushed = sympy.Add(
            *(
                c * (l - j) * coefficient("utilde", l - j)
                for j, c in enumerate(m.entries[l])
            )
        )
        forward = pushed.xreplace(tilde_in_u) - _y1_coefficient(l, "u", theta)

        # read the same entries as utilde_l = sum_j e[l][j] u_{l-j}
        pulled = sympy.Add(
            *(
                c * _y1_coefficient(l - j, "u", theta)
                for j, c in enumerate(m.entries[l])
            )
        )
        swapped = pulled.xreplace(u_in_tilde) - l * coefficient("utilde", l)

        diagnostics.append(OperatorDiagnostic(l, normalize(forward), normalize(swapped)))
        log.debug("operator diagnostic at order %d: %s", l, diagnostics[-1].to_json())

    return diagnostics
