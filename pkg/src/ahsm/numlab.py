"""
Exact residuals of the Cahn-Hilliard series solutions, theta sweeps and the
theta optimizer.

Every residual is an exact rational; floats appear only when rows are
written out. Residuals are taken of the solutions as displayed unless
``as_printed=False`` asks for the hierarchy-consistent coefficients of the
linear case.
"""

import csv
import functools
import io
import logging
import time
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import sympy
from tqdm import tqdm

from .chmodel import CHCase, builtin_asm_solution, ch_pde, homotopy_solution
from .symcore import (
    EPS,
    THETA,
    A,
    PoleError,
    Q,
    eval_exact,
    substitute,
    t,
    x,
)
from .typing import PathLike, RationalLike

__all__ = [
    "DegenerateHomotopyError",
    "EvalPoint",
    "REFERENCE_POINT",
    "REPORTED",
    "ReportedResidual",
    "SweepRow",
    "OptResult",
    "WaveSpeedRow",
    "WaveSpeedScan",
    "ResidualCurve",
    "residual_expression",
    "residual",
    "asm_residual",
    "sweep",
    "sweep_to_csv",
    "plot_sweep",
    "optimize_theta",
    "scan_wave_speed",
]

log = logging.getLogger(__name__)

# 1/phi to six digits, kept rational so every evaluated theta stays exact
INV_PHI = sympy.Rational(618034, 10**6)
LATTICE = 10**9

DEFAULT_THETA_MIN = sympy.S.Zero
DEFAULT_THETA_MAX = sympy.Rational(999, 1000)
DEFAULT_STEP = sympy.Rational(1, 1000)
DEFAULT_WIDTH = sympy.Rational(1, 10**6)
ROOT_TOLERANCE = sympy.Rational(1, 10**9)
DEFAULT_WAVE_SPEEDS = tuple(sympy.Rational(k, 2) for k in range(-10, 11) if k != 0)


class DegenerateHomotopyError(ValueError):
    def __init__(self) -> None:
        super().__init__(
            "theta = 1 is not allowed: the homotopy model degenerates to"
            " H = (1 - q)*E0 and the perturbation term drops out"
        )


def _rational(value: RationalLike) -> sympy.Rational:
    if isinstance(value, (str, float)):
        return sympy.Rational(str(value))
    return sympy.Rational(value)


@dataclass(frozen=True)
class EvalPoint:
    """
    A point (x, t, eps, q, a) at which residuals are evaluated, optionally
    with theta. ``a`` is only read by the 1/u case.
    """

    x: sympy.Rational
    t: sympy.Rational
    eps: sympy.Rational
    q: sympy.Rational = sympy.S.One
    a: sympy.Rational = sympy.S.One
    theta: sympy.Rational | None = None

    def __post_init__(self) -> None:
        for name in ("x", "t", "eps", "q", "a"):
            object.__setattr__(self, name, _rational(getattr(self, name)))
        if self.theta is not None:
            object.__setattr__(self, "theta", _rational(self.theta))

    @classmethod
    def from_mapping(cls, config: Mapping) -> "EvalPoint":
        """
        Build a point from a config table. ``x``, ``t`` and ``eps`` are
        required; decimal strings are read exactly.
        """
        missing = [key for key in ("x", "t", "eps") if key not in config]
        if missing:
            raise ValueError(f"evaluation point is missing {', '.join(missing)}")
        return cls(
            config["x"],
            config["t"],
            config["eps"],
            config.get("q", 1),
            config.get("a", 1),
            config.get("theta"),
        )

    def with_theta(self, theta: RationalLike) -> "EvalPoint":
        return replace(self, theta=_rational(theta))

    def bindings(self) -> dict[sympy.Symbol, sympy.Rational]:
        values = {x: self.x, t: self.t, EPS: self.eps, Q: self.q, A: self.a}
        if self.theta is not None:
            values[THETA] = self.theta
        return values


REFERENCE_POINT = EvalPoint(1, sympy.Rational(1, 10), sympy.Rational(1, 100))


@dataclass(frozen=True)
class ReportedResidual:
    """
    A published |residual| of a displayed homotopy solution, with the theta and
    the point it was evaluated at.
    """

    theta: sympy.Rational
    abs_residual: float
    point: EvalPoint = REFERENCE_POINT

    @property
    def at_theta(self) -> EvalPoint:
        return self.point.with_theta(self.theta)


# the 1/u value is only reproduced with the wave travelling the other way, a = -1
REPORTED = {
    CHCase.INV_U: ReportedResidual(
        sympy.Rational(5478, 10**4), 4.70e-6, replace(REFERENCE_POINT, a=-1)
    ),
    CHCase.LINEAR_U: ReportedResidual(sympy.Rational(7015, 10**4), 1.59e-6),
}


def _check_theta(theta: sympy.Rational) -> None:
    if theta == 1:
        raise DegenerateHomotopyError()
    if not 0 <= theta < 1:
        raise ValueError(f"theta must lie in [0, 1), got {theta}")


def _format(value: sympy.Rational) -> str:
    return f"{float(value):.17g}"


@dataclass(frozen=True)
class SweepRow:
    theta: sympy.Rational
    residual: sympy.Rational | None
    error: str | None = None

    @property
    def flagged(self) -> bool:
        return self.residual is None

    @property
    def abs_residual(self) -> sympy.Rational | None:
        return None if self.residual is None else abs(self.residual)

    def csv_fields(self) -> list[str]:
        if self.residual is None:
            return [_format(self.theta), "", ""]
        return [_format(self.theta), _format(self.residual), _format(abs(self.residual))]


@dataclass(frozen=True)
class OptResult:
    theta: sympy.Rational
    residual: sympy.Rational
    grid_size: int
    iterations: int
    trace: tuple[tuple[sympy.Rational, sympy.Rational], ...] = field(default=())

    @property
    def abs_residual(self) -> sympy.Rational:
        return abs(self.residual)

    def to_json(self) -> dict:
        return {
            "theta": str(self.theta),
            "theta_float": _format(self.theta),
            "residual": _format(self.residual),
            "abs_residual": _format(self.abs_residual),
            "grid_size": self.grid_size,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class WaveSpeedRow:
    """
    The 1/u residual for one wave speed at the scanned theta, and the values of
    theta in [0, 1) where that residual vanishes.
    """

    a: sympy.Rational
    residual: sympy.Rational | None
    roots: tuple[sympy.Rational, ...] = ()

    @property
    def flagged(self) -> bool:
        return self.residual is None

    @property
    def abs_residual(self) -> sympy.Rational | None:
        return None if self.residual is None else abs(self.residual)

    def nearest_root(self, theta: sympy.Rational) -> sympy.Rational | None:
        if not self.roots:
            return None
        return min(self.roots, key=lambda root: (abs(root - theta), root))

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "abs_residual": None if self.flagged else _format(self.abs_residual),
            "roots": [_format(root) for root in self.roots],
        }


@dataclass(frozen=True)
class WaveSpeedScan:
    rows: tuple[WaveSpeedRow, ...]
    theta: sympy.Rational
    target: float

    @property
    def best(self) -> WaveSpeedRow | None:
        """The row whose |residual| is relatively closest to the target."""
        scored = [row for row in self.rows if not row.flagged]
        if not scored:
            return None
        return min(
            scored,
            key=lambda row: (abs(float(row.abs_residual) - self.target) / self.target, row.a),
        )

    @property
    def fitted(self) -> WaveSpeedRow | None:
        """The row with a root of the residual closest to the scanned theta."""
        rooted = [row for row in self.rows if row.roots]
        if not rooted:
            return None
        return min(
            rooted, key=lambda row: (abs(row.nearest_root(self.theta) - self.theta), row.a)
        )


def residual_expression(case: CHCase, series: sympy.Expr) -> sympy.Expr:
    """E = u_t + [F(u) u_x]_x + eps*u_xxxx with u replaced by ``series``."""
    pde = ch_pde(case)
    return substitute(pde.full, {pde.placeholder: series})


@functools.cache
def _homotopy_residual(case: CHCase, order: int | None, as_printed: bool) -> sympy.Expr:
    solution = homotopy_solution(case, THETA, as_printed)
    if order is not None:
        solution = solution.truncate(order)
    return residual_expression(case, solution.assemble())


def residual(
    case: CHCase,
    point: EvalPoint,
    order: int | None = None,
    as_printed: bool = True,
) -> sympy.Rational:
    """
    Exact residual of the homotopy series solution of ``case`` at ``point``
    (which must carry theta). ``order`` truncates the solution first.
    ``as_printed=False`` evaluates the hierarchy-consistent linear-case coefficients
    instead of the displayed ones.

    Raises:
        DegenerateHomotopyError: for theta = 1.
        PoleError: if the solution has a pole at the point.
    """
    if point.theta is None:
        raise ValueError("the evaluation point needs a value for theta")
    _check_theta(point.theta)

    e = _homotopy_residual(case, order, as_printed)
    return eval_exact(e, point.bindings())


def asm_residual(
    case: CHCase,
    point: EvalPoint,
    order: int | None = None,
    as_printed: bool = True,
) -> sympy.Rational:
    """Exact residual of the plain eps-power ASM series; theta and q are not read."""
    solution = builtin_asm_solution(case, as_printed)
    if order is not None:
        solution = solution.truncate(order)
    e = residual_expression(case, solution.assemble(EPS))
    return eval_exact(e, point.bindings())


class ResidualCurve:
    """
    The residual at a fixed point as an exact rational function of theta,
    p(theta)/r(theta), so that many values of theta are cheap.
    """

    def __init__(
        self,
        case: CHCase,
        point: EvalPoint,
        order: int | None = None,
        as_printed: bool = True,
    ) -> None:
        self.case = case
        self.point = replace(point, theta=None)

        e = _homotopy_residual(case, order, as_printed)
        at_point = e.xreplace(self.point.bindings())
        if at_point.has(sympy.zoo, sympy.nan):
            raise PoleError(f"{case.value} solution has a pole at {self.point}")

        numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(at_point)))
        self.numerator = sympy.Poly(numerator, THETA)
        self.denominator = sympy.Poly(denominator, THETA)

    def __call__(self, theta) -> sympy.Rational:
        theta = _rational(theta)
        _check_theta(theta)
        denominator = self.denominator.eval(theta)
        if denominator == 0:
            raise PoleError(f"residual of {self.case.value} has a pole at theta = {theta}")
        return sympy.Rational(self.numerator.eval(theta)) / denominator

    def roots(self, tolerance=ROOT_TOLERANCE) -> tuple[sympy.Rational, ...]:
        """
        The real values of theta in [0, 1) where the residual vanishes, each to
        within ``tolerance`` and snapped to the optimizer lattice.
        """
        if self.numerator.is_zero:
            raise ValueError(f"residual of {self.case.value} vanishes for every theta")
        if self.numerator.degree() < 1:
            return ()

        intervals = self.numerator.intervals(eps=_rational(tolerance), inf=0, sup=1)
        found = []
        for (lo, hi), _ in intervals:
            root = _snap((lo + hi) / 2)
            if 0 <= root < 1 and self.denominator.eval(root) != 0:
                found.append(root)
        return tuple(sorted(set(found)))


def _grid(theta_min, theta_max, step) -> list[sympy.Rational]:
    theta_min, theta_max, step = map(_rational, (theta_min, theta_max, step))
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if not 0 <= theta_min < theta_max < 1:
        raise ValueError(
            f"need 0 <= theta_min < theta_max < 1, got [{theta_min}, {theta_max}]"
        )

    count = int(sympy.floor((theta_max - theta_min) / step)) + 1
    return [theta_min + k * step for k in range(count)]


def _evaluate(curve: ResidualCurve, theta: sympy.Rational) -> SweepRow:
    try:
        return SweepRow(theta, curve(theta))
    except (PoleError, ValueError) as exc:
        log.warning("theta = %s flagged: %s", theta, exc)
        return SweepRow(theta, None, str(exc))


def sweep(
    case: CHCase,
    point: EvalPoint,
    theta_min=DEFAULT_THETA_MIN,
    theta_max=DEFAULT_THETA_MAX,
    step=DEFAULT_STEP,
    order: int | None = None,
    as_printed: bool = True,
    progress: bool = False,
) -> list[SweepRow]:
    """
    Residual rows at theta = theta_min, theta_min + step, ... <= theta_max.
    Rows that cannot be evaluated are flagged rather than raised.
    """
    thetas = _grid(theta_min, theta_max, step)
    curve = ResidualCurve(case, point, order, as_printed)
    return _sweep_curve(curve, thetas, progress)


def _sweep_curve(
    curve: ResidualCurve, thetas: Sequence[sympy.Rational], progress: bool
) -> list[SweepRow]:
    started = time.perf_counter()
    rows = [
        _evaluate(curve, theta)
        for theta in tqdm(thetas, desc=f"sweep {curve.case.value}", disable=not progress)
    ]
    log.info(
        "swept %d values of theta for %s in %.2fs",
        len(rows),
        curve.case.value,
        time.perf_counter() - started,
    )
    return rows


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["theta", "residual", "abs_residual"])
    for row in rows:
        writer.writerow(row.csv_fields())
    return buffer.getvalue()


def plot_sweep(rows: Sequence[SweepRow], path: PathLike, title: str = "") -> None:
    """Write |residual| against theta as a single-line SVG chart."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    kept = [row for row in rows if not row.flagged]
    thetas = np.array([float(row.theta) for row in kept])
    values = np.array([float(row.abs_residual) for row in kept])

    matplotlib.rcParams["svg.hashsalt"] = "ahsm"
    fig, ax = plt.subplots()
    ax.plot(thetas, values)
    ax.set_xlabel("theta")
    ax.set_ylabel("|residual|")
    if title:
        ax.set_title(title)
    fig.savefig(Path(path), format="svg", metadata={"Date": None})
    plt.close(fig)


def _snap(value: sympy.Rational) -> sympy.Rational:
    return sympy.Rational(sympy.floor(value * LATTICE + sympy.Rational(1, 2)), LATTICE)


def optimize_theta(
    case: CHCase,
    point: EvalPoint,
    theta_min=DEFAULT_THETA_MIN,
    theta_max=DEFAULT_THETA_MAX,
    step=DEFAULT_STEP,
    width=DEFAULT_WIDTH,
    order: int | None = None,
    as_printed: bool = True,
    progress: bool = False,
) -> OptResult:
    """
    Minimize |residual| over theta: a coarse grid, then golden-section search
    inside the bracket around the best grid point until the bracket is
    narrower than ``width``. The result is the best of every evaluated point,
    ties going to the smaller theta.

    Raises:
        ValueError: if no grid point can be evaluated.
    """
    width = _rational(width)
    curve = ResidualCurve(case, point, order, as_printed)
    rows = _sweep_curve(curve, _grid(theta_min, theta_max, step), progress)
    grid = [row for row in rows if not row.flagged]
    if not grid:
        raise ValueError(f"no value of theta in [{theta_min}, {theta_max}] can be evaluated")

    evaluated = {row.theta: row.residual for row in grid}

    def score(theta: sympy.Rational) -> sympy.Rational | None:
        if theta not in evaluated:
            evaluated[theta] = _evaluate(curve, theta).residual
        value = evaluated[theta]
        return None if value is None else abs(value)

    def better(a: sympy.Rational | None, b: sympy.Rational | None) -> bool:
        return a is not None and (b is None or a <= b)

    best_index = min(
        range(len(rows)),
        key=lambda i: (rows[i].flagged, rows[i].abs_residual or 0, rows[i].theta),
    )
    lo = rows[max(best_index - 1, 0)].theta
    hi = rows[min(best_index + 1, len(rows) - 1)].theta

    trace = []
    iterations = 0
    while hi - lo > width:
        c = _snap(hi - INV_PHI * (hi - lo))
        d = _snap(lo + INV_PHI * (hi - lo))
        if c >= d:
            break
        fc, fd = score(c), score(d)
        if better(fc, fd):
            hi = d
        else:
            lo = c
        iterations += 1
        trace.append((lo, hi))
        log.debug("golden section %d: [%s, %s]", iterations, float(lo), float(hi))

    candidates = [(abs(r), theta) for theta, r in evaluated.items() if r is not None]
    _, theta_best = min(candidates)
    log.info(
        "best theta for %s: %s after %d refinements",
        case.value,
        float(theta_best),
        iterations,
    )
    return OptResult(
        theta_best, evaluated[theta_best], len(rows), iterations, tuple(trace)
    )


def scan_wave_speed(
    point: EvalPoint,
    theta,
    target: float,
    a_values: Iterable | None = None,
    as_printed: bool = True,
) -> WaveSpeedScan:
    """
    The 1/u residual at ``point`` and ``theta`` for each wave speed in
    ``a_values`` (by default -5 to 5 in steps of 1/2, skipping 0), with the
    roots in theta of the residual for each. Wave speeds that put the point on
    a pole are flagged.
    """
    theta = _rational(theta)
    _check_theta(theta)
    if a_values is None:
        a_values = DEFAULT_WAVE_SPEEDS

    rows = []
    for a in map(_rational, a_values):
        try:
            curve = ResidualCurve(CHCase.INV_U, replace(point, a=a), as_printed=as_printed)
            rows.append(WaveSpeedRow(a, curve(theta), curve.roots()))
        except PoleError as exc:
            log.warning("a = %s flagged: %s", a, exc)
            rows.append(WaveSpeedRow(a, None))

    scan = WaveSpeedScan(tuple(rows), theta, target)
    if scan.fitted is not None:
        log.info(
            "a = %s has a root at theta = %s",
            scan.fitted.a,
            float(scan.fitted.nearest_root(theta)),
        )
    return scan
