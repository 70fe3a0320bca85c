"""
Shared functionality for command line programs and experiment scripts, and
the ``ahsm`` command itself.


Includes:
    * standard commandline arguments for generator scripts and wandb runs.
    * pretty printing functionality.
    * the ``ahsm`` command: hierarchy generation, verification, solution
      transforms and the residual laboratory.
"""

from argparse import ArgumentParser
import argparse
import contextlib
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from pathlib import Path

import sympy

from . import bridge, chmodel, fdb, numlab, seriesgen
from ._reports import VerificationReport
from .modelfile import ModelFileError, load_model
from .solution import Flavor
from .symcore import THETA, ParseError, to_latex, to_text

__all__ = [
    "standard_generator_parser",
    "add_wandb_options",
    "print_title",
    "build_parser",
    "run",
    "main",
]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

VERIFY_CHECKS = (
    "lemma1",
    "lemma2",
    "rearrange",
    "theorem1",
    "solutions",
    "golden-ch",
    "fdb-oracle",
)


def standard_generator_parser() -> ArgumentParser:
    """
    Return a parser that contains the --overwrite, --dry-run, and --verbose
    flags for use in generator scripts.
    """
    parser = ArgumentParser(add_help=False)
    parser.add_argument("--overwrite", action=argparse.BooleanOptionalAction)
    parser.add_argument("--dry-run", action="store_true")
    parser.add_argument("--verbose", action="store_true")
    return parser


def add_wandb_options(parser: ArgumentParser) -> ArgumentParser:
    """
    Add flags to the given parser for controlling runs with wandb.

    Flags added are:

    --wandb            Log the run to wandb.

    --dev | -D         Set wandb to offine mode, allowing testing code without
                       uploading results to wandb.

    --disable-wandb    Disable wandb. This is the default.
    """

    parser.set_defaults(mode="disabled")

    parser.add_argument(
        "--wandb",
        dest="mode",
        action="store_const",
        const="online",
        help="log this run to wandb.",
    )

    parser.add_argument(
        "-D",
        "--dev",
        dest="mode",
        action="store_const",
        const="offline",
        help=(
            "run in development mode. This disables syncing"
            " of wandb runs, but still shows run metrics in"
            " the console"
        ),
    )

    parser.add_argument(
        "--disable-wandb",
        dest="mode",
        action="store_const",
        const="disabled",
        help="disable wandb.",
    )

    return parser


def print_title(text: str) -> None:
    """
    Print a title.

    Title text
    ==========

    """

    print(f"{text}\n{''.join(['=' for _ in text])}")


#####################
#     ARGUMENTS     #
#####################


def _rational(text: str) -> sympy.Rational:
    """Exact rational from a decimal or p/q literal."""
    try:
        return sympy.Rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _theta(text: str) -> sympy.Expr:
    return THETA if text == "theta" else _rational(text)


def _model_options() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--case",
        choices=[case.value for case in chmodel.CHCase],
        default=chmodel.CHCase.GENERIC.value,
        help="a built-in Cahn-Hilliard case (default: ch-generic).",
    )
    source.add_argument("--model", type=Path, help="a model file to read the pde from.")
    return parser


def _format_options(*choices: str) -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument("--format", choices=choices, default="text")
    return parser


def _point_options() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    default = numlab.REFERENCE_POINT
    parser.add_argument("--x", type=_rational, default=default.x)
    parser.add_argument("--t", type=_rational, default=default.t)
    parser.add_argument("--eps", type=_rational, default=default.eps)
    parser.add_argument("--q", type=_rational, default=default.q)
    parser.add_argument("--a", type=_rational, default=default.a, help="wave speed of ch-inv-u.")
    parser.add_argument("--order", type=int, help="truncate the solution to this order.")
    parser.add_argument(
        "--corrected",
        dest="as_printed",
        action="store_false",
        help="use the hierarchy-consistent coefficients instead of the displayed solution.",
    )
    return parser


def _range_options() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument("--theta-min", type=_rational, default=numlab.DEFAULT_THETA_MIN)
    parser.add_argument("--theta-max", type=_rational, default=numlab.DEFAULT_THETA_MAX)
    parser.add_argument("--step", type=_rational, default=numlab.DEFAULT_STEP)
    return parser


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="ahsm",
        description="Series hierarchies of perturbed pdes and the map between them.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")
    add_wandb_options(parser)

    commands = parser.add_subparsers(dest="command", required=True)
    model = _model_options()
    point = _point_options()
    theta_range = _range_options()

    p = commands.add_parser(
        "hierarchy",
        parents=[model, _format_options("text", "json", "latex")],
        help="generate a hierarchy.",
    )
    p.add_argument(
        "--kind",
        choices=[kind.value for kind in seriesgen.HierarchyKind],
        default=seriesgen.HierarchyKind.AHSM_REARRANGED.value,
    )
    p.add_argument("--order", type=int, default=3)
    p.add_argument(
        "--paper-form",
        dest="derivative_form",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="print the i-th derivative (default) rather than the i-th coefficient.",
    )
    p.set_defaults(handler=_hierarchy)

    p = commands.add_parser(
        "verify",
        parents=[model, _format_options("text", "json", "latex")],
        help="check an identity order by order.",
    )
    p.add_argument("check", choices=VERIFY_CHECKS)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--as-printed", action="store_true")
    p.set_defaults(handler=_verify)

    p = commands.add_parser(
        "transform",
        parents=[model, _format_options("text", "json", "latex")],
        help="carry a built-in ASM solution to a homotopy solution.",
    )
    p.add_argument("--theta", type=_theta, default=THETA)
    p.add_argument(
        "--inverse",
        action="store_true",
        help="map the homotopy solution back and print the recovered ASM coefficients.",
    )
    p.add_argument("--as-printed", action="store_true")
    p.set_defaults(handler=_transform)

    p = commands.add_parser(
        "residual",
        parents=[model, point, _format_options("text", "json")],
        help="exact residual of a series solution at a point.",
    )
    p.add_argument("--theta", type=_rational, help="required for the homotopy series.")
    p.add_argument("--series", choices=["homotopy", "asm"], default="homotopy")
    p.set_defaults(handler=_residual)

    p = commands.add_parser(
        "sweep",
        parents=[model, point, theta_range],
        help="residuals over a grid of theta, as CSV.",
    )
    p.add_argument("--out", type=Path, help="CSV file to write (default: stdout).")
    p.add_argument("--svg", type=Path, help="also write a chart of |residual|.")
    p.set_defaults(handler=_sweep)

    p = commands.add_parser(
        "optimize",
        parents=[model, point, theta_range, _format_options("text", "json")],
        help="theta minimizing |residual|.",
    )
    p.add_argument("--width", type=_rational, default=numlab.DEFAULT_WIDTH)
    p.set_defaults(handler=_optimize)

    p = commands.add_parser(
        "operator-check",
        parents=[_format_options("text", "json")],
        help="compare the two scaling generators through the alternate map.",
    )
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--theta", type=_theta, default=THETA)
    p.set_defaults(handler=_operator_check)

    p = commands.add_parser(
        "scan-a",
        parents=[point, _format_options("text", "json")],
        help="ch-inv-u residual over a range of wave speeds.",
    )
    reported = numlab.REPORTED[chmodel.CHCase.INV_U]
    p.add_argument("--theta", type=_rational, default=reported.theta)
    p.add_argument("--target", type=float, default=reported.abs_residual)
    p.add_argument(
        "--a-values",
        type=_rational,
        nargs="+",
        help="wave speeds to scan (default: -5 to 5 in steps of 1/2, without 0).",
    )
    p.set_defaults(handler=_scan_a)

    return parser


####################
#     COMMANDS     #
####################


def _pde(opts) -> seriesgen.PerturbedPDE:
    if opts.model is not None:
        return load_model(opts.model)
    return chmodel.ch_pde(chmodel.CHCase(opts.case))


def _case(opts) -> chmodel.CHCase:
    if opts.model is not None:
        raise ValueError(f"{opts.command} needs a built-in case, not a model file")
    return chmodel.CHCase(opts.case)


def _point(opts) -> numlab.EvalPoint:
    return numlab.EvalPoint(opts.x, opts.t, opts.eps, opts.q, opts.a)


def _hierarchy(opts) -> int:
    pde = _pde(opts)
    kind = seriesgen.HierarchyKind(opts.kind)
    derivative_form = opts.derivative_form
    if kind is seriesgen.HierarchyKind.ASM:
        h = seriesgen.generate_asm(pde, opts.order, derivative_form)
    elif kind is seriesgen.HierarchyKind.AHSM_RAW:
        h = seriesgen.generate_ahsm_raw(pde, opts.order, derivative_form)
    else:
        h = seriesgen.generate_ahsm(pde, opts.order, derivative_form)

    if opts.format == "json":
        print(h.to_json())
    elif opts.format == "latex":
        print(h.to_latex())
    else:
        print_title(f"{kind.value} hierarchy of {pde.name} to order {opts.order}")
        print(h.to_text())
    return EXIT_OK


def _run_check(opts) -> VerificationReport:
    check = opts.check
    if check == "solutions":
        return chmodel.verify_builtin_solutions(_case(opts), opts.as_printed)
    if check == "golden-ch":
        return chmodel.ch_hierarchy_golden_check(min(opts.order, 3))

    pde = _pde(opts)
    if check == "lemma1":
        return seriesgen.verify_linearity(pde, opts.order)
    if check == "lemma2":
        return bridge.verify_lemma2_upto(pde, opts.order)
    if check == "rearrange":
        return seriesgen.verify_rearrangement(pde, opts.order)
    if check == "theorem1":
        return bridge.verify_theorem1(pde, opts.order)
    return fdb.verify_oracle(pde, opts.order)


def _verify(opts) -> int:
    report = _run_check(opts)
    if opts.format == "json":
        print(json.dumps(report.to_json(), indent=2))
    elif opts.format == "latex":
        for order in report.orders:
            print(f"\\text{{order {order.order}}} &: \\text{{{order.status}}} \\\\")
            if not order.passed:
                print(f"&\\quad {order.residual.to_latex()} \\neq 0 \\\\")
    else:
        print_title(f"verify {opts.check}")
        print(report.to_text())

    if opts.mode != "disabled":
        from .wandb import log_verification

        log_verification(report)
    return EXIT_OK if report.passed else EXIT_FAILED


def _transform(opts) -> int:
    case = _case(opts)
    solution = chmodel.homotopy_solution(case, opts.theta, opts.as_printed)
    if opts.inverse:
        m = bridge.build_map(bridge.MapKind.THEOREM1, solution.order, opts.theta)
        solution = bridge.apply_inverse_to_solution(m, solution)

    family = "u" if solution.flavor is Flavor.HOMOTOPY else "utilde"
    assembled = solution.assemble()
    if opts.format == "json":
        document = {
            "flavor": solution.flavor.value,
            "coefficients": solution.to_text(),
            "assembled": to_text(assembled),
        }
        print(json.dumps(document, indent=2))
    elif opts.format == "latex":
        for l, c in enumerate(solution.to_latex()):
            print(f"{family}_{{{l}}} &= {c} \\\\")
        print(f"u &= {to_latex(assembled)}")
    else:
        print_title(f"{solution.flavor.value} solution of {case.value}")
        for l, c in enumerate(solution.to_text()):
            print(f"{family}{l} = {c}")
    return EXIT_OK


def _residual(opts) -> int:
    case = _case(opts)
    point = _point(opts)
    if opts.theta is not None:
        point = point.with_theta(opts.theta)
    if opts.series == "asm":
        value = numlab.asm_residual(case, point, opts.order, opts.as_printed)
    else:
        value = numlab.residual(case, point, opts.order, opts.as_printed)

    if opts.format == "json":
        document = {
            "case": case.value,
            "series": opts.series,
            "theta": str(point.theta),
            "residual": str(value),
            "abs_residual": f"{float(abs(value)):.17g}",
        }
        print(json.dumps(document, indent=2))
    else:
        print(f"residual = {value}")
        print(f"|residual| = {float(abs(value)):.17g}")
    return EXIT_OK


def _sweep(opts) -> int:
    case = _case(opts)
    rows = numlab.sweep(
        case,
        _point(opts),
        opts.theta_min,
        opts.theta_max,
        opts.step,
        opts.order,
        opts.as_printed,
        progress=not opts.quiet,
    )
    text = numlab.sweep_to_csv(rows)
    if opts.out is None:
        sys.stdout.write(text)
    else:
        opts.out.write_text(text)
        log.info("wrote %d rows to %s", len(rows), opts.out)

    if opts.svg is not None:
        numlab.plot_sweep(rows, opts.svg, title=case.value)

    if opts.mode != "disabled":
        from .wandb import log_sweep

        log_sweep(rows, case.value)
    return EXIT_OK


def _optimize(opts) -> int:
    case = _case(opts)
    result = numlab.optimize_theta(
        case,
        _point(opts),
        opts.theta_min,
        opts.theta_max,
        opts.step,
        opts.width,
        opts.order,
        opts.as_printed,
        progress=not opts.quiet,
    )
    if opts.format == "json":
        print(json.dumps(result.to_json(), indent=2))
    else:
        print_title(f"best theta for {case.value}")
        print(f"theta = {float(result.theta):.17g}")
        print(f"|residual| = {float(result.abs_residual):.17g}")
        print(f"grid points = {result.grid_size}, refinements = {result.iterations}")

    if opts.mode != "disabled":
        from .wandb import log_optimization

        log_optimization(result, case.value)
    return EXIT_OK


def _operator_check(opts) -> int:
    diagnostics = bridge.operator_diagnostic(opts.order, opts.theta)
    if opts.format == "json":
        print(json.dumps([d.to_json() for d in diagnostics], indent=2))
    else:
        print_title("operator check")
        for d in diagnostics:
            print(f"order {d.order}: forward = {d.forward}, swapped = {d.swapped}")
    return EXIT_OK


def _scan_a(opts) -> int:
    scan = numlab.scan_wave_speed(
        _point(opts), opts.theta, opts.target, opts.a_values, opts.as_printed
    )
    best, fitted = scan.best, scan.fitted
    if opts.format == "json":
        document = {
            "theta": str(scan.theta),
            "target": opts.target,
            "rows": [row.to_json() for row in scan.rows],
            "best_a": None if best is None else str(best.a),
            "fitted_a": None if fitted is None else str(fitted.a),
        }
        print(json.dumps(document, indent=2))
    else:
        print_title(f"wave speed scan at theta = {float(scan.theta):.17g}")
        for row in scan.rows:
            if row.flagged:
                print(f"a = {row.a}: pole")
                continue
            roots = ", ".join(f"{float(root):.9f}" for root in row.roots) or "none"
            print(f"a = {row.a}: |residual| = {float(row.abs_residual):.17g}, roots = {roots}")
        if best is not None:
            print(f"closest to {opts.target:g}: a = {best.a}")
        if fitted is not None:
            root = fitted.nearest_root(scan.theta)
            print(f"root closest to theta: a = {fitted.a}, theta = {float(root):.9f}")
    return EXIT_OK


#################
#     ENTRY     #
#################


@contextlib.contextmanager
def _wandb_run(opts) -> Iterator[None]:
    if opts.mode == "disabled":
        yield
        return

    # pyre-ignore[21]
    import wandb

    wandb.init(project="ahsm", mode=opts.mode, config={"command": opts.command})
    try:
        yield
    finally:
        wandb.finish()


def run(argv: Sequence[str] | None = None) -> int:
    """
    Run the ``ahsm`` command and return its exit code: 0 on success, 1 when a
    verification fails, 2 on bad usage, unreadable input or invalid values.
    """
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if opts.verbose:
        level = logging.DEBUG
    elif opts.quiet:
        level = logging.ERROR
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        with _wandb_run(opts):
            return opts.handler(opts)
    except (ParseError, ModelFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, ZeroDivisionError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
