"""
sweep_theta.py: sweep and optimize theta for the fixed Cahn-Hilliard cases.

    python3 sweep_theta.py [--wandb | -D | --disable-wandb] [CASE ...]

For each case (default: every file in theta_sweep_params/), the residual of
the homotopy solution is evaluated over the theta grid of the case's config,
then theta is refined around the best grid point. The grid is saved as CSV
and SVG to results/theta-sweeps/.
"""

import argparse
import datetime
import pathlib
import sys

# pyre-ignore[21]:
import wandb
from ahsm import CHCase, EvalPoint, load_experiment_config, optimize_theta, sweep
from ahsm.cli import add_wandb_options, print_title
from ahsm.numlab import plot_sweep, sweep_to_csv
from ahsm.wandb import log_optimization, log_sweep

#######################
#        PATHS        #
#######################

SCRIPT_DIR: pathlib.Path = pathlib.Path(__file__).parent.resolve()
PROJECT_DIR: pathlib.Path = SCRIPT_DIR.parent.parent.resolve()
PARAMS_DIR: pathlib.Path = SCRIPT_DIR / "theta_sweep_params"
RESULTS_DIR: pathlib.Path = PROJECT_DIR / "results" / "theta-sweeps"

current_date_time: str = datetime.datetime.now().strftime("%Y-%m-%d %H:%M")


def main() -> int:
    parser = add_wandb_options(argparse.ArgumentParser(description=__doc__))
    parser.add_argument("cases", nargs="*", help="config names to run.")
    opts = parser.parse_args()

    names = opts.cases or sorted(p.stem for p in PARAMS_DIR.glob("*.toml"))
    RESULTS_DIR.mkdir(parents=True, exist_ok=True)

    for name in names:
        config = load_experiment_config(PARAMS_DIR, name)
        wandb.init(
            project="ahsm",
            group=f"theta sweep {current_date_time}",
            config=config,
            name=name,
            mode=opts.mode,
        )
        do_run(config)
        wandb.finish()

    return 0


def do_run(config) -> None:
    case = CHCase(config["case"])
    point = EvalPoint.from_mapping(config["point"])
    grid = config["theta"]

    rows = sweep(case, point, grid["min"], grid["max"], grid["step"], progress=True)
    (RESULTS_DIR / f"{case.value}.csv").write_text(sweep_to_csv(rows))
    plot_sweep(rows, RESULTS_DIR / f"{case.value}.svg", title=case.value)

    result = optimize_theta(
        case,
        point,
        grid["min"],
        grid["max"],
        grid["step"],
        grid["width"],
    )

    print_title(case.value)
    print(f"best theta = {float(result.theta):.6g}")
    print(f"|residual| = {float(result.abs_residual):.6g}")
    print(f"reported: theta = {config['reported']['theta']}, |residual| = {config['reported']['abs_residual']:g}")

    log_sweep(rows)
    log_optimization(result)


if __name__ == "__main__":
    sys.exit(main())
