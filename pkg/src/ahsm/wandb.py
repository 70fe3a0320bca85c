"""
Utilities to log sweeps, optimizer runs and verification outcomes to Weights
and Biases.
"""

from collections.abc import Sequence
from typing import Optional

# pyre-ignore[21]
import wandb

from ._reports import VerificationReport
from .numlab import OptResult, SweepRow


def _prefix(prefix: Optional[str]) -> str:
    return f"{prefix}-" if prefix is not None else ""


def log_sweep(rows: Sequence[SweepRow], prefix: Optional[str] = None) -> None:
    """
    Log each evaluated row of a theta sweep as one step of the current run,
    and the number of rows that could not be evaluated as run config.
    """
    prefix = _prefix(prefix)
    for row in rows:
        if row.flagged:
            continue
        wandb.log(
            {
                f"{prefix}theta": float(row.theta),
                f"{prefix}abs_residual": float(row.abs_residual),
            }
        )

    wandb.config.update(
        {
            f"{prefix}rows": len(rows),
            f"{prefix}flagged_rows": sum(row.flagged for row in rows),
        }
    )


def log_optimization(result: OptResult, prefix: Optional[str] = None) -> None:
    prefix = _prefix(prefix)
    wandb.config.update(
        {
            f"{prefix}best_theta": float(result.theta),
            f"{prefix}best_abs_residual": float(result.abs_residual),
            f"{prefix}grid_size": result.grid_size,
            f"{prefix}refinements": result.iterations,
        }
    )


def log_verification(report: VerificationReport, prefix: Optional[str] = None) -> None:
    """
    Log the outcome of a verification: overall status and the orders that
    failed, if any.
    """
    prefix = _prefix(prefix)
    failed = [r.order for r in report.orders if not r.passed]
    wandb.config.update(
        {
            f"{prefix}{report.name}-passed": report.passed,
            f"{prefix}{report.name}-failed_orders": failed,
        }
    )
