"""
E-norm Commands

``enorm`` evaluates ‖A‖_E^G on a grid, optionally cross-checked against the
brute-force oracle; ``curve`` additionally audits the curve invariants and the
norm-equivalence chain across all grid pairs.
"""

import logging

import numpy as np
import pandas as pd

from enorm.commands.common import builtin_columns, output_paths, resolve_pair, stopwatch
from enorm.errors import CurveInvariantError, VerificationMismatchError
from enorm.models import EnormConfig, ResultRecord
from enorm.services.oscillator import Operator, energy_bracket
from enorm.services.solver import ENormCurve, chain_violations, enorm_curve, enorm_oracle
from enorm.services.storage import write_record, write_table

logger = logging.getLogger(__name__)

VERIFY_TOLERANCE = 1e-5


def _rows(curve: ENormCurve, config: EnormConfig) -> list[dict]:
    tags = builtin_columns(config)
    rows = []
    for point in curve.points:
        row = {"E": point.E, "value": point.value, "mu_star": point.mu_star, "gap": point.gap, **tags}
        if config.operator in (Operator.Q.value, Operator.P.value):
            row["bracket_lower"], row["bracket_upper"] = energy_bracket(config.operator, config.omega, point.E)
        rows.append(row)
    return rows


def _verify(curve: ENormCurve, rows: list[dict], config: EnormConfig) -> list[float]:
    """Attach oracle brackets to ``rows``; returns the energies where the dual value falls outside."""
    mismatches = []
    seeds = np.random.SeedSequence(config.seed).spawn(len(curve.points))
    for point, row, seed in zip(curve.points, rows, seeds, strict=True):
        lower, upper = enorm_oracle(curve.pair, point.E, config.budget, seed)
        row["oracle_lower"], row["oracle_upper"] = lower, upper
        if point.value < lower - VERIFY_TOLERANCE or point.value > upper + VERIFY_TOLERANCE:
            logger.error(
                "verification mismatch at E=%s: dual %s, oracle [%s, %s]", point.E, point.value, lower, upper
            )
            mismatches.append(point.E)
    return mismatches


def _run(config: EnormConfig, command: str, audit_chain: bool) -> ResultRecord:
    with stopwatch() as elapsed:
        pair = resolve_pair(config)
        logger.info("Operator pair: dim=%d, λ_min(G)=%s", pair.dim, pair.lambda_min)
        curve = enorm_curve(pair, config.grid)
        rows = _rows(curve, config)
        mismatches = _verify(curve, rows, config) if config.verify else []

        summary: dict = {"points": len(rows), "max_gap": max(r["gap"] for r in rows)}
        broken: list[tuple[float, float]] = []
        if audit_chain:
            broken = chain_violations(curve)
            summary["curve_violations"] = curve.violations()
            summary["chain_violations"] = [list(p) for p in broken]
        if config.verify:
            summary["verification_mismatches"] = mismatches

        record = ResultRecord(
            command=command,
            config=config.model_dump(),
            points=rows,
            summary=summary,
            wall_time=elapsed(),
        )
    json_path, csv_path = output_paths(config.out)
    write_table(csv_path, pd.DataFrame(rows))
    write_record(json_path, record)

    if mismatches:
        raise VerificationMismatchError(
            f"dual values outside the oracle bracket (±{VERIFY_TOLERANCE}) at E={mismatches}"
        )
    if broken:
        raise CurveInvariantError(f"norm-equivalence chain broken for energy pairs {broken}")
    return record


def cmd_enorm(config: EnormConfig) -> ResultRecord:
    return _run(config, "enorm", audit_chain=False)


def cmd_curve(config: EnormConfig) -> ResultRecord:
    return _run(config, "curve", audit_chain=True)
