"""
Γ Frontier Command

Writes the frontier (a, b) table, per-candidate membership verdicts with witnesses,
and the residuals of rebuilding the curve from the frontier.
"""

import logging

import pandas as pd

from enorm.commands.common import output_paths, resolve_pair, stopwatch
from enorm.models import GammaConfig, ResultRecord
from enorm.services.envelope import (
    GammaPoint,
    enorm_from_gamma,
    frontier_residuals,
    gamma_frontier,
    gamma_membership,
    tangent_point,
)
from enorm.services.solver import enorm_curve
from enorm.services.storage import write_record, write_table

logger = logging.getLogger(__name__)


def cmd_gamma(config: GammaConfig) -> ResultRecord:
    with stopwatch() as elapsed:
        curve = enorm_curve(resolve_pair(config), config.grid)
        frontier = gamma_frontier(curve)
        residuals = frontier_residuals(frontier)

        verdicts = []
        for a, b in config.candidates:
            result = gamma_membership(curve, GammaPoint(a=a, b=b))
            verdicts.append(
                {
                    "a": a,
                    "b": b,
                    "verdict": result.verdict.value,
                    "witness_E": result.witness_energy,
                    "excess": result.excess,
                }
            )
            logger.info("candidate (%s, %s): %s", a, b, result.verdict.value)

        curve_rows = [
            {
                "E": p.E,
                "value": p.value,
                "gap": p.gap,
                "rebuilt": enorm_from_gamma(frontier, p.E),
                "residual": float(r),
                "tangent_a": tangent_point(p).a,
                "tangent_b": tangent_point(p).b,
            }
            for p, r in zip(curve.points, residuals, strict=True)
        ]
        record = ResultRecord(
            command="gamma",
            config=config.model_dump(),
            points=curve_rows,
            summary={
                "frontier": [{"a": p.a, "b": p.b} for p in frontier.points],
                "memberships": verdicts,
                "max_residual": float(residuals.max()),
            },
            wall_time=elapsed(),
        )
    json_path, csv_path = output_paths(config.out)
    write_table(csv_path, pd.DataFrame([{"a": p.a, "b": p.b} for p in frontier.points]))
    write_table(csv_path.with_name(csv_path.stem + "_residuals.csv"), pd.DataFrame(curve_rows))
    write_record(json_path, record)
    return record
