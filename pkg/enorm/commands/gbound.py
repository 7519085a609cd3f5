"""
√G-bound Command

Builtin oscillator operators run the truncation ladder and extrapolate the ratio
‖A‖_E/√E; matrix inputs (and the identity builtin) fall back to the infimum over the
grid at fixed truncation, which is reported with its warning.
"""

import dataclasses
import logging

import pandas as pd

from enorm.commands.common import output_paths, resolve_pair, stopwatch
from enorm.errors import ConvergenceError, DivergentBoundError
from enorm.models import GboundConfig, ResultRecord
from enorm.services.envelope import BoundEstimate, classify_bound, gbound_fixed
from enorm.services.oscillator import LONG_SCHEDULE, Operator, bound_from_ladder, closed_form_bound, run_ladder
from enorm.services.solver import enorm_curve
from enorm.services.storage import write_record, write_table

logger = logging.getLogger(__name__)


def _summary(estimate: BoundEstimate) -> dict:
    return {
        "b": estimate.value,
        "method": estimate.method.value,
        "uncertainty": estimate.uncertainty,
        "classification": classify_bound(estimate).value,
        "classification_is_heuristic": True,
    }


def _write_partial(config: GboundConfig, exc: ConvergenceError) -> None:
    summary: dict = {"error": str(exc)}
    if isinstance(exc, DivergentBoundError):
        summary["ratios"] = exc.ratios
    record = ResultRecord(command="gbound", config=config.model_dump(), points=exc.partial, summary=summary)
    json_path, _ = output_paths(config.out)
    write_record(json_path, record)


def _energies(config: GboundConfig) -> list[float]:
    return list(LONG_SCHEDULE) if config.schedule == "long" else config.grid


def cmd_gbound(config: GboundConfig) -> ResultRecord:
    with stopwatch() as elapsed:
        warnings: list[str] = []
        if config.operator in (Operator.Q.value, Operator.P.value, Operator.N.value):
            try:
                ladder = run_ladder(config.operator, config.omega, _energies(config), config.tol, config.dmax)
                estimate = bound_from_ladder(ladder)
            except ConvergenceError as exc:
                _write_partial(config, exc)
                raise
            by_energy = {c.E: c for c in ladder.converged}
            rows = [
                {
                    "E": e,
                    "ratio": r,
                    "value": by_energy[e].value,
                    "gap": by_energy[e].gap,
                    "d_used": by_energy[e].d_used,
                }
                for e, r in estimate.sequence
            ]
            summary = _summary(estimate)
            summary["dims"] = list(ladder.dims)
            summary["records"] = [dataclasses.asdict(r) for r in ladder.records]
            if config.operator != Operator.N.value:
                summary["closed_form"] = closed_form_bound(config.operator, config.omega)
        else:
            curve = enorm_curve(resolve_pair(config), _energies(config))
            estimate = gbound_fixed(curve)
            rows = [
                {"E": e, "ratio": r, "value": p.value, "gap": p.gap}
                for (e, r), p in zip(estimate.sequence, curve.points, strict=True)
            ]
            summary = _summary(estimate)
            if estimate.warning:
                warnings.append(estimate.warning)

        record = ResultRecord(
            command="gbound",
            config=config.model_dump(),
            points=rows,
            summary=summary,
            warnings=warnings,
            wall_time=elapsed(),
        )
    json_path, csv_path = output_paths(config.out)
    write_table(csv_path, pd.DataFrame(rows))
    write_record(json_path, record)
    logger.info("b = %.6g ± %.2g (%s)", estimate.value, estimate.uncertainty, estimate.method.value)
    return record
