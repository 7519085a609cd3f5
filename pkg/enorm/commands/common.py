"""Helpers shared by the command modules: operator sources, output paths and timing."""

import logging
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from enorm.models import OperatorConfig
from enorm.services.oscillator import FockTruncation, Operator
from enorm.services.solver import OperatorPair
from enorm.services.storage import load_operator_pair

logger = logging.getLogger(__name__)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(np.complex128)


def resolve_pair(config: OperatorConfig) -> OperatorPair:
    """Builtin oscillator operator (energy N) or the pair stored in ``--matrix-file``."""
    if config.matrix_file is not None:
        return load_operator_pair(config.matrix_file)
    if config.operator == "identity":
        return OperatorPair(np.eye(config.dim, dtype=np.complex128), number_operator(config.dim))
    return FockTruncation(config.dim, config.omega).operator_pair(Operator(config.operator))


def builtin_columns(config: OperatorConfig) -> dict[str, object]:
    """Constant columns tagging rows of builtin oscillator runs."""
    if config.operator in (Operator.Q.value, Operator.P.value, Operator.N.value):
        return {"operator": config.operator, "omega": config.omega}
    return {}


def output_paths(out: str) -> tuple[Path, Path]:
    """(JSON record path, CSV table path) for an output prefix."""
    base = Path(out)
    if base.suffix in (".json", ".csv"):
        base = base.with_suffix("")
    return base.with_suffix(".json"), base.with_suffix(".csv")


@contextmanager
def stopwatch():
    """Yields a callable returning the seconds elapsed since entry."""
    start = time.perf_counter()
    yield lambda: round(time.perf_counter() - start, 6)
