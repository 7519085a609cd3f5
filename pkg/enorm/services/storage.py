"""
Storage Service

Reads and writes the command-line file formats:
- Matrix files: JSON ``{"dim": d, "entries": [[re, im], ...]}`` in row-major order
- Operator pair files: JSON ``{"A": matrix, "G": matrix}``
- Kraus files: JSON list of matrices
- Results: pretty-printed JSON records and CSV tables at full double precision
"""

import json
import logging
import re
from pathlib import Path, PurePosixPath, PureWindowsPath
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd

from enorm.errors import ConfigError, ValidationError
from enorm.models import ResultRecord
from enorm.services.channel import KrausMap
from enorm.services.solver import OperatorPair

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def sanitize_stem(name: str) -> str:
    """
    Reduce ``name`` to a safe file stem.

    - Drops any directory components and null bytes
    - Keeps letters, digits, dash, underscore and dot
    - Falls back to ``"result"`` when nothing is left
    """
    name = name.replace("\x00", "")
    name = PurePosixPath(PureWindowsPath(name).name).name
    name = name.replace("..", "")
    name = re.sub(r"[^A-Za-z0-9_.\-]", "_", name).strip(". ")
    return name[:200] or "result"


# ---------------------------------------------------------------------------
# Matrix codec
# ---------------------------------------------------------------------------


def decode_matrix(payload: Any) -> npt.NDArray[np.complex128]:
    """Matrix from ``{"dim": d, "entries": [[re, im], ...]}``."""
    if not isinstance(payload, dict) or "dim" not in payload or "entries" not in payload:
        raise ConfigError("matrix must be an object with 'dim' and 'entries'")
    dim = payload["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(f"matrix dim must be a positive integer, got {dim!r}")
    try:
        entries = np.asarray(payload["entries"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"matrix entries must be [re, im] number pairs: {exc}") from exc
    if entries.shape != (dim * dim, 2):
        raise ConfigError(f"matrix of dim {dim} needs {dim * dim} [re, im] pairs, got shape {entries.shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(dim, dim)


def encode_matrix(matrix: npt.ArrayLike) -> dict[str, Any]:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"only square matrices are encoded, got shape {m.shape}")
    flat = m.reshape(-1)
    return {"dim": int(m.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def _read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def load_operator_pair(path: str | Path) -> OperatorPair:
    payload = _read_json(path)
    if not isinstance(payload, dict) or not {"A", "G"} <= payload.keys():
        raise ConfigError(f"{path} must hold an object with keys 'A' and 'G'")
    pair = OperatorPair(decode_matrix(payload["A"]), decode_matrix(payload["G"]))
    logger.info("Loaded operator pair of dim %d from %s", pair.dim, path)
    return pair


def save_operator_pair(path: str | Path, A: npt.ArrayLike, G: npt.ArrayLike) -> Path:
    target = Path(path)
    target.write_text(json.dumps({"A": encode_matrix(A), "G": encode_matrix(G)}), encoding="utf-8")
    return target


def load_kraus_map(path: str | Path) -> KrausMap:
    payload = _read_json(path)
    if not isinstance(payload, list) or not payload:
        raise ConfigError(f"{path} must hold a non-empty JSON list of matrices")
    channel = KrausMap(tuple(decode_matrix(item) for item in payload))
    logger.info("Loaded %d Kraus operators of dim %d from %s", len(payload), channel.dim, path)
    return channel


def save_kraus_map(path: str | Path, kraus_ops: list[npt.ArrayLike]) -> Path:
    target = Path(path)
    target.write_text(json.dumps([encode_matrix(k) for k in kraus_ops]), encoding="utf-8")
    return target


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


def write_record(path: str | Path, record: ResultRecord) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(record.model_dump_json(indent=2), encoding="utf-8")
    logger.info("Wrote %s", target)
    return target


def write_table(path: str | Path, frame: pd.DataFrame) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info("Wrote %s (%d rows)", target, len(frame))
    return target


def read_table(path: str | Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError as exc:
        raise ConfigError(f"file not found: {path}") from exc
    except pd.errors.EmptyDataError:
        return pd.DataFrame()
    except pd.errors.ParserError as exc:
        raise ConfigError(f"{path} is not a valid CSV table: {exc}") from exc


def read_record(path: str | Path) -> ResultRecord:
    return ResultRecord.model_validate(_read_json(path))
