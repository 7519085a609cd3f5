import math
from typing import Any, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from enorm import __version__

_BUILTIN_OPERATORS = frozenset({"q", "p", "N", "identity"})
_CHANNELS = frozenset({"identity", "ground_collapse", "pure_loss", "random"})


def _check_grid(values: list[float]) -> list[float]:
    if not values:
        raise ValueError("grid must contain at least one energy")
    if not all(math.isfinite(v) for v in values):
        raise ValueError("grid energies must be finite")
    if any(v <= 0 for v in values):
        raise ValueError("grid energies must be > 0")
    if any(b <= a for a, b in zip(values, values[1:], strict=False)):
        raise ValueError("grid must be strictly increasing")
    return values


class ExperimentConfig(BaseModel):
    """Parameters shared by every command."""

    seed: int = Field(0, ge=0)
    tol: float = Field(1e-4, gt=0, allow_inf_nan=False)
    out: str = Field("enorm_result", min_length=1, max_length=1024)


class OperatorConfig(ExperimentConfig):
    operator: str | None = Field(None, description="Builtin operator: q, p, N or identity")
    omega: float = Field(1.0, gt=0, allow_inf_nan=False)
    dim: int = Field(64, ge=2, le=4096)
    matrix_file: str | None = Field(None, max_length=1024)
    grid: list[float] = Field(default_factory=lambda: [1.0])

    @field_validator("operator")
    @classmethod
    def validate_operator(cls, value: str | None) -> str | None:
        if value is not None and value not in _BUILTIN_OPERATORS:
            allowed = ", ".join(sorted(_BUILTIN_OPERATORS))
            raise ValueError(f"operator invalid. Allowed: {allowed}")
        return value

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, value: list[float]) -> list[float]:
        return _check_grid(value)

    @model_validator(mode="after")
    def validate_source(self) -> "OperatorConfig":
        if (self.operator is None) == (self.matrix_file is None):
            raise ValueError("exactly one of --operator and --matrix-file is required")
        return self


class EnormConfig(OperatorConfig):
    verify: bool = False
    budget: int = Field(10_000, ge=0, le=10_000_000)


class GboundConfig(OperatorConfig):
    dmax: int = Field(2048, ge=16, le=8192)
    grid: list[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    schedule: Literal["default", "long"] = "default"

    @model_validator(mode="after")
    def validate_schedule(self) -> "GboundConfig":
        if self.schedule == "long" and "grid" in self.model_fields_set:
            raise ValueError("--schedule long replaces the grid; drop --grid")
        return self


class GammaConfig(OperatorConfig):
    candidates: list[tuple[float, float]] = Field(default_factory=list)

    @field_validator("candidates")
    @classmethod
    def validate_candidates(cls, value: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for a, b in value:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"candidate ({a}, {b}) must be finite")
            if a < 0 or b < 0:
                raise ValueError(f"candidate ({a}, {b}) must have nonnegative coordinates")
        return value


class ChannelConfig(ExperimentConfig):
    channel: str | None = Field("identity")
    kraus_file: str | None = Field(None, max_length=1024)
    dim: int = Field(4, ge=1, le=4096)
    eta: float = Field(0.5, ge=0, le=1, allow_inf_nan=False)
    grid: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])

    @field_validator("channel")
    @classmethod
    def validate_channel(cls, value: str | None) -> str | None:
        if value is not None and value not in _CHANNELS:
            allowed = ", ".join(sorted(_CHANNELS))
            raise ValueError(f"channel invalid. Allowed: {allowed}")
        return value

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, value: list[float]) -> list[float]:
        return _check_grid(value)


class ExtensionConfig(ExperimentConfig):
    dim: int = Field(4, ge=2, le=64)
    pairs: int = Field(10, ge=1, le=1000)
    samples: int = Field(1000, ge=1, le=1_000_000)
    eps: list[float] = Field(default_factory=lambda: [0.05, 0.1, 0.25, 0.5])
    k_dim: list[int] = Field(default_factory=lambda: [1, 2, 3])
    grid: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, value: list[float]) -> list[float]:
        if not value or any(not math.isfinite(e) or e <= 0 for e in value):
            raise ValueError("eps values must be finite and > 0")
        return value

    @field_validator("k_dim")
    @classmethod
    def validate_k_dim(cls, value: list[int]) -> list[int]:
        if not value or any(k < 1 for k in value):
            raise ValueError("k_dim values must be >= 1")
        return value

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, value: list[float]) -> list[float]:
        return _check_grid(value)


class PlotConfig(BaseModel):
    inputs: list[str] = Field(..., min_length=1)
    out: str = Field("plots", min_length=1, max_length=1024)


class ResultRecord(BaseModel):
    """Machine-readable outcome of one command; every value row carries its certificate."""

    command: str
    config: dict[str, Any]
    points: list[dict[str, Any]] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__
