"""
Configuration

Numeric tolerances are centralized in a single frozen ``NumericPolicy`` record so
tests can tighten or loosen them uniformly. Runtime settings (thread caps, log
level) are read from environment variables.
"""

import os
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# Environment contract helpers
# ---------------------------------------------------------------------------


def read_env(name: str, default: str) -> str:
    """Read an optional environment variable, falling back to ``default`` when unset or blank."""
    value = os.environ.get(name, "").strip()
    return value or default


def parse_positive_int_env(name: str, default: int) -> int:
    """Parse an optional positive int environment variable."""
    raw = read_env(name, str(default))
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got '{raw}'") from exc
    if value < 1:
        raise ValueError(f"{name} must be >= 1")
    return value


def parse_log_level(raw_value: str) -> str:
    """Validate a logging level name."""
    normalized = raw_value.strip().upper()
    allowed = ("DEBUG", "INFO", "WARNING", "ERROR")
    if normalized not in allowed:
        raise ValueError(f"ENORM_LOG_LEVEL invalid value '{raw_value}'. Allowed: {', '.join(allowed)}")
    return normalized


def _default_threads() -> int:
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class RuntimeSettings:
    """Runtime settings from environment variables."""

    threads: int = field(
        default_factory=lambda: parse_positive_int_env("ENORM_THREADS", _default_threads())
    )
    log_level: str = field(default_factory=lambda: parse_log_level(read_env("ENORM_LOG_LEVEL", "INFO")))


# ---------------------------------------------------------------------------
# Numeric policy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and iteration limits shared by every numerical operation."""

    # matrix validation
    hermitian_tol: float = 1e-12
    norm_tol: float = 1e-12
    density_eig_tol: float = 1e-10
    density_trace_tol: float = 1e-10
    psd_tol: float = 1e-10

    # ground energy numerically zero
    ground_zero_tol: float = 1e-8
    infeasible_margin: float = 1e-12

    # eigensolver selection
    degeneracy_tol: float = 1e-8
    banded_min_dim: int = 64
    banded_max_ratio: float = 1 / 16

    # dual minimization
    golden_rel_width: float = 1e-12
    bracket_max_doublings: int = 200
    golden_max_iterations: int = 400
    witness_energy_rel_tol: float = 1e-8
    gap_rel_tol: float = 1e-7

    # oracle
    oracle_grid_points: int = 64
    oracle_refinements: int = 6
    oracle_mu_cap_factor: float = 4.0

    # primal pure-state ascent
    primal_random_starts: int = 8
    primal_mu_seeds: int = 16
    primal_ascent_iterations: int = 50
    primal_polish_starts: int = 32
    primal_slsqp_ftol: float = 1e-15
    primal_slsqp_maxiter: int = 500
    primal_max_dim: int = 4096

    # curve invariants
    monotone_slack: float = 1e-9
    concavity_slack: float = 1e-7
    chain_slack: float = 1e-9

    # envelope
    membership_slack: float = 1e-9

    # sampling
    projection_max_iterations: int = 100


DEFAULT_POLICY = NumericPolicy()
