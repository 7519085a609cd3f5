"""
Exception hierarchy.

Every error carries the exit code the command-line front end returns for it:
0 success, 2 config error, 3 verification mismatch, 4 convergence failure,
5 invariant violation in inputs.
"""

from typing import Any


class EnormError(Exception):
    exit_code = 1


class ConfigError(EnormError):
    exit_code = 2


class ValidationError(EnormError):
    """An input violates a structural invariant (Hermiticity, PSD, trace, Kraus sum)."""

    exit_code = 5


class InfeasibleEnergyError(ConfigError):
    def __init__(self, energy: float, ground_energy: float):
        super().__init__(
            f"energy E={energy!r} is not above the ground energy λ_min(G)={ground_energy!r}; "
            "the feasible set has empty interior"
        )
        self.energy = energy
        self.ground_energy = ground_energy


class PreconditionError(ConfigError):
    pass


class ResourceGuardError(ConfigError):
    pass


class PlotInputError(ConfigError):
    pass


class CurveInvariantError(ValidationError):
    pass


class SamplingError(ValidationError):
    pass


class CurvePointError(EnormError):
    """A per-point failure inside a curve evaluation, tagged with the offending energy."""

    def __init__(self, energy: float, cause: Exception):
        super().__init__(f"failed at E={energy!r}: {cause}")
        self.energy = energy
        self.exit_code = getattr(cause, "exit_code", EnormError.exit_code)


class VerificationMismatchError(EnormError):
    exit_code = 3


class ConvergenceError(EnormError):
    """Truncation ladder exceeded its dimension cap before meeting the tolerance."""

    exit_code = 4

    def __init__(self, message: str, partial: list[dict[str, Any]] | None = None):
        super().__init__(message)
        self.partial = partial or []


class DivergentBoundError(ConvergenceError):
    """The value/√E ratio grows along the ladder; extrapolation is refused."""

    def __init__(self, message: str, ratios: list[float], partial: list[dict[str, Any]] | None = None):
        super().__init__(message, partial)
        self.ratios = ratios
