"""
Harmonic Oscillator Truncations

Fock-basis matrices of the ladder, position, momentum and number operators, plus the
truncation ladder that drives E-norms and √N-bounds of the unbounded q and p to
their limits.
"""

import enum
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from enorm.config import DEFAULT_POLICY, NumericPolicy, RuntimeSettings
from enorm.errors import ConvergenceError, CurveInvariantError, DivergentBoundError, ValidationError
from enorm.services.envelope import BoundEstimate, BoundMethod, ratio_sequence
from enorm.services.linalg import ComplexMatrix, HermitianMatrix, as_hermitian
from enorm.services.solver import OperatorPair, enorm_dual

logger = logging.getLogger(__name__)


if hasattr(enum, "StrEnum"):
    _StrEnum = enum.StrEnum
else:  # Python 3.10: equivalent of enum.StrEnum (str() and format() give the value)

    class _StrEnum(str, enum.Enum):
        __str__ = str.__str__
        __format__ = str.__format__

DEFAULT_SCHEDULE = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)
# opt-in preset for the gbound command, about a minute per operator at the default tolerance
LONG_SCHEDULE = tuple(2.0**k for k in range(9))
DEFAULT_TOL = 1e-4
DEFAULT_DMAX = 2048
DEFAULT_DSTART = 16
FIT_POINTS = 4

# growth factor per doubling of d above which an unconverged rung counts as divergent
_DIVERGENCE_GROWTH = 1.2


class Operator(_StrEnum):
    Q = "q"
    P = "p"
    N = "N"


# ---------------------------------------------------------------------------
# Fock-basis operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LadderOps:
    a: ComplexMatrix
    a_dag: ComplexMatrix
    q: HermitianMatrix
    p: HermitianMatrix
    N: HermitianMatrix


@dataclass(frozen=True)
class FockTruncation:
    """The first ``d`` Fock levels of an oscillator with frequency ``omega``."""

    d: int
    omega: float = 1.0

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"Fock truncation needs d >= 2, got {self.d}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValidationError(f"omega must be a positive finite number, got {self.omega!r}")

    def ladder_ops(self) -> LadderOps:
        return build_ladder_ops(self)

    def operator(self, op: Operator | str) -> ComplexMatrix:
        return getattr(self.ladder_ops(), Operator(op).value)

    def operator_pair(self, op: Operator | str, policy: NumericPolicy = DEFAULT_POLICY) -> OperatorPair:
        ops = self.ladder_ops()
        return OperatorPair(getattr(ops, Operator(op).value), ops.N, policy)


def build_ladder_ops(truncation: FockTruncation) -> LadderOps:
    """a[n−1, n] = √n; q = (a + a†)/√(2ω); p = −i√(ω/2)(a − a†); N = diag(0, …, d−1)."""
    d, omega = truncation.d, truncation.omega
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(np.complex128)
    a_dag = np.ascontiguousarray(a.conj().T)
    q = (a + a_dag) / math.sqrt(2 * omega)
    p = -1j * math.sqrt(omega / 2) * (a - a_dag)
    number = np.diag(np.arange(d, dtype=float)).astype(np.complex128)
    for ladder in (a, a_dag):
        ladder.setflags(write=False)
    return LadderOps(a=a, a_dag=a_dag, q=as_hermitian(q), p=as_hermitian(p), N=as_hermitian(number))


# ---------------------------------------------------------------------------
# Reference values
# ---------------------------------------------------------------------------


def _frequency_factor(op: Operator, omega: float) -> float:
    if op is Operator.Q:
        return 1 / omega
    if op is Operator.P:
        return omega
    raise ValidationError(f"no closed form for operator {op.value!r}")


def energy_bracket(op: Operator | str, omega: float, energy: float) -> tuple[float, float]:
    """(lower, upper) with lower < ‖op‖_E ≤ upper for the position or momentum operator."""
    factor = _frequency_factor(Operator(op), omega)
    return math.sqrt((2 * energy + 0.5) * factor), math.sqrt((2 * energy + 1) * factor)


def squeezed_vacuum_norm(op: Operator | str, omega: float, energy: float) -> float:
    """√⟨op²⟩ in the squeezed vacuum with mean photon number E, a feasible state."""
    factor = _frequency_factor(Operator(op), omega)
    return (math.sqrt(energy) + math.sqrt(energy + 1)) * math.sqrt(factor / 2)


def closed_form_bound(op: Operator | str, omega: float) -> float:
    """lim ‖op‖_E/√E: √(2/ω) for q, √(2ω) for p."""
    return math.sqrt(2 * _frequency_factor(Operator(op), omega))


# ---------------------------------------------------------------------------
# Truncation ladder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LadderRecord:
    E: float
    d: int
    value: float
    mu_star: float
    gap: float


@dataclass(frozen=True)
class ConvergedNorm:
    E: float
    value: float
    d_used: int
    achieved_tol: float
    gap: float


@dataclass(frozen=True)
class TruncationLadder:
    op: Operator
    omega: float
    tol: float
    dims: tuple[int, ...]
    records: tuple[LadderRecord, ...]
    converged: tuple[ConvergedNorm, ...]

    @property
    def energies(self) -> np.ndarray:
        return np.array([c.E for c in self.converged])

    @property
    def values(self) -> np.ndarray:
        return np.array([c.value for c in self.converged])


def converged_enorm(
    op: Operator | str,
    omega: float,
    energy: float,
    tol: float = DEFAULT_TOL,
    d_max: int = DEFAULT_DMAX,
    d_start: int = DEFAULT_DSTART,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[ConvergedNorm, tuple[LadderRecord, ...]]:
    """
    Evaluate ‖op‖_E^N at d = d_start, 2·d_start, … until successive values agree.

    Values must be non-decreasing in d. When ``tol ≤ 1e-3`` the converged position
    and momentum values are checked against their known bracket.

    Raises:
        ConvergenceError: d_max reached first; carries the partial ladder
    """
    op = Operator(op)
    if not energy > 0:
        raise ValidationError(f"E must be > 0, got {energy!r}")
    if not tol > 0:
        raise ValidationError(f"tol must be > 0, got {tol!r}")

    records: list[LadderRecord] = []
    d = max(d_start, 2)
    while d <= d_max:
        point = enorm_dual(FockTruncation(d, omega).operator_pair(op, policy), energy, policy)
        record = LadderRecord(E=float(energy), d=d, value=point.value, mu_star=point.mu_star, gap=point.gap)
        logger.info("ladder %s ω=%s E=%s d=%d value=%.12g", op.value, omega, energy, d, point.value)
        if records:
            previous = records[-1].value
            if record.value < previous - policy.monotone_slack * (1 + previous):
                raise CurveInvariantError(
                    f"truncation ladder decreased at E={energy!r}: d={records[-1].d} gives {previous!r}, "
                    f"d={d} gives {record.value!r}"
                )
            records.append(record)
            delta = abs(record.value - previous)
            if delta < tol * (1 + record.value):
                result = ConvergedNorm(
                    E=float(energy),
                    value=record.value,
                    d_used=d,
                    achieved_tol=delta / (1 + record.value),
                    gap=record.gap,
                )
                if tol <= 1e-3 and op is not Operator.N:
                    _check_bracket(op, omega, result)
                return result, tuple(records)
        else:
            records.append(record)
        d *= 2

    raise ConvergenceError(
        f"{op.value} at ω={omega!r}, E={energy!r} did not converge to tol={tol!r} within d_max={d_max}",
        partial=[asdict(r) for r in records],
    )


def _check_bracket(op: Operator, omega: float, result: ConvergedNorm) -> None:
    lower, upper = energy_bracket(op, omega, result.E)
    if not lower < result.value <= upper + 1e-6:
        raise CurveInvariantError(
            f"converged ‖{op.value}‖_E={result.value!r} at E={result.E!r}, ω={omega!r} "
            f"outside ({lower!r}, {upper!r}]"
        )


def _is_divergent(records: Sequence[dict]) -> bool:
    values = [r["value"] for r in records]
    if len(values) < 3:
        return False
    growth = [b / a for a, b in zip(values, values[1:], strict=False) if a > 0]
    return len(growth) >= 2 and all(g >= _DIVERGENCE_GROWTH for g in growth[-2:])


def run_ladder(
    op: Operator | str,
    omega: float = 1.0,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tol: float = DEFAULT_TOL,
    d_max: int = DEFAULT_DMAX,
    policy: NumericPolicy = DEFAULT_POLICY,
    threads: int | None = None,
) -> TruncationLadder:
    """Converge ‖op‖_E at every E of ``schedule``; energies run concurrently."""
    op = Operator(op)
    energies = [float(e) for e in schedule]
    if not energies or any(e <= 0 for e in energies):
        raise ValidationError(f"energy schedule must be non-empty and positive, got {energies}")
    if any(b <= a for a, b in zip(energies, energies[1:], strict=False)):
        raise ValidationError(f"energy schedule must be strictly increasing, got {energies}")

    def rung(energy: float):
        try:
            return converged_enorm(op, omega, energy, tol, d_max, policy=policy)
        except ConvergenceError as exc:
            return exc

    workers = min(threads or RuntimeSettings().threads, len(energies))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(rung, energies))

    failures = [(e, o) for e, o in zip(energies, outcomes, strict=True) if isinstance(o, ConvergenceError)]
    if failures:
        energy, first = failures[0]
        partial = [r for _, exc in failures for r in exc.partial]
        if all(_is_divergent(exc.partial) for _, exc in failures):
            ratios = [r["value"] / math.sqrt(r["E"]) for r in first.partial]
            raise DivergentBoundError(
                f"‖{op.value}‖_E/√E grows without bound along the truncation ladder at E={energy!r}; "
                "the operator is not √N-bounded and no extrapolation is made",
                ratios=ratios,
                partial=partial,
            )
        raise ConvergenceError(f"ladder failed at E={energy!r}: {first}", partial=partial)

    converged = tuple(o[0] for o in outcomes)
    records = tuple(r for o in outcomes for r in o[1])
    return TruncationLadder(
        op=op,
        omega=float(omega),
        tol=float(tol),
        dims=tuple(sorted({r.d for r in records})),
        records=records,
        converged=converged,
    )


def bound_from_ladder(ladder: TruncationLadder) -> BoundEstimate:
    """
    Extrapolate b = lim ‖op‖_E/√E by fitting r(E) ≈ b + c/E to the last points.

    Raises:
        DivergentBoundError: the ratio sequence increases along the schedule
    """
    sequence = ratio_sequence(ladder.energies, ladder.values)
    energies = np.array([e for e, _ in sequence])
    ratios = np.array([r for _, r in sequence])
    slack = ladder.tol * (1 + ladder.values) / np.sqrt(energies)
    if np.any(np.diff(ratios) > slack[1:]):
        raise DivergentBoundError(
            f"ratio ‖{ladder.op.value}‖_E/√E increases along the schedule; refusing to extrapolate",
            ratios=ratios.tolist(),
            partial=[asdict(c) for c in ladder.converged],
        )

    tail = slice(-min(FIT_POINTS, len(ratios)), None)
    if len(ratios) >= 2:
        design = np.column_stack([np.ones_like(energies[tail]), 1 / energies[tail]])
        (intercept, _), *_ = np.linalg.lstsq(design, ratios[tail], rcond=None)
    else:
        intercept = ratios[-1]
    value = float(np.clip(intercept, 0.0, ratios[-1]))
    logger.info("√N-bound of %s at ω=%s: %.6g (last ratio %.6g)", ladder.op.value, ladder.omega, value, ratios[-1])
    return BoundEstimate(
        value=value,
        sequence=sequence,
        method=BoundMethod.LADDER_EXTRAPOLATED,
        uncertainty=float(abs(ratios[-1] - intercept)),
    )


def gbound_ladder(
    op: Operator | str,
    omega: float = 1.0,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tol: float = DEFAULT_TOL,
    d_max: int = DEFAULT_DMAX,
    policy: NumericPolicy = DEFAULT_POLICY,
    threads: int | None = None,
) -> BoundEstimate:
    """√N-bound of an oscillator operator from converged E-norms along ``schedule``."""
    return bound_from_ladder(run_ladder(op, omega, schedule, tol, d_max, policy, threads))
