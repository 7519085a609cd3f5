"""
Γ frontier and √G-bound estimation.

A pair (a, b) belongs to Γ_√G(A) exactly when ‖A‖_E² ≤ a² + b²E for every E > 0,
so the frontier of Γ is the family of support lines of the concave map E ↦ ‖A‖_E².
On a sampled curve those lines are the secants between adjacent grid points; the
dual multiplier of each point supplies an exact supporting line as well.
"""

import enum
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from enorm.config import DEFAULT_POLICY, NumericPolicy
from enorm.errors import ValidationError
from enorm.services.solver import ENormCurve, ENormPoint

logger = logging.getLogger(__name__)


if hasattr(enum, "StrEnum"):
    _StrEnum = enum.StrEnum
else:  # Python 3.10: equivalent of enum.StrEnum (str() and format() give the value)

    class _StrEnum(str, enum.Enum):
        __str__ = str.__str__
        __format__ = str.__format__

FIXED_TRUNCATION_WARNING = (
    "fixed-truncation estimate: every finite matrix has √G-bound 0, so this value "
    "describes the truncated operator on the sampled grid only; use the truncation "
    "ladder for the limit"
)


class Verdict(_StrEnum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    UNDECIDED = "undecided"


class BoundMethod(_StrEnum):
    FIXED_TRUNCATION_INF = "fixed_truncation_inf"
    LADDER_EXTRAPOLATED = "ladder_extrapolated"


class BoundClass(_StrEnum):
    INFINITESIMAL = "infinitesimal"
    RELATIVELY_BOUNDED = "relatively_bounded"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True, order=True)
class GammaPoint:
    """Coefficients (a, b) of the relative bound ‖Aφ‖² ≤ a²‖φ‖² + b²‖√G φ‖²."""

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"GammaPoint.{name} must be finite and >= 0, got {value!r}")

    def bound_at(self, energy: float) -> float:
        return math.sqrt(self.a**2 + self.b**2 * energy)


@dataclass(frozen=True, eq=False)
class GammaFrontier:
    points: tuple[GammaPoint, ...]
    source: ENormCurve


@dataclass(frozen=True)
class MembershipResult:
    verdict: Verdict
    witness_energy: float | None = None
    excess: float = 0.0


@dataclass(frozen=True)
class BoundEstimate:
    """Estimate of b_√G(A) with the ratio sequence it was read from."""

    value: float
    sequence: tuple[tuple[float, float], ...]
    method: BoundMethod
    uncertainty: float
    warning: str | None = None

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r for _, r in self.sequence])


# ---------------------------------------------------------------------------
# Frontier
# ---------------------------------------------------------------------------


def tangent_point(point: ENormPoint) -> GammaPoint:
    """Dual support line at ``point``: a² = value² − μ*E, b² = μ*. Dominates the whole curve."""
    return GammaPoint(
        a=math.sqrt(max(point.value**2 - point.mu_star * point.E, 0.0)),
        b=math.sqrt(max(point.mu_star, 0.0)),
    )


def _secants(energies: np.ndarray, squares: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    slopes = np.diff(squares) / np.diff(energies)
    intercepts = squares[:-1] - slopes * energies[:-1]
    return slopes, intercepts


def gamma_frontier(curve: ENormCurve, policy: NumericPolicy = DEFAULT_POLICY) -> GammaFrontier:
    """Lower-left frontier of Γ from the secants of value² between adjacent grid points."""
    curve.validate(policy)
    if len(curve.points) == 1:
        return GammaFrontier(points=(tangent_point(curve.points[0]),), source=curve)

    slopes, intercepts = _secants(curve.energies, curve.values**2)
    unique: dict[tuple[float, float], GammaPoint] = {}
    for slope, intercept in zip(slopes, intercepts, strict=True):
        candidate = GammaPoint(a=math.sqrt(max(intercept, 0.0)), b=math.sqrt(max(slope, 0.0)))
        key = (round(candidate.a, 12), round(candidate.b, 12))
        unique.setdefault(key, candidate)
    points = tuple(sorted(unique.values(), key=lambda p: (p.b, -p.a)))
    logger.debug("frontier with %d points from %d grid energies", len(points), len(curve.points))
    return GammaFrontier(points=points, source=curve)


def enorm_from_gamma(frontier: GammaFrontier, energy: float) -> float:
    """inf over the frontier of √(a² + b²E)."""
    if not frontier.points:
        raise ValidationError("frontier is empty")
    return min(p.bound_at(energy) for p in frontier.points)


def frontier_residuals(frontier: GammaFrontier) -> np.ndarray:
    """|enorm_from_gamma(E) − ‖A‖_E| at every grid energy of the source curve."""
    curve = frontier.source
    rebuilt = np.array([enorm_from_gamma(frontier, e) for e in curve.energies])
    return np.abs(rebuilt - curve.values)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def _tangent_gap(curve: ENormCurve, candidate: GammaPoint) -> float:
    """
    Largest rise of the nodes' dual lines above the candidate line off the grid.

    Between adjacent nodes value² lies under the lower of their two dual lines, whose
    peak is where the lines meet. Below the first node it lies under the first dual
    line, down to λ_min(G).
    """

    def gap(point: ENormPoint, energy: float) -> float:
        dual_line = point.value**2 + point.mu_star * (energy - point.E)
        return dual_line - (candidate.a**2 + candidate.b**2 * energy)

    first = curve.points[0]
    worst = gap(first, min(curve.pair.lambda_min, first.E))
    for left, right in itertools.pairwise(curve.points):
        if left.mu_star <= right.mu_star:
            continue
        meet = (
            right.value**2 - right.mu_star * right.E - left.value**2 + left.mu_star * left.E
        ) / (left.mu_star - right.mu_star)
        meet = min(max(meet, left.E), right.E)
        worst = max(worst, min(gap(left, meet), gap(right, meet)))
    return worst


def gamma_membership(
    curve: ENormCurve, candidate: GammaPoint, policy: NumericPolicy = DEFAULT_POLICY
) -> MembershipResult:
    """
    Decide (a, b) ∈ Γ from sampled data.

    ``non_member`` carries the grid energy where value² exceeds a² + b²E. ``member``
    requires the inequality on the grid, between grid nodes and below the first node
    (where the nodes' dual lines bound value²), and beyond the grid: the dual line at
    the last grid point bounds value² for all larger E, and value² never exceeds
    ‖A‖²_op. Anything else is ``undecided``.
    """
    if not curve.points:
        raise ValidationError("curve is empty")
    energies = curve.energies
    squares = curve.values**2
    scale = 1 + float(np.max(squares))
    slack = policy.membership_slack * scale

    excess = squares - (candidate.a**2 + candidate.b**2 * energies)
    worst = int(np.argmax(excess))
    if excess[worst] > slack:
        return MembershipResult(Verdict.NON_MEMBER, float(energies[worst]), float(excess[worst]))

    if _tangent_gap(curve, candidate) > slack:
        return MembershipResult(Verdict.UNDECIDED)

    last = curve.points[-1]
    tail_slope = last.mu_star
    if candidate.b**2 >= tail_slope - slack / last.E:
        return MembershipResult(Verdict.MEMBER)

    # the dual line rises above the candidate line; check where it meets the operator-norm ceiling
    ceiling = curve.pair.operator_norm**2
    crossing = last.E + max(ceiling - last.value**2, 0.0) / tail_slope
    if ceiling <= candidate.a**2 + candidate.b**2 * crossing + slack:
        return MembershipResult(Verdict.MEMBER)
    return MembershipResult(Verdict.UNDECIDED)


# ---------------------------------------------------------------------------
# √G-bound
# ---------------------------------------------------------------------------


def ratio_sequence(energies: np.ndarray, values: np.ndarray) -> tuple[tuple[float, float], ...]:
    return tuple((float(e), float(v / math.sqrt(e))) for e, v in zip(energies, values, strict=True))


def gbound_fixed(curve: ENormCurve) -> BoundEstimate:
    """inf over the grid of ‖A‖_E/√E, read off at the largest energy."""
    if not curve.points:
        raise ValidationError("curve is empty")
    sequence = ratio_sequence(curve.energies, curve.values)
    ratios = [r for _, r in sequence]
    value = min(ratios)
    uncertainty = abs(ratios[-2] - ratios[-1]) if len(ratios) > 1 else 0.0
    logger.warning("%s (E_max=%s)", FIXED_TRUNCATION_WARNING, curve.energies[-1])
    return BoundEstimate(
        value=value,
        sequence=sequence,
        method=BoundMethod.FIXED_TRUNCATION_INF,
        uncertainty=uncertainty,
        warning=FIXED_TRUNCATION_WARNING,
    )


def classify_bound(estimate: BoundEstimate, abs_tol: float = 1e-6) -> BoundClass:
    """
    Heuristic label for an estimate; never a proof.

    Infinitesimal when the estimate is within twice its own uncertainty of zero (the
    ratios are still falling at the scale of the estimate), relatively bounded when
    it exceeds ten times its uncertainty.
    """
    if estimate.value <= 2 * estimate.uncertainty + abs_tol:
        return BoundClass.INFINITESIMAL
    if estimate.value >= 10 * estimate.uncertainty:
        return BoundClass.RELATIVELY_BOUNDED
    return BoundClass.UNDETERMINED
