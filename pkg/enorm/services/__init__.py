"""
E-norm Service - Services Layer

Numerical modules (linear algebra, dual solver, envelopes, oscillator ladders,
channels) and the file/plot services the command layer builds on.
"""

from enorm.services.channel import KrausMap, extension_sweep, y_curve, y_phi
from enorm.services.envelope import (
    BoundEstimate,
    GammaFrontier,
    GammaPoint,
    enorm_from_gamma,
    gamma_frontier,
    gamma_membership,
    gbound_fixed,
)
from enorm.services.oscillator import FockTruncation, converged_enorm, gbound_ladder
from enorm.services.solver import (
    ENormCurve,
    ENormPoint,
    OperatorPair,
    enorm_curve,
    enorm_dual,
    enorm_oracle,
    enorm_primal_pure,
    enorm_purified,
)

__all__ = [
    "BoundEstimate",
    "ENormCurve",
    "ENormPoint",
    "FockTruncation",
    "GammaFrontier",
    "GammaPoint",
    "KrausMap",
    "OperatorPair",
    "converged_enorm",
    "enorm_curve",
    "enorm_dual",
    "enorm_from_gamma",
    "enorm_oracle",
    "enorm_primal_pure",
    "enorm_purified",
    "extension_sweep",
    "gamma_frontier",
    "gamma_membership",
    "gbound_fixed",
    "gbound_ladder",
    "y_curve",
    "y_phi",
]
