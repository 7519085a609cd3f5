"""Seeded builders shared by the test modules."""

import numpy as np

from enorm.services.linalg import random_complex_matrix, random_psd
from enorm.services.solver import ENormCurve, ENormPoint, OperatorPair


def make_pair(dim: int, seed: int, spread: float = 4.0) -> OperatorPair:
    """Random A with a random PSD G whose ground energy is exactly 0."""
    rng = np.random.default_rng(seed)
    return OperatorPair(random_complex_matrix(dim, dim, rng), random_psd(dim, rng, spread))


def synthetic_curve(energies, values, pair: OperatorPair | None = None) -> ENormCurve:
    """Curve from given samples, bypassing the solver."""
    pair = pair or OperatorPair(np.eye(2), np.diag([0.0, 1.0]))
    points = tuple(
        ENormPoint(E=float(e), value=float(v), mu_star=0.0, witness=np.eye(2) / 2, gap=0.0)
        for e, v in zip(energies, values, strict=True)
    )
    return ENormCurve(pair=pair, points=points)
