"""
End-to-end checks of the numerical claims the package is built to reproduce.

Slow; run with ``pytest -m slow``.
"""

import math

import numpy as np
import pytest

from enorm.services.channel import extension_sweep, identity_channel, random_channel, y_curve
from enorm.services.envelope import (
    GammaPoint,
    Verdict,
    frontier_residuals,
    gamma_frontier,
    gamma_membership,
    gbound_fixed,
)
from enorm.services.linalg import random_complex_matrix, random_psd
from enorm.services.oscillator import closed_form_bound, converged_enorm, energy_bracket, gbound_ladder
from enorm.services.solver import (
    OperatorPair,
    chain_violations,
    enorm_curve,
    enorm_dual,
    enorm_oracle,
    enorm_purified,
)
from tests.helpers import make_pair

pytestmark = pytest.mark.slow

OMEGAS = [0.5, 1.0, 2.0]
GRID = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]


# ---------------------------------------------------------------------------
# Oscillator
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("op", ["q", "p"])
@pytest.mark.parametrize("omega", OMEGAS)
@pytest.mark.parametrize("energy", [0.5, 1.0, 2.0, 5.0])
def test_converged_norm_inside_bracket(op, omega, energy):
    result, records = converged_enorm(op, omega, energy, tol=1e-6, d_max=512)
    lower, upper = energy_bracket(op, omega, energy)
    assert lower < result.value <= upper + 1e-6
    assert records[-1].d <= 512


@pytest.mark.parametrize("op", ["q", "p"])
@pytest.mark.parametrize("omega", OMEGAS)
def test_square_root_bound(op, omega):
    estimate = gbound_ladder(op, omega)
    assert estimate.value == pytest.approx(closed_form_bound(op, omega), rel=0.05)
    assert np.all(np.diff(estimate.ratios) <= 0)


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(50))
def test_dual_inside_oracle_bracket(seed):
    pair = make_pair(2 + seed % 5, seed)
    lower, upper = enorm_oracle(pair, 1.0, budget=500, seed=seed)
    value = enorm_dual(pair, 1.0).value
    assert upper - lower <= 1e-5
    assert abs(value - (lower + upper) / 2) <= (upper - lower) / 2 + 1e-6


@pytest.mark.parametrize("seed", range(20))
def test_purification_is_flat(seed):
    pair = make_pair(2 + seed % 3, 100 + seed)
    values = [enorm_purified(pair, 1.0, n, seed=seed) for n in (1, 2, 3)]
    assert max(values) - min(values) <= 1e-6


@pytest.mark.parametrize("seed", range(20))
def test_curve_structure(seed):
    curve = enorm_curve(make_pair(4, 200 + seed), GRID)
    assert curve.violations() == []
    assert chain_violations(curve) == []


# ---------------------------------------------------------------------------
# Γ frontier
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_frontier_both_directions(seed):
    curve = enorm_curve(make_pair(4, 300 + seed), GRID)
    frontier = gamma_frontier(curve)
    for point in frontier.points:
        assert gamma_membership(curve, point).verdict is not Verdict.NON_MEMBER

    rng = np.random.default_rng(seed)
    for _ in range(10):
        anchor = frontier.points[rng.integers(len(frontier.points))]
        shrink_a, shrink_b = rng.uniform(0.0, 0.9, size=2)
        result = gamma_membership(curve, GammaPoint(anchor.a * shrink_a, anchor.b * shrink_b))
        assert result.verdict is Verdict.NON_MEMBER
        assert result.witness_energy in GRID
        assert result.excess > 0

    assert np.all(frontier_residuals(frontier) <= 1e-6 * (1 + curve.values))


# ---------------------------------------------------------------------------
# √G-bound as a seminorm at fixed truncation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(50))
def test_fixed_bound_is_seminorm(seed):
    rng = np.random.default_rng(400 + seed)
    G = random_psd(3, rng)
    A = random_complex_matrix(3, 3, rng)
    B = random_complex_matrix(3, 3, rng)
    c = complex(rng.normal(), rng.normal())

    def estimate(matrix):
        curve = enorm_curve(OperatorPair(matrix, G), GRID)
        return gbound_fixed(curve).value, curve

    b_a, _ = estimate(A)
    b_b, _ = estimate(B)
    b_diff, diff_curve = estimate(A - B)
    b_scaled, _ = estimate(c * A)

    assert abs(b_a - b_b) <= b_diff + 1e-9
    for point in diff_curve.points:
        assert b_diff <= point.value / math.sqrt(point.E) + 1e-9
    assert b_scaled == pytest.approx(abs(c) * b_a, abs=1e-9 * (1 + abs(c) * b_a))


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


def test_extension_inequality_sweep():
    pairs = [make_pair(4, 500 + k) for k in range(10)]
    summary = extension_sweep(pairs, 1000, k_dims=(1, 2, 3), seed=17)
    assert summary.samples == 1000
    assert summary.violations == 0


@pytest.mark.parametrize("seed", range(5))
def test_identity_channel_amplification(seed):
    G = random_psd(4, seed)
    top = float(np.linalg.eigvalsh(G)[-1])
    grid = np.linspace(0.05, 1.5, 16) * top
    report = y_curve(identity_channel(4), G, grid)
    assert np.allclose(report.values, np.minimum(grid, top), atol=1e-8)


@pytest.mark.parametrize("seed", range(20))
def test_random_channel_amplification(seed):
    rng = np.random.default_rng(600 + seed)
    channel = random_channel(4, 1 + seed % 4, rng)
    G = random_psd(4, rng)
    report = y_curve(channel, G, np.linspace(0.1, 6.0, 16))
    assert report.violations == ()
    assert np.all(np.diff(report.values) >= -1e-12)
    assert np.isfinite(report.max_ratio)
