"""
Unit tests for oscillator.py: Fock-basis operators, truncation ladders and
√N-bound extrapolation.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from enorm.errors import ConvergenceError, DivergentBoundError, ValidationError
from enorm.services.envelope import BoundMethod
from enorm.services.oscillator import (
    DEFAULT_SCHEDULE,
    LONG_SCHEDULE,
    ConvergedNorm,
    FockTruncation,
    LadderRecord,
    Operator,
    TruncationLadder,
    bound_from_ladder,
    closed_form_bound,
    converged_enorm,
    energy_bracket,
    gbound_ladder,
    run_ladder,
    squeezed_vacuum_norm,
)
from enorm.services.solver import enorm_dual

# ---------------------------------------------------------------------------
# Fock-basis operators
# ---------------------------------------------------------------------------


class TestBuildLadderOps:
    def test_two_levels(self):
        ops = FockTruncation(2).ladder_ops()
        assert_allclose(ops.q, [[0, 1 / math.sqrt(2)], [1 / math.sqrt(2), 0]], atol=1e-15)
        assert_allclose(ops.N, np.diag([0.0, 1.0]))

    def test_lowering_entries(self):
        a = FockTruncation(5).ladder_ops().a
        assert_allclose(np.diagonal(a, 1), np.sqrt([1.0, 2.0, 3.0, 4.0]))
        assert np.count_nonzero(a) == 4

    def test_number_operator_from_ladder(self):
        ops = FockTruncation(8).ladder_ops()
        assert_allclose(ops.a_dag @ ops.a, ops.N, atol=1e-12)

    def test_commutator_defect_confined_to_top_level(self):
        d = 8
        ops = FockTruncation(d).ladder_ops()
        commutator = ops.a @ ops.a_dag - ops.a_dag @ ops.a
        expected = np.eye(d)
        expected[d - 1, d - 1] = -(d - 1)
        assert_allclose(commutator, expected, atol=1e-12)

    @pytest.mark.parametrize("omega", [0.5, 1.0, 3.0])
    def test_canonical_commutator_on_leading_block(self, omega):
        d = 10
        ops = FockTruncation(d, omega).ladder_ops()
        commutator = ops.q @ ops.p - ops.p @ ops.q
        assert_allclose(commutator[: d - 1, : d - 1], 1j * np.eye(d - 1), atol=1e-12)

    def test_hermitian(self):
        ops = FockTruncation(12, 2.0).ladder_ops()
        for matrix in (ops.q, ops.p, ops.N):
            assert_allclose(matrix, matrix.conj().T, atol=1e-12)

    def test_operator_lookup(self):
        truncation = FockTruncation(6)
        assert_allclose(truncation.operator("N"), truncation.ladder_ops().N)
        assert truncation.operator_pair(Operator.P).dim == 6

    @pytest.mark.parametrize("d, omega", [(1, 1.0), (4, 0.0), (4, -1.0), (4, math.inf)])
    def test_rejects_invalid(self, d, omega):
        with pytest.raises(ValidationError):
            FockTruncation(d, omega)


# ---------------------------------------------------------------------------
# Reference values
# ---------------------------------------------------------------------------


class TestReferenceValues:
    def test_bracket_at_unit_frequency(self):
        lower, upper = energy_bracket("q", 1.0, 1.0)
        assert lower == pytest.approx(math.sqrt(2.5))
        assert upper == pytest.approx(math.sqrt(3.0))

    @pytest.mark.parametrize("op", ["q", "p"])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("energy", [0.5, 1.0, 5.0])
    def test_squeezed_vacuum_inside_bracket(self, op, omega, energy):
        lower, upper = energy_bracket(op, omega, energy)
        assert lower < squeezed_vacuum_norm(op, omega, energy) <= upper

    def test_closed_form_bounds(self):
        assert closed_form_bound("q", 2.0) == pytest.approx(1.0)
        assert closed_form_bound("p", 2.0) == pytest.approx(2.0)
        assert closed_form_bound("q", 1.0) == closed_form_bound("p", 1.0) == pytest.approx(math.sqrt(2))

    def test_number_operator_has_no_closed_form(self):
        with pytest.raises(ValidationError, match="no closed form"):
            energy_bracket("N", 1.0, 1.0)


class TestFixedTruncation:
    def test_number_operator_mixes_extreme_levels(self):
        point = enorm_dual(FockTruncation(8).operator_pair("N"), 2.0)
        assert point.value == pytest.approx(math.sqrt(14), rel=1e-9)

    @pytest.mark.parametrize("omega", [0.5, 4.0])
    def test_frequency_scaling(self, omega):
        reference_q = enorm_dual(FockTruncation(32).operator_pair("q"), 1.0).value
        reference_p = enorm_dual(FockTruncation(32).operator_pair("p"), 1.0).value
        scaled_q = enorm_dual(FockTruncation(32, omega).operator_pair("q"), 1.0).value
        scaled_p = enorm_dual(FockTruncation(32, omega).operator_pair("p"), 1.0).value
        assert scaled_q == pytest.approx(reference_q / math.sqrt(omega), rel=1e-8)
        assert scaled_p == pytest.approx(reference_p * math.sqrt(omega), rel=1e-8)

    def test_monotone_in_dimension(self):
        values = [enorm_dual(FockTruncation(d).operator_pair("q"), 3.0).value for d in (8, 16, 32, 64)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:], strict=False))


# ---------------------------------------------------------------------------
# converged_enorm
# ---------------------------------------------------------------------------


class TestConvergedEnorm:
    @pytest.mark.parametrize("op", ["q", "p"])
    def test_unit_energy(self, op):
        result, records = converged_enorm(op, 1.0, 1.0)
        assert math.sqrt(2.5) < result.value <= math.sqrt(3.0) + 1e-6
        assert result.value == pytest.approx(squeezed_vacuum_norm(op, 1.0, 1.0), abs=1e-4)
        assert result.d_used == records[-1].d
        assert result.achieved_tol < 1e-4
        assert [r.d for r in records] == [16 * 2**k for k in range(len(records))]

    def test_records_non_decreasing(self):
        _, records = converged_enorm("q", 1.0, 4.0, tol=1e-8)
        values = [r.value for r in records]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:], strict=False))

    def test_frequency_halves_position(self):
        reference, _ = converged_enorm("q", 1.0, 1.0, tol=1e-10)
        scaled, _ = converged_enorm("q", 4.0, 1.0, tol=1e-10)
        assert scaled.value == pytest.approx(reference.value / 2, rel=1e-8)

    def test_cap_reached(self):
        with pytest.raises(ConvergenceError, match="did not converge") as excinfo:
            converged_enorm("q", 1.0, 32.0, tol=1e-10, d_max=32)
        assert [r["d"] for r in excinfo.value.partial] == [16, 32]
        assert excinfo.value.exit_code == 4

    @pytest.mark.parametrize("energy, tol", [(0.0, 1e-4), (-1.0, 1e-4), (1.0, 0.0)])
    def test_rejects_invalid(self, energy, tol):
        with pytest.raises(ValidationError):
            converged_enorm("q", 1.0, energy, tol)


# ---------------------------------------------------------------------------
# Ladders and bounds
# ---------------------------------------------------------------------------


class TestRunLadder:
    def test_schedule_validation(self):
        with pytest.raises(ValidationError, match="strictly increasing"):
            run_ladder("q", schedule=(2.0, 1.0))
        with pytest.raises(ValidationError, match="non-empty and positive"):
            run_ladder("q", schedule=())

    def test_collects_records(self):
        ladder = run_ladder("p", 2.0, schedule=(1.0, 2.0), threads=2)
        assert ladder.op is Operator.P
        assert [c.E for c in ladder.converged] == [1.0, 2.0]
        assert list(ladder.dims) == sorted(set(ladder.dims))
        assert all(r.E in (1.0, 2.0) for r in ladder.records)

    def test_convergence_failure_carries_partial(self):
        with pytest.raises(ConvergenceError) as excinfo:
            run_ladder("q", schedule=(32.0,), tol=1e-12, d_max=32)
        assert not isinstance(excinfo.value, DivergentBoundError)
        assert len(excinfo.value.partial) == 2


class TestBoundFromLadder:
    @staticmethod
    def ladder(energies, values):
        converged = tuple(
            ConvergedNorm(E=e, value=v, d_used=16, achieved_tol=0.0, gap=0.0)
            for e, v in zip(energies, values, strict=True)
        )
        records = tuple(
            LadderRecord(E=e, d=16, value=v, mu_star=0.0, gap=0.0) for e, v in zip(energies, values, strict=True)
        )
        return TruncationLadder(op=Operator.Q, omega=1.0, tol=1e-4, dims=(16,), records=records, converged=converged)

    def test_exact_model_recovered(self):
        energies = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        values = (1.5 + 0.4 / energies) * np.sqrt(energies)
        estimate = bound_from_ladder(self.ladder(energies, values))
        assert estimate.value == pytest.approx(1.5, rel=1e-10)
        assert estimate.uncertainty == pytest.approx(0.4 / 16, rel=1e-8)
        assert estimate.method is BoundMethod.LADDER_EXTRAPOLATED

    def test_increasing_ratio_refused(self):
        energies = np.array([1.0, 4.0, 16.0])
        with pytest.raises(DivergentBoundError, match="refusing to extrapolate") as excinfo:
            bound_from_ladder(self.ladder(energies, energies))
        assert excinfo.value.ratios == pytest.approx([1.0, 2.0, 4.0])

    def test_negative_intercept_clipped_to_zero(self):
        energies = np.array([1.0, 2.0, 4.0, 8.0])
        values = (1 / energies - 0.1) * np.sqrt(energies)
        estimate = bound_from_ladder(self.ladder(energies, values))
        assert estimate.value == 0.0
        assert estimate.uncertainty == pytest.approx(0.125, rel=1e-8)


@pytest.mark.slow
class TestGboundLadder:
    SCHEDULE = (1.0, 2.0, 4.0, 8.0, 16.0)

    @pytest.mark.parametrize("op", ["q", "p"])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_matches_closed_form(self, op, omega):
        estimate = gbound_ladder(op, omega, self.SCHEDULE)
        assert estimate.value == pytest.approx(closed_form_bound(op, omega), rel=0.05)
        ratios = estimate.ratios
        assert np.all(np.diff(ratios) <= 0)

    def test_number_operator_diverges(self):
        with pytest.raises(DivergentBoundError, match="not √N-bounded") as excinfo:
            gbound_ladder("N", schedule=(1.0, 2.0), d_max=128)
        assert len(excinfo.value.ratios) >= 3
        assert excinfo.value.exit_code == 4

    def test_long_schedule_extends_default(self):
        assert LONG_SCHEDULE[: len(DEFAULT_SCHEDULE)] == DEFAULT_SCHEDULE
        assert LONG_SCHEDULE[-1] == 256.0

    @pytest.mark.parametrize(("op", "omega"), [("q", 1.0), ("p", 2.0)])
    def test_long_schedule_tightens_estimate(self, op, omega):
        estimate = gbound_ladder(op, omega, LONG_SCHEDULE)
        assert estimate.value == pytest.approx(closed_form_bound(op, omega), rel=1e-3)
