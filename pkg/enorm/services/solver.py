"""
E-norm Solver

Computes ‖A‖_E^G = sup{ √Tr(A†Aρ) | ρ a state, Tr Gρ ≤ E } on finite-dimensional
(A, G) through the Lagrangian dual

    ‖A‖_E² = min_{μ ≥ 0} g(μ),   g(μ) = λ_max(A†A − μG) + μE,

with two independent cross-checks: a grid/sampling oracle that brackets the value
from both sides, and a pure-state primal ascent.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.optimize

from enorm.config import DEFAULT_POLICY, NumericPolicy, RuntimeSettings
from enorm.errors import (
    CurveInvariantError,
    CurvePointError,
    InfeasibleEnergyError,
    PreconditionError,
    ResourceGuardError,
    ValidationError,
)
from enorm.services.linalg import (
    ComplexMatrix,
    DensityMatrix,
    HermitianMatrix,
    PureState,
    as_complex_matrix,
    as_hermitian,
    banded_top_eigensystem,
    bandwidth,
    dense_top_eigensystem,
    gram,
    make_rng,
    tensor,
    to_upper_band,
    use_banded,
)

logger = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OperatorPair:
    """An operator A and a positive semidefinite energy operator G on the same space."""

    A: ComplexMatrix
    G: HermitianMatrix
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False, compare=False)
    lambda_min: float = field(init=False)
    lambda_max: float = field(init=False)

    def __post_init__(self):
        a = as_complex_matrix(self.A)
        g = as_hermitian(self.G, self.policy)
        if a.shape != g.shape:
            raise ValidationError(f"A has shape {a.shape} but G has shape {g.shape}")
        lowest, highest = _spectrum_bounds(g)
        if lowest < -self.policy.psd_tol:
            raise ValidationError(f"G is not positive semidefinite: λ_min(G)={lowest!r}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "G", g)
        object.__setattr__(self, "lambda_min", lowest)
        object.__setattr__(self, "lambda_max", highest)

    @property
    def dim(self) -> int:
        return int(self.A.shape[0])

    @property
    def ground_state_zero(self) -> bool:
        """Numerical rendering of the ground-energy condition inf ‖Gφ‖ = 0."""
        return self.lambda_min <= self.policy.ground_zero_tol

    @cached_property
    def objective(self) -> HermitianMatrix:
        return gram(self.A)

    @cached_property
    def ground_state(self) -> PureState:
        if bandwidth(self.G) == 0:
            vector = np.zeros(self.dim, dtype=np.complex128)
            vector[int(np.argmin(np.diagonal(self.G).real))] = 1.0
            return vector
        _, vectors = dense_top_eigensystem(-np.asarray(self.G), 1)
        return vectors[:, 0]

    @cached_property
    def operator_norm(self) -> float:
        """Largest singular value of A."""
        return float(scipy.linalg.svdvals(self.A)[0])

    def require_feasible(self, energy: float) -> None:
        if not energy > self.lambda_min + self.policy.infeasible_margin:
            raise InfeasibleEnergyError(energy, self.lambda_min)

    def scaled(self, factor: complex) -> "OperatorPair":
        return OperatorPair(np.asarray(self.A) * factor, self.G, self.policy)


@dataclass(frozen=True, eq=False)
class ENormPoint:
    """One evaluation of the E-norm with its dual certificate."""

    E: float
    value: float
    mu_star: float
    witness: DensityMatrix
    gap: float


@dataclass(frozen=True, eq=False)
class ENormCurve:
    """Sampled map E ↦ ‖A‖_E^G, sorted by E."""

    pair: OperatorPair
    points: tuple[ENormPoint, ...]

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.E for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    def violations(self, policy: NumericPolicy = DEFAULT_POLICY) -> list[str]:
        return curve_violations(
            self.energies, self.values, policy, ground_zero=self.pair.ground_state_zero
        )

    def validate(self, policy: NumericPolicy = DEFAULT_POLICY) -> "ENormCurve":
        problems = self.violations(policy)
        if problems:
            raise CurveInvariantError("; ".join(problems))
        return self


@dataclass(frozen=True, eq=False)
class DualSolution:
    """Supremum of Tr(Xρ) over {ρ ⪰ 0, Tr ρ = 1, Tr Gρ ≤ E} with its certificate."""

    objective_value: float
    mu_star: float
    witness: DensityMatrix
    witness_objective: float
    witness_energy: float
    gap: float
    evaluations: int


# ---------------------------------------------------------------------------
# Spectral helpers
# ---------------------------------------------------------------------------


def _spectrum_bounds(matrix: HermitianMatrix) -> tuple[float, float]:
    width = bandwidth(matrix)
    if width == 0:
        diagonal = np.diagonal(matrix).real
        return float(diagonal.min()), float(diagonal.max())
    if use_banded(matrix.shape[0], width):
        eigenvalues = scipy.linalg.eig_banded(to_upper_band(matrix, width), lower=False, eigvals_only=True)
    else:
        eigenvalues = scipy.linalg.eigvalsh(matrix)
    return float(eigenvalues[0]), float(eigenvalues[-1])


@dataclass(frozen=True, eq=False)
class _Eigenspace:
    """Top eigenspace of X − μG reduced to its two extreme-energy vectors."""

    mu: float
    top: float
    low_vector: np.ndarray
    low_energy: float
    low_objective: float
    high_vector: np.ndarray
    high_energy: float
    high_objective: float


class _Pencil:
    """The family X − μG, reusing banded storage across μ when both operands are narrow."""

    def __init__(self, objective: HermitianMatrix, energy_op: HermitianMatrix, policy: NumericPolicy):
        self.X = np.asarray(objective)
        self.G = np.asarray(energy_op)
        self.policy = policy
        self.dim = self.X.shape[0]
        width = max(bandwidth(self.X), bandwidth(self.G))
        self.banded = use_banded(self.dim, width, policy)
        if self.banded:
            self.x_band = to_upper_band(self.X, width)
            self.g_band = to_upper_band(self.G, width)

    def top(self, mu: float, count: int) -> tuple[np.ndarray, np.ndarray]:
        if self.banded:
            return banded_top_eigensystem(self.x_band - mu * self.g_band, count)
        return dense_top_eigensystem(self.X - mu * self.G, count)

    def eigenspace(self, mu: float) -> _Eigenspace:
        count = 2
        while True:
            eigenvalues, vectors = self.top(mu, count)
            tol = self.policy.degeneracy_tol * (1 + abs(eigenvalues[0]))
            multiplicity = int(np.sum(eigenvalues >= eigenvalues[0] - tol))
            if multiplicity < len(eigenvalues) or count >= self.dim:
                break
            count *= 2
        basis = vectors[:, :multiplicity]
        restricted = basis.conj().T @ (self.G @ basis)
        _, rotation = scipy.linalg.eigh((restricted + restricted.conj().T) / 2)
        low = basis @ rotation[:, 0]
        high = basis @ rotation[:, -1]
        return _Eigenspace(
            mu=mu,
            top=float(eigenvalues[0]),
            low_vector=low,
            low_energy=_quadratic(self.G, low),
            low_objective=_quadratic(self.X, low),
            high_vector=high,
            high_energy=_quadratic(self.G, high),
            high_objective=_quadratic(self.X, high),
        )


def _quadratic(matrix: np.ndarray, vector: np.ndarray) -> float:
    return float(np.vdot(vector, matrix @ vector).real)


def _best_mixture(
    objectives: np.ndarray, energies: np.ndarray, energy: float
) -> tuple[float, int, int, float]:
    """
    Best objective over single feasible vectors and two-vector mixtures hitting ``energy``.

    Returns:
        Tuple of (objective, index_high, index_low, weight_on_high); index_high is -1 for a single vector
    """
    low = np.flatnonzero(energies <= energy)
    high = np.flatnonzero(energies > energy)
    best, best_high, best_low, best_weight = -np.inf, -1, -1, 0.0
    if low.size:
        pick = low[int(np.argmax(objectives[low]))]
        best, best_low = float(objectives[pick]), int(pick)
    if low.size and high.size:
        e_high = energies[high][:, None]
        e_low = energies[low][None, :]
        weight = (energy - e_low) / (e_high - e_low)
        mixed = weight * objectives[high][:, None] + (1 - weight) * objectives[low][None, :]
        i, j = np.unravel_index(int(np.argmax(mixed)), mixed.shape)
        if mixed[i, j] > best:
            best = float(mixed[i, j])
            best_high, best_low, best_weight = int(high[i]), int(low[j]), float(weight[i, j])
    return best, best_high, best_low, best_weight


# ---------------------------------------------------------------------------
# Dual solver
# ---------------------------------------------------------------------------


def maximize_energy_constrained(
    objective: HermitianMatrix,
    energy_op: HermitianMatrix,
    energy: float,
    ground_energy: float,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> DualSolution:
    """
    Maximize Tr(Xρ) over states with Tr Gρ ≤ E via the convex dual g(μ).

    The bracket expands μ = 0, 1, 2, 4, … until the right subgradient E − min⟨G⟩ over
    the top eigenspace turns nonnegative; golden-section then narrows it to width
    ``golden_rel_width·(1+μ)``. Every evaluated μ yields an upper bound, and every
    evaluated eigenspace contributes extreme-energy vectors from which a feasible
    rank ≤ 2 witness is assembled.
    """
    if not energy > ground_energy + policy.infeasible_margin:
        raise InfeasibleEnergyError(energy, ground_energy)

    pencil = _Pencil(objective, energy_op, policy)
    spaces: list[_Eigenspace] = []

    def evaluate(mu: float) -> tuple[float, _Eigenspace]:
        space = pencil.eigenspace(mu)
        spaces.append(space)
        return space.top + mu * energy, space

    _, space = evaluate(0.0)
    if space.low_energy > energy:
        lo, hi = 0.0, 1.0
        for _ in range(policy.bracket_max_doublings):
            _, space = evaluate(hi)
            if space.low_energy <= energy:
                break
            lo, hi = hi, hi * 2
        else:
            raise ValidationError(f"dual bracket failed to close below μ={hi!r}")
        logger.debug("dual bracket [%s, %s] after %d evaluations", lo, hi, len(spaces))
        _golden_section(lambda mu: evaluate(mu)[0], lo, hi, policy)

    values = np.array([s.top + s.mu * energy for s in spaces])
    best = int(np.argmin(values))
    objective_value = float(values[best])
    mu_star = spaces[best].mu

    vectors = [v for s in spaces for v in (s.low_vector, s.high_vector)]
    objectives = np.array([o for s in spaces for o in (s.low_objective, s.high_objective)])
    energies = np.array([e for s in spaces for e in (s.low_energy, s.high_energy)])
    witness_objective, i_high, i_low, weight = _best_mixture(objectives, energies, energy)
    witness = (1 - weight) * np.outer(vectors[i_low], vectors[i_low].conj())
    if i_high >= 0:
        witness = witness + weight * np.outer(vectors[i_high], vectors[i_high].conj())
    witness_energy = float(np.einsum("ij,ji->", np.asarray(energy_op), witness).real)

    gap = max(objective_value - witness_objective, 0.0)
    logger.debug(
        "dual solved: E=%s μ*=%s value²=%s gap=%s (%d evaluations)",
        energy,
        mu_star,
        objective_value,
        gap,
        len(spaces),
    )
    return DualSolution(
        objective_value=objective_value,
        mu_star=mu_star,
        witness=witness,
        witness_objective=witness_objective,
        witness_energy=witness_energy,
        gap=gap,
        evaluations=len(spaces),
    )


def _golden_section(func, lo: float, hi: float, policy: NumericPolicy) -> None:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(policy.golden_max_iterations):
        if b - a <= policy.golden_rel_width * (1 + b):
            return
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    logger.warning("golden-section stopped at iteration cap with width %s", b - a)


def enorm_dual(pair: OperatorPair, energy: float, policy: NumericPolicy | None = None) -> ENormPoint:
    """‖A‖_E^G by exact Lagrangian duality."""
    policy = policy or pair.policy
    pair.require_feasible(energy)
    solution = maximize_energy_constrained(pair.objective, pair.G, energy, pair.lambda_min, policy)
    value = math.sqrt(max(solution.objective_value, 0.0))
    return ENormPoint(
        E=float(energy),
        value=value,
        mu_star=solution.mu_star,
        witness=solution.witness,
        gap=solution.gap,
    )


def check_point(point: ENormPoint, pair: OperatorPair, policy: NumericPolicy = DEFAULT_POLICY) -> list[str]:
    """Invariant violations of one ENormPoint (empty when valid)."""
    problems = []
    energy = float(np.einsum("ij,ji->", np.asarray(pair.G), point.witness).real)
    trace = float(np.trace(point.witness).real)
    if energy > point.E * (1 + policy.witness_energy_rel_tol):
        problems.append(f"witness energy {energy!r} exceeds E={point.E!r}")
    if abs(trace - 1) > policy.density_trace_tol:
        problems.append(f"witness trace {trace!r} differs from 1")
    if point.gap > policy.gap_rel_tol * (1 + point.value**2):
        problems.append(f"primal-dual gap {point.gap!r} too large at E={point.E!r}")
    return problems


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------


def enorm_oracle(
    pair: OperatorPair,
    energy: float,
    budget: int = 10_000,
    seed: int | np.random.SeedSequence = 0,
    policy: NumericPolicy | None = None,
) -> tuple[float, float]:
    """
    Independent two-sided bracket lower ≤ ‖A‖_E^G ≤ upper.

    The lower bound collects feasible states: seeded random pure states mixed with the
    ground state of G until the energy constraint holds, eigenvectors of A†A that are
    feasible as-is, and pairwise mixtures of top eigenvectors of A†A − μG over a μ grid.
    The upper bound is the smallest dual value on the same grid. The grid starts with
    ``oracle_grid_points`` points on [0, μ_cap] and is zoomed onto the best cell
    ``oracle_refinements`` times.
    """
    policy = policy or pair.policy
    pair.require_feasible(energy)
    X = np.asarray(pair.objective)
    G = np.asarray(pair.G)
    rng = make_rng(seed)

    candidates_obj: list[float] = []
    candidates_energy: list[float] = []

    # (i) random pure states mixed with the ground state
    ground = pair.ground_state
    ground_obj, ground_energy = _quadratic(X, ground), _quadratic(G, ground)
    if budget > 0:
        states = rng.standard_normal((budget, pair.dim)) + 1j * rng.standard_normal((budget, pair.dim))
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        objs = np.einsum("bi,ij,bj->b", states.conj(), X, states).real
        energies = np.einsum("bi,ij,bj->b", states.conj(), G, states).real
        excess = energies > energy
        weight = np.ones(budget)
        weight[excess] = (energy - ground_energy) / (energies[excess] - ground_energy)
        random_best = float(np.max(weight * objs + (1 - weight) * ground_obj))
    else:
        random_best = ground_obj if ground_energy <= energy else -np.inf

    # (ii) eigenvectors of A†A
    eigvals, eigvecs = scipy.linalg.eigh(X)
    for k in range(pair.dim):
        candidates_obj.append(_quadratic(X, eigvecs[:, k]))
        candidates_energy.append(_quadratic(G, eigvecs[:, k]))

    # (iii) μ grid with zoom refinement
    pencil = _Pencil(X, G, policy)
    x_max = float(eigvals[-1])
    mu_cap = policy.oracle_mu_cap_factor * max(x_max, 1e-12) / max(energy - pair.lambda_min, 1e-6)
    lo, hi = 0.0, mu_cap
    upper_sq = np.inf
    for _ in range(policy.oracle_refinements + 1):
        grid = np.linspace(lo, hi, policy.oracle_grid_points)
        duals = np.empty(grid.size)
        for i, mu in enumerate(grid):
            space = pencil.eigenspace(float(mu))
            duals[i] = space.top + mu * energy
            candidates_obj.extend((space.low_objective, space.high_objective))
            candidates_energy.extend((space.low_energy, space.high_energy))
        best = int(np.argmin(duals))
        upper_sq = min(upper_sq, float(duals[best]))
        lo = float(grid[max(best - 1, 0)])
        hi = float(grid[min(best + 1, grid.size - 1)])

    mixture_best, *_ = _best_mixture(np.array(candidates_obj), np.array(candidates_energy), energy)
    lower_sq = max(random_best, mixture_best)
    lower = math.sqrt(max(lower_sq, 0.0))
    upper = math.sqrt(max(upper_sq, 0.0))
    return lower, upper


# ---------------------------------------------------------------------------
# Primal pure-state solver
# ---------------------------------------------------------------------------


class _EnergyBall:
    """Projections onto {‖φ‖ ≤ 1} ∩ {⟨φ|G|φ⟩ ≤ E} via the eigenbasis of G."""

    def __init__(self, energy_op: np.ndarray, energy: float):
        self.levels, self.basis = scipy.linalg.eigh(energy_op)
        self.levels = np.clip(self.levels, 0.0, None)
        self.energy = energy

    def project(self, vector: np.ndarray) -> np.ndarray:
        coeffs = self.basis.conj().T @ vector
        weights = np.abs(coeffs) ** 2

        def excess(nu: float) -> float:
            return float(np.sum(self.levels * weights / (1 + nu * self.levels) ** 2)) - self.energy

        if excess(0.0) > 0:
            upper = 1.0
            while excess(upper) > 0:
                upper *= 2
                if upper > 1e300:
                    break
            nu = scipy.optimize.brentq(excess, 0.0, upper, xtol=1e-15, rtol=1e-15)
            coeffs = coeffs / (1 + nu * self.levels)
        projected = self.basis @ coeffs
        norm = np.linalg.norm(projected)
        return projected / norm if norm > 1 else projected


def _real_embedding(matrix: np.ndarray) -> np.ndarray:
    """Symmetric real form M with φ†Xφ = xᵀMx for x = (Re φ, Im φ)."""
    re, im = matrix.real, matrix.imag
    return np.block([[re, -im], [im, re]])


def _polish(start: np.ndarray, X: np.ndarray, G: np.ndarray, energy: float, policy: NumericPolicy) -> np.ndarray:
    dim = start.shape[0]
    mx, mg = _real_embedding(X), _real_embedding(G)
    x0 = np.concatenate([start.real, start.imag])
    result = scipy.optimize.minimize(
        lambda x: -float(x @ mx @ x),
        x0,
        jac=lambda x: -2 * (mx @ x),
        method="SLSQP",
        constraints=[
            {"type": "ineq", "fun": lambda x: 1 - float(x @ x), "jac": lambda x: -2 * x},
            {"type": "ineq", "fun": lambda x: energy - float(x @ mg @ x), "jac": lambda x: -2 * (mg @ x)},
        ],
        options={"ftol": policy.primal_slsqp_ftol, "maxiter": policy.primal_slsqp_maxiter},
    )
    return result.x[:dim] + 1j * result.x[dim:]


def _shrink_feasible(vector: np.ndarray, G: np.ndarray, energy: float, ground_energy: float) -> np.ndarray:
    """Scale so that φφ† padded with the ground state stays within the energy budget."""
    norm_sq = float(np.vdot(vector, vector).real)
    vec_energy = _quadratic(G, vector)
    scale_sq = 1.0
    if norm_sq > 1:
        scale_sq = 1 / norm_sq
    excess = vec_energy - norm_sq * ground_energy
    if excess > 0:
        scale_sq = min(scale_sq, (energy - ground_energy) / excess)
    return vector * math.sqrt(max(scale_sq, 0.0)) if scale_sq < 1 else vector


def enorm_primal_pure(
    pair: OperatorPair,
    energy: float,
    seed: int | np.random.SeedSequence = 0,
    policy: NumericPolicy | None = None,
) -> ENormPoint:
    """
    Maximize ‖Aφ‖ over {‖φ‖ ≤ 1, ‖√G φ‖² ≤ E} by multi-start projected ascent.

    Each start takes power steps on A†A followed by projection onto the energy
    ellipsoid and the unit ball; the best starts are polished with SLSQP on the
    real embedding. Requires the ground energy of G to vanish, which is what allows
    sub-normalized vectors.
    """
    policy = policy or pair.policy
    if not pair.ground_state_zero:
        raise PreconditionError(
            f"pure-state formulation requires λ_min(G) ≈ 0, got λ_min(G)={pair.lambda_min!r}"
        )
    if pair.dim > policy.primal_max_dim:
        raise ResourceGuardError(f"primal solver limited to dim ≤ {policy.primal_max_dim}, got {pair.dim}")
    pair.require_feasible(energy)

    X = np.asarray(pair.objective)
    G = np.asarray(pair.G)
    ball = _EnergyBall(G, energy)
    rng = make_rng(seed)

    eigvals, eigvecs = scipy.linalg.eigh(X)
    starts: list[np.ndarray] = list(eigvecs.T)
    starts.append(np.asarray(pair.ground_state))
    x_max = float(eigvals[-1])
    mu_cap = policy.oracle_mu_cap_factor * max(x_max, 1e-12) / max(energy - pair.lambda_min, 1e-6)
    for mu in np.linspace(0.0, mu_cap, policy.primal_mu_seeds):
        starts.append(dense_top_eigensystem(X - mu * G, 1)[1][:, 0])
    for _ in range(policy.primal_random_starts):
        vec = rng.standard_normal(pair.dim) + 1j * rng.standard_normal(pair.dim)
        starts.append(vec / np.linalg.norm(vec))

    ascended = []
    for start in starts:
        phi = ball.project(start)
        best_phi, best_obj = phi, _quadratic(X, phi)
        for _ in range(policy.primal_ascent_iterations):
            step = X @ phi
            norm = np.linalg.norm(step)
            if norm == 0:
                break
            phi = ball.project(step / norm)
            obj = _quadratic(X, phi)
            if obj > best_obj:
                best_phi, best_obj = phi, obj
        ascended.append((best_obj, best_phi))
    ascended.sort(key=lambda item: -item[0])

    best_value_sq, best_phi = -np.inf, ascended[0][1]
    for obj, phi in ascended[: policy.primal_polish_starts]:
        candidates = [phi]
        try:
            candidates.append(_polish(phi, X, G, energy, policy))
        except (ValueError, np.linalg.LinAlgError) as exc:
            logger.debug("SLSQP polish failed: %s", exc)
        for candidate in candidates:
            feasible = _shrink_feasible(candidate, G, energy, pair.lambda_min)
            value_sq = _quadratic(X, feasible)
            if value_sq > best_value_sq:
                best_value_sq, best_phi = value_sq, feasible

    value = math.sqrt(max(best_value_sq, 0.0))
    mu_hat = _kkt_multiplier(best_phi, X, G)
    dual_bound = float(dense_top_eigensystem(X - mu_hat * G, 1)[0][0]) + mu_hat * energy
    norm_sq = float(np.vdot(best_phi, best_phi).real)
    ground = np.asarray(pair.ground_state)
    witness = np.outer(best_phi, best_phi.conj()) + max(1 - norm_sq, 0.0) * np.outer(ground, ground.conj())
    return ENormPoint(
        E=float(energy),
        value=value,
        mu_star=mu_hat,
        witness=witness,
        gap=max(dual_bound - value**2, 0.0),
    )


def _kkt_multiplier(phi: np.ndarray, X: np.ndarray, G: np.ndarray) -> float:
    """μ ≥ 0 from the stationarity condition Xφ = αφ + μGφ (least squares)."""
    lhs = np.stack([phi, G @ phi], axis=1)
    rhs = X @ phi
    system = np.vstack([lhs.real, lhs.imag])
    target = np.concatenate([rhs.real, rhs.imag])
    (_, mu), *_ = np.linalg.lstsq(system, target, rcond=None)
    return max(float(mu), 0.0)


def enorm_purified(
    pair: OperatorPair,
    energy: float,
    n: int,
    seed: int | np.random.SeedSequence = 0,
    policy: NumericPolicy | None = None,
) -> float:
    """Pure-state E-norm of A⊗I_n with respect to G⊗I_n."""
    policy = policy or pair.policy
    if n < 1:
        raise ValidationError(f"ancilla dimension must be >= 1, got {n}")
    if n * pair.dim > policy.primal_max_dim:
        raise ResourceGuardError(
            f"purified dimension {n * pair.dim} exceeds the limit {policy.primal_max_dim}"
        )
    identity = np.eye(n, dtype=np.complex128)
    extended = OperatorPair(tensor(pair.A, identity), tensor(pair.G, identity), policy)
    return enorm_primal_pure(extended, energy, seed, policy).value


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------


def enorm_curve(
    pair: OperatorPair,
    grid: Sequence[float],
    policy: NumericPolicy | None = None,
    threads: int | None = None,
) -> ENormCurve:
    """Evaluate ‖A‖_E^G on a sorted grid and validate the curve invariants."""
    policy = policy or pair.policy
    energies = [float(e) for e in grid]
    if not energies:
        raise ValidationError("energy grid is empty")
    if any(b <= a for a, b in zip(energies, energies[1:], strict=False)):
        raise ValidationError(f"energy grid must be strictly increasing, got {energies}")

    def evaluate(energy: float) -> ENormPoint:
        try:
            return enorm_dual(pair, energy, policy)
        except Exception as exc:
            raise CurvePointError(energy, exc) from exc

    workers = threads or RuntimeSettings().threads
    if workers > 1 and len(energies) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = tuple(pool.map(evaluate, energies))
    else:
        points = tuple(evaluate(e) for e in energies)
    return ENormCurve(pair=pair, points=points).validate(policy)


def curve_violations(
    energies: np.ndarray,
    values: np.ndarray,
    policy: NumericPolicy = DEFAULT_POLICY,
    ground_zero: bool = True,
) -> list[str]:
    """Monotonicity of value, concavity of value², and monotone value²/E.

    The value²/E check needs a zero ground energy; pass ``ground_zero=False`` when λ_min(G) > 0.
    """
    problems = []
    squares = values**2
    scale = 1 + float(np.max(squares)) if squares.size else 1.0
    for k in range(len(values) - 1):
        if values[k + 1] < values[k] - policy.monotone_slack * (1 + values[k]):
            problems.append(f"value decreases between E={energies[k]!r} and E={energies[k + 1]!r}")
        ratio_slack = policy.monotone_slack * scale / energies[k]
        if ground_zero and squares[k + 1] / energies[k + 1] > squares[k] / energies[k] + ratio_slack:
            problems.append(f"value²/E increases between E={energies[k]!r} and E={energies[k + 1]!r}")
    for k in range(len(values) - 2):
        left = (squares[k + 1] - squares[k]) / (energies[k + 1] - energies[k])
        right = (squares[k + 2] - squares[k + 1]) / (energies[k + 2] - energies[k + 1])
        spacing = min(energies[k + 1] - energies[k], energies[k + 2] - energies[k + 1])
        if right - left > policy.concavity_slack * scale / spacing:
            problems.append(
                f"value² not concave on ({energies[k]!r}, {energies[k + 1]!r}, {energies[k + 2]!r})"
            )
    return problems


def chain_violations(curve: ENormCurve, policy: NumericPolicy = DEFAULT_POLICY) -> list[tuple[float, float]]:
    """Pairs E₁ < E₂ breaking ‖A‖_{E₁} ≤ ‖A‖_{E₂} ≤ √(E₂/E₁)·‖A‖_{E₁}.

    The upper bound is only checked when the ground energy of G is zero.
    """
    broken = []
    energies, values = curve.energies, curve.values
    for i in range(len(energies)):
        for j in range(i + 1, len(energies)):
            slack = policy.chain_slack * (1 + values[j])
            ratio = math.sqrt(energies[j] / energies[i])
            upper_broken = curve.pair.ground_state_zero and values[j] > ratio * values[i] + slack
            if values[i] > values[j] + slack or upper_broken:
                broken.append((float(energies[i]), float(energies[j])))
    return broken
