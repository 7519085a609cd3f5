"""
Tensor extensions and channel energy amplification.

Two numerical experiments on top of the dual solver: the Monte-Carlo check of the
continuity estimate ‖A⊗I_K(φ−ψ)‖ ≤ ε‖A‖_{4E/ε²} for energy-bounded vectors on H⊗K,
and the energy amplification factor Y_Φ(E) = sup{Tr G Φ_*(ρ) | Tr Gρ ≤ E} of a map
given by Kraus operators.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.special

from enorm.config import DEFAULT_POLICY, NumericPolicy
from enorm.errors import ConfigError, PreconditionError, SamplingError, ValidationError
from enorm.services.linalg import (
    ComplexMatrix,
    DensityMatrix,
    HermitianMatrix,
    PureState,
    as_complex_matrix,
    as_hermitian,
    as_pure_state,
    make_rng,
    random_complex_matrix,
    random_pure_state,
    tensor,
)
from enorm.services.solver import OperatorPair, curve_violations, enorm_dual, maximize_energy_constrained

logger = logging.getLogger(__name__)

CHANNEL_NAMES = ("identity", "ground_collapse", "pure_loss", "random")


# ---------------------------------------------------------------------------
# Kraus maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KrausMap:
    """Completely positive trace non-increasing map Φ_*(ρ) = Σ KρK†."""

    kraus_ops: tuple[ComplexMatrix, ...]
    policy: NumericPolicy = field(default=DEFAULT_POLICY, repr=False)

    def __post_init__(self):
        if not self.kraus_ops:
            raise ValidationError("a Kraus map needs at least one operator")
        ops = tuple(as_complex_matrix(k) for k in self.kraus_ops)
        dims = {k.shape for k in ops}
        if len(dims) != 1:
            raise ValidationError(f"Kraus operators have mismatched shapes {sorted(dims)}")
        total = sum(k.conj().T @ k for k in ops)
        largest = float(scipy.linalg.eigvalsh((total + total.conj().T) / 2)[-1])
        if largest > 1 + self.policy.psd_tol:
            raise ValidationError(
                f"Kraus operators are not trace non-increasing: λ_max(ΣK†K)={largest!r} > 1"
            )
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return int(self.kraus_ops[0].shape[0])

    def predual(self, rho: DensityMatrix) -> DensityMatrix:
        """Schrödinger picture Σ KρK†."""
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)

    def heisenberg(self, observable: HermitianMatrix) -> HermitianMatrix:
        """Heisenberg picture Σ K†XK."""
        result = sum(k.conj().T @ observable @ k for k in self.kraus_ops)
        return (result + result.conj().T) / 2


def identity_channel(d: int) -> KrausMap:
    return KrausMap((np.eye(d, dtype=np.complex128),))


def ground_collapse_channel(d: int) -> KrausMap:
    """Sends every input to |0⟩⟨0| through the Kraus family {|0⟩⟨i|}."""
    ops = []
    for i in range(d):
        k = np.zeros((d, d), dtype=np.complex128)
        k[0, i] = 1.0
        ops.append(k)
    return KrausMap(tuple(ops))


def pure_loss_channel(d: int, eta: float) -> KrausMap:
    """
    Bosonic pure-loss channel with transmissivity ``eta`` on the first ``d`` Fock levels.

    K_l = Σ_n √C(n, l) η^{(n−l)/2} (1−η)^{l/2} |n−l⟩⟨n|; the Heisenberg image of N is ηN.
    """
    if not 0 <= eta <= 1:
        raise ValidationError(f"transmissivity must lie in [0, 1], got {eta!r}")
    levels = np.arange(d)
    ops = []
    for lost in range(d):
        k = np.zeros((d, d), dtype=np.complex128)
        n = levels[lost:]
        k[n - lost, n] = np.sqrt(scipy.special.binom(n, lost) * eta ** (n - lost) * (1 - eta) ** lost)
        ops.append(k)
    return KrausMap(tuple(ops))


def random_channel(d: int, n_kraus: int, seed: int | np.random.SeedSequence | np.random.Generator) -> KrausMap:
    """Trace-preserving map from a random Stinespring isometry V: K_i = V[i·d:(i+1)·d]."""
    ginibre = np.asarray(random_complex_matrix(n_kraus * d, d, seed))
    isometry, _ = np.linalg.qr(ginibre)
    return KrausMap(tuple(isometry[i * d : (i + 1) * d, :] for i in range(n_kraus)))


def build_channel(
    name: str,
    d: int,
    seed: int = 0,
    eta: float = 0.5,
    n_kraus: int = 3,
) -> KrausMap:
    builders = {
        "identity": lambda: identity_channel(d),
        "ground_collapse": lambda: ground_collapse_channel(d),
        "pure_loss": lambda: pure_loss_channel(d, eta),
        "random": lambda: random_channel(d, n_kraus, seed),
    }
    if name not in builders:
        raise ConfigError(f"unknown channel '{name}'. Allowed: {', '.join(CHANNEL_NAMES)}")
    return builders[name]()


# ---------------------------------------------------------------------------
# Energy amplification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class YCurve:
    energies: tuple[float, ...]
    values: tuple[float, ...]
    violations: tuple[str, ...]
    max_ratio: float


def y_phi(
    channel: KrausMap,
    energy_op: npt.ArrayLike,
    energy: float,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Y_Φ(E): largest output energy Tr GΦ_*(ρ) over inputs with Tr Gρ ≤ E."""
    G = as_hermitian(energy_op, policy)
    if G.shape[0] != channel.dim:
        raise ValidationError(f"G has dim {G.shape[0]} but the channel acts on dim {channel.dim}")
    spectrum = scipy.linalg.eigvalsh(G)
    if spectrum[0] < -policy.psd_tol:
        raise ValidationError(f"G is not positive semidefinite: λ_min(G)={spectrum[0]!r}")
    objective = as_hermitian(channel.heisenberg(G), policy)
    return maximize_energy_constrained(objective, G, energy, float(spectrum[0]), policy).objective_value


def y_curve(
    channel: KrausMap,
    energy_op: npt.ArrayLike,
    grid: Sequence[float],
    policy: NumericPolicy = DEFAULT_POLICY,
) -> YCurve:
    """Y_Φ on a grid with a report on monotonicity, concavity and boundedness of Y(E)/E."""
    energies = np.array([float(e) for e in grid])
    values = np.array([y_phi(channel, energy_op, e, policy) for e in energies])
    ground = float(scipy.linalg.eigvalsh(as_hermitian(energy_op, policy))[0])
    # √Y turns the value² checks of E-norm curves into checks on Y itself
    problems = curve_violations(
        energies, np.sqrt(np.maximum(values, 0.0)), policy, ground_zero=ground <= policy.ground_zero_tol
    )
    return YCurve(
        energies=tuple(energies.tolist()),
        values=tuple(values.tolist()),
        violations=tuple(problems),
        max_ratio=float(np.max(values / energies)),
    )


# ---------------------------------------------------------------------------
# Extension inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConstrainedVectorSample:
    """Two vectors of H⊗K within energy E of √G⊗I and within eps of each other."""

    phi: PureState
    psi: PureState
    E: float
    eps: float


@dataclass(frozen=True)
class ExtensionCheck:
    lhs: float
    rhs: float
    margin: float

    @property
    def violated(self) -> bool:
        return self.margin < -1e-8 * (1 + self.rhs)


@dataclass(frozen=True)
class ExtensionSummary:
    samples: int
    violations: int
    worst_margin: float


def _bisect_largest(feasible, iterations: int) -> float:
    """Largest t in [0, 1] with feasible(t), for feasible sets that are intervals containing 0."""
    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def sample_constrained_pair(
    pair: OperatorPair,
    k_dim: int,
    energy: float,
    eps: float,
    seed: int | np.random.SeedSequence | np.random.Generator = 0,
    policy: NumericPolicy | None = None,
) -> ConstrainedVectorSample:
    """
    Draw φ, ψ ∈ H⊗K with ⟨G⊗I⟩ ≤ E for both and ‖φ − ψ‖ ≤ eps.

    φ mixes a random unit vector with the ground direction of G⊗I until its energy hits
    a random target in (0, E]; ψ moves from φ along a random direction of length at
    most eps, shortened as needed to stay feasible.
    """
    policy = policy or pair.policy
    if not pair.ground_state_zero:
        raise PreconditionError(
            f"sampling energy-bounded vectors requires λ_min(G) ≈ 0, got λ_min(G)={pair.lambda_min!r}"
        )
    if k_dim < 1:
        raise ValidationError(f"k_dim must be >= 1, got {k_dim}")
    if eps < 0 or energy <= 0:
        raise ValidationError(f"need eps >= 0 and E > 0, got eps={eps!r}, E={energy!r}")

    rng = make_rng(seed)
    G = np.asarray(tensor(pair.G, np.eye(k_dim)))
    ground = np.kron(np.asarray(pair.ground_state), np.eye(k_dim)[0])
    direction = np.asarray(random_pure_state(pair.dim * k_dim, rng))
    target = energy * (1 - rng.uniform(0.0, 1.0))

    def energy_of(vector: np.ndarray) -> float:
        return float(np.vdot(vector, G @ vector).real)

    def line(t: float) -> np.ndarray:
        return t * direction + (1 - t) * ground

    t = _bisect_largest(lambda s: energy_of(line(s)) <= target, policy.projection_max_iterations)
    phi = line(t)
    if energy_of(phi) > energy:
        raise SamplingError(
            f"could not bring a sample below E={energy!r} in {policy.projection_max_iterations} iterations"
        )

    step = rng.standard_normal(phi.size) + 1j * rng.standard_normal(phi.size)
    step *= eps * rng.uniform(0.0, 1.0) / np.linalg.norm(step)
    s = _bisect_largest(
        lambda r: energy_of(phi + r * step) <= energy and np.vdot(phi + r * step, phi + r * step).real <= 1.0,
        policy.projection_max_iterations,
    )
    psi = phi + s * step
    return ConstrainedVectorSample(
        phi=as_pure_state(phi, policy),
        psi=as_pure_state(psi, policy),
        E=float(energy),
        eps=float(eps),
    )


def extension_inequality_check(
    pair: OperatorPair,
    sample: ConstrainedVectorSample,
    norm_at=None,
) -> ExtensionCheck:
    """
    lhs = ‖(A⊗I_K)(φ − ψ)‖ against rhs = eps·‖A‖_{4E/eps²}.

    ``norm_at`` maps an energy to ‖A‖_E; defaults to a fresh dual solve.
    """
    if sample.eps <= 0:
        raise ValidationError(f"extension check needs eps > 0, got {sample.eps!r}")
    k_dim = sample.phi.size // pair.dim
    difference = (np.asarray(sample.phi) - np.asarray(sample.psi)).reshape(pair.dim, k_dim)
    lhs = float(np.linalg.norm(np.asarray(pair.A) @ difference))
    reach = 4 * sample.E / sample.eps**2
    norm = norm_at(reach) if norm_at is not None else enorm_dual(pair, reach).value
    rhs = sample.eps * norm
    return ExtensionCheck(lhs=lhs, rhs=rhs, margin=rhs - lhs)


def extension_sweep(
    pairs: Sequence[OperatorPair],
    samples: int,
    k_dims: Sequence[int] = (1, 2, 3),
    energies: Sequence[float] = (0.5, 1.0, 2.0),
    eps_values: Sequence[float] = (0.05, 0.1, 0.25, 0.5),
    seed: int = 0,
) -> ExtensionSummary:
    """Round-robin the sample budget over every (pair, k, E, eps) configuration."""
    configs = list(product(range(len(pairs)), k_dims, energies, eps_values))
    if not configs:
        raise ValidationError("extension sweep needs at least one configuration")
    norms: dict[tuple[int, float], float] = {}
    violations = 0
    worst = math.inf
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        which, k_dim, energy, eps = configs[index % len(configs)]
        pair = pairs[which]

        def norm_at(reach: float, which: int = which, pair: OperatorPair = pair) -> float:
            key = (which, reach)
            if key not in norms:
                norms[key] = enorm_dual(pair, reach).value
            return norms[key]

        sample = sample_constrained_pair(pair, k_dim, energy, eps, child)
        check = extension_inequality_check(pair, sample, norm_at)
        worst = min(worst, check.margin)
        if check.violated:
            violations += 1
            logger.warning(
                "extension inequality violated: pair=%d k=%d E=%s eps=%s margin=%s",
                which,
                k_dim,
                energy,
                eps,
                check.margin,
            )
    logger.info("extension sweep: %d samples, %d violations, worst margin %s", samples, violations, worst)
    return ExtensionSummary(samples=samples, violations=violations, worst_margin=float(worst))
