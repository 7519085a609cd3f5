"""
Dense complex linear algebra substrate.

Matrices are plain ``numpy`` arrays of dtype complex128. The ``as_*`` constructors
validate the structural invariants of each role (general operator, Hermitian
operator, pure state, density matrix) and return read-only copies, so values are
immutable after construction and safe to share between threads.
"""

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from enorm.config import DEFAULT_POLICY, NumericPolicy
from enorm.errors import ValidationError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
HermitianMatrix = npt.NDArray[np.complex128]
PureState = npt.NDArray[np.complex128]
DensityMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]


def _frozen(array: npt.NDArray) -> npt.NDArray:
    array.setflags(write=False)
    return array


# ---------------------------------------------------------------------------
# Validating constructors
# ---------------------------------------------------------------------------


def as_complex_matrix(data: npt.ArrayLike, *, square: bool = True) -> ComplexMatrix:
    """Copy ``data`` into a read-only complex matrix."""
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("matrix has non-finite entries")
    return _frozen(matrix)


def max_asymmetry(matrix: ComplexMatrix) -> float:
    """Largest entry of |H − H†| relative to the largest entry of |H|."""
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(matrix - matrix.conj().T))) / scale


def as_hermitian(data: npt.ArrayLike, policy: NumericPolicy = DEFAULT_POLICY) -> HermitianMatrix:
    """Validate Hermiticity and return the symmetrized read-only matrix."""
    matrix = np.array(as_complex_matrix(data))
    asymmetry = max_asymmetry(matrix)
    if asymmetry > policy.hermitian_tol:
        raise ValidationError(
            f"matrix is not Hermitian: max relative asymmetry {asymmetry:.3e} "
            f"exceeds {policy.hermitian_tol:.1e}"
        )
    return _frozen((matrix + matrix.conj().T) / 2)


def as_pure_state(data: npt.ArrayLike, policy: NumericPolicy = DEFAULT_POLICY) -> PureState:
    """Validate a (possibly sub-normalized) state vector."""
    vector = np.array(data, dtype=np.complex128)
    if vector.ndim != 1 or vector.size == 0:
        raise ValidationError(f"expected a non-empty vector, got shape {vector.shape}")
    norm_sq = float(np.vdot(vector, vector).real)
    if norm_sq > 1 + policy.norm_tol:
        raise ValidationError(f"state vector has squared norm {norm_sq!r} > 1")
    return _frozen(vector)


def as_density_matrix(data: npt.ArrayLike, policy: NumericPolicy = DEFAULT_POLICY) -> DensityMatrix:
    """Validate a density matrix: Hermitian, positive semidefinite, unit trace."""
    rho = as_hermitian(data, policy)
    trace = float(np.trace(rho).real)
    if abs(trace - 1) > policy.density_trace_tol:
        raise ValidationError(f"density matrix has trace {trace!r}, expected 1")
    lowest = float(scipy.linalg.eigvalsh(rho)[0])
    if lowest < -policy.density_eig_tol:
        raise ValidationError(f"density matrix has negative eigenvalue {lowest!r}")
    return rho


def pure_to_density(phi: PureState) -> DensityMatrix:
    """Projector |φ⟩⟨φ| (not renormalized)."""
    return _frozen(np.outer(phi, phi.conj()))


# ---------------------------------------------------------------------------
# Spectral routines
# ---------------------------------------------------------------------------


def hermitian_eigensystem(
    matrix: HermitianMatrix, policy: NumericPolicy = DEFAULT_POLICY
) -> tuple[RealVector, ComplexMatrix]:
    """
    Full eigendecomposition of a Hermitian matrix.

    Returns:
        Tuple of (ascending eigenvalues, orthonormal eigenvector columns)
    """
    asymmetry = max_asymmetry(np.asarray(matrix))
    if asymmetry > policy.hermitian_tol:
        raise ValidationError(f"eigensystem requested for non-Hermitian matrix (max asymmetry {asymmetry:.3e})")
    eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    return eigenvalues, eigenvectors


def bandwidth(matrix: npt.NDArray) -> int:
    """Largest |i − j| over nonzero entries."""
    rows, cols = np.nonzero(matrix)
    if rows.size == 0:
        return 0
    return int(np.max(np.abs(rows - cols)))


def to_upper_band(matrix: HermitianMatrix, width: int) -> ComplexMatrix:
    """Upper banded storage: ``band[width + i - j, j] == matrix[i, j]`` for i ≤ j."""
    dim = matrix.shape[0]
    band = np.zeros((width + 1, dim), dtype=np.complex128)
    for offset in range(width + 1):
        band[width - offset, offset:] = np.diagonal(matrix, offset)
    return band


def banded_top_eigensystem(band: ComplexMatrix, count: int) -> tuple[RealVector, ComplexMatrix]:
    """Largest ``count`` eigenpairs of a Hermitian matrix in upper banded storage, descending."""
    dim = band.shape[1]
    count = min(count, dim)
    eigenvalues, eigenvectors = scipy.linalg.eig_banded(
        band, lower=False, select="i", select_range=(dim - count, dim - 1)
    )
    return eigenvalues[::-1], eigenvectors[:, ::-1]


def dense_top_eigensystem(matrix: HermitianMatrix, count: int) -> tuple[RealVector, ComplexMatrix]:
    """Largest ``count`` eigenpairs of a dense Hermitian matrix, descending."""
    dim = matrix.shape[0]
    count = min(count, dim)
    eigenvalues, eigenvectors = scipy.linalg.eigh(matrix, subset_by_index=[dim - count, dim - 1])
    return eigenvalues[::-1], eigenvectors[:, ::-1]


def use_banded(dim: int, width: int, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    return dim >= policy.banded_min_dim and width <= dim * policy.banded_max_ratio


def top_eigensystem(
    matrix: HermitianMatrix, count: int, policy: NumericPolicy = DEFAULT_POLICY
) -> tuple[RealVector, ComplexMatrix]:
    """
    Largest ``count`` eigenpairs, descending.

    Narrow-band matrices (the Fock-basis pencils are pentadiagonal) go through the
    LAPACK banded solver; everything else through the dense subset solver.
    """
    width = bandwidth(matrix)
    if use_banded(matrix.shape[0], width, policy):
        return banded_top_eigensystem(to_upper_band(matrix, width), count)
    return dense_top_eigensystem(matrix, count)


# ---------------------------------------------------------------------------
# Products and expectations
# ---------------------------------------------------------------------------


def gram(matrix: ComplexMatrix) -> HermitianMatrix:
    """A†A, symmetrized."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"gram requires a square matrix, got shape {a.shape}")
    product = a.conj().T @ a
    return _frozen((product + product.conj().T) / 2)


def expectation(matrix: HermitianMatrix, state: npt.NDArray[np.complex128]) -> float:
    """Tr(Hρ) for a density matrix, ⟨φ|H|φ⟩ for a state vector."""
    h = np.asarray(matrix)
    s = np.asarray(state)
    if s.shape[0] != h.shape[0]:
        raise ValidationError(f"dimension mismatch: operator {h.shape[0]}, state {s.shape[0]}")
    if s.ndim == 1:
        return float(np.vdot(s, h @ s).real)
    if s.shape != h.shape:
        raise ValidationError(f"dimension mismatch: operator {h.shape}, density matrix {s.shape}")
    return float(np.einsum("ij,ji->", h, s).real)


def tensor(left: ComplexMatrix, right: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product, entry ((i·p+k),(j·q+l)) = left[i, j]·right[k, l]."""
    return _frozen(np.kron(np.asarray(left, dtype=np.complex128), np.asarray(right, dtype=np.complex128)))


# ---------------------------------------------------------------------------
# Deterministic sampling
# ---------------------------------------------------------------------------


def make_rng(seed: int | np.random.SeedSequence | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure_state(dim: int, seed: int | np.random.SeedSequence | np.random.Generator) -> PureState:
    """Unit vector with complex standard normal entries, normalized."""
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    rng = make_rng(seed)
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return _frozen(vector / np.linalg.norm(vector))


def random_complex_matrix(
    rows: int, cols: int, seed: int | np.random.SeedSequence | np.random.Generator, scale: float = 1.0
) -> ComplexMatrix:
    rng = make_rng(seed)
    matrix = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) * (
        scale / np.sqrt(2)
    )
    return _frozen(matrix)


def random_unitary(dim: int, seed: int | np.random.SeedSequence | np.random.Generator) -> ComplexMatrix:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(np.asarray(random_complex_matrix(dim, dim, seed)))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return _frozen(q * phases)


def random_psd(
    dim: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
    spread: float = 4.0,
    ground_zero: bool = True,
) -> HermitianMatrix:
    """
    Random PSD matrix with spectrum drawn uniformly from [0, spread].

    With ``ground_zero`` the smallest eigenvalue is exactly 0 so the ground-energy
    condition holds.
    """
    rng = make_rng(seed)
    spectrum = np.sort(rng.uniform(0.0, spread, size=dim))
    if ground_zero:
        spectrum[0] = 0.0
    unitary = np.asarray(random_unitary(dim, rng))
    matrix = (unitary * spectrum) @ unitary.conj().T
    return _frozen((matrix + matrix.conj().T) / 2)
