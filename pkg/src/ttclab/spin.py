"""Collective spin operators and dense spectral decompositions.

All matrices act on the (N+1)-dimensional symmetric sector of N two-mode
bosons (total spin S = N/2).  Basis states are ordered by the S_z
eigenvalue m = -N/2, ..., +N/2 (ascending), so S_z is diagonal and S_x is
real tridiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BasisError, ContractViolationError

__all__ = [
    "SpinBasisSpec",
    "HermitianEigenSystem",
    "UnitaryEigenSystem",
    "build_sx",
    "build_sy",
    "build_sz",
    "eig_hermitian",
    "expm_hermitian",
    "eig_unitary",
]

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class SpinBasisSpec:
    """Dicke-basis layout for N bosons on two modes."""

    N: int

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise BasisError(f"particle count must be a positive integer, got N={self.N!r}")

    @property
    def D(self) -> int:
        """Hilbert-space dimension N + 1."""
        return self.N + 1

    @property
    def S(self) -> float:
        """Total spin N / 2."""
        return self.N / 2.0

    @property
    def m_values(self) -> np.ndarray:
        """S_z eigenvalues -N/2, -N/2+1, ..., +N/2 (half-integers for odd N)."""
        return -self.S + np.arange(self.D, dtype=float)


@dataclass(frozen=True, eq=False)
class HermitianEigenSystem:
    """Eigenvalues (ascending) and phase-fixed column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class UnitaryEigenSystem:
    """Eigenphases in [-pi, pi) (ascending) and orthonormal column eigenvectors."""

    eigenphases: np.ndarray
    eigenvectors: np.ndarray


def _ladder_couplings(spec: SpinBasisSpec) -> np.ndarray:
    """sqrt(S(S+1) - m(m+1)) for the D-1 links m <-> m+1."""
    m = spec.m_values[:-1]
    return np.sqrt(spec.S * (spec.S + 1.0) - m * (m + 1.0))


def build_sz(spec: SpinBasisSpec) -> np.ndarray:
    """S_z: diagonal matrix of the m values."""
    return np.diag(spec.m_values).astype(complex)


def build_sx(spec: SpinBasisSpec) -> np.ndarray:
    """S_x: real symmetric tridiagonal ladder matrix."""
    c = _ladder_couplings(spec)
    sx = np.zeros((spec.D, spec.D), dtype=complex)
    i = np.arange(spec.D - 1)
    sx[i, i + 1] = c / 2.0
    sx[i + 1, i] = c / 2.0
    return sx


def build_sy(spec: SpinBasisSpec) -> np.ndarray:
    """S_y, with signs fixed so that [S_x, S_y] = i S_z."""
    c = _ladder_couplings(spec)
    sy = np.zeros((spec.D, spec.D), dtype=complex)
    i = np.arange(spec.D - 1)
    sy[i, i + 1] = 1j * c / 2.0
    sy[i + 1, i] = -1j * c / 2.0
    return sy


def _check_square_finite(a: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolationError(f"{what} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractViolationError(f"{what} contains non-finite entries")
    return a


def _fix_column_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    lead_idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[lead_idx, np.arange(vectors.shape[1])]
    phases = lead / np.abs(lead)
    return vectors * phases.conj()[None, :]


def eig_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> HermitianEigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues come back ascending; each eigenvector is phase-fixed
    (largest-magnitude component real positive) so the output is
    reproducible across runs.
    """
    matrix = _check_square_finite(matrix, "eig_hermitian input")
    defect = np.max(np.abs(matrix - matrix.conj().T))
    if defect > tol:
        raise ContractViolationError(
            f"input is not Hermitian: max |H - H^dag| = {defect:.3e} > {tol:.1e}"
        )
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return HermitianEigenSystem(eigenvalues, _fix_column_phases(eigenvectors))


def expm_hermitian(matrix: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * H) for Hermitian H, via the spectral decomposition.

    For scale = -i t the result is unitary to round-off, which is why this
    route is preferred over a Pade/series expansion here.
    """
    es = eig_hermitian(matrix)
    weights = np.exp(scale * es.eigenvalues)
    return (es.eigenvectors * weights[None, :]) @ es.eigenvectors.conj().T


def _lexicographic_tie_break(order: np.ndarray, phases: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Within runs of exactly equal phases, order columns lexicographically."""
    sorted_phases = phases[order]
    boundaries = np.flatnonzero(np.diff(sorted_phases) != 0.0)
    starts = np.concatenate(([0], boundaries + 1))
    stops = np.concatenate((boundaries + 1, [order.size]))
    out = order.copy()
    for lo, hi in zip(starts, stops):
        if hi - lo > 1:
            group = order[lo:hi]
            keys = sorted(group, key=lambda j: tuple(zip(vectors[:, j].real, vectors[:, j].imag)))
            out[lo:hi] = keys
    return out


def eig_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> UnitaryEigenSystem:
    """Eigenphases and eigenvectors of a unitary matrix.

    Uses the complex Schur form: a unitary matrix is normal, so its Schur
    factor is diagonal and the Schur vectors are exactly orthonormal
    eigenvectors, which keeps matrix powers stable even with clustered
    eigenphases.  Phases are mapped to [-pi, pi) and returned ascending.
    """
    matrix = _check_square_finite(matrix, "eig_unitary input")
    dim = matrix.shape[0]
    defect = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
    if defect > tol:
        raise ContractViolationError(
            f"input is not unitary: max |U^dag U - 1| = {defect:.3e} > {tol:.1e}"
        )
    triangular, vectors = scipy.linalg.schur(matrix, output="complex")
    phases = np.angle(np.diagonal(triangular))
    phases = np.where(phases >= np.pi, phases - 2.0 * np.pi, phases)
    order = np.argsort(phases, kind="stable")
    vectors = _fix_column_phases(vectors)
    order = _lexicographic_tie_break(order, phases, vectors)
    return UnitaryEigenSystem(phases[order], vectors[:, order])
