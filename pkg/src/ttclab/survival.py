"""Probe correlator amplitudes, survival probabilities, and RMT references.

The n-fold probe correlator reduces to a bosonic survival amplitude
F_n(t) = <psi| F(t)^n |psi>, so P_n(t) = |F_n|^2 is a return probability.
Its long-time average per state approaches 2/(D+1) (CUE) or 3/(D+2) (COE),
and summed over an orthonormal basis it approaches the corresponding IPR
values 2D/(D+1) and 3D/(D+2).

``verify_reduction`` recomputes the correlator by brute force on the full
boson (x) dot space and is the correctness oracle for the reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import ordered_parallel_map
from .errors import ContractViolationError
from .floquet import FloquetDecomposition, build_floquet
from .model import (
    ModelParams,
    build_dot_sigma_x,
    build_full_hamiltonian,
)
from .spin import SpinBasisSpec, build_sx, build_sy, eig_hermitian, expm_hermitian

__all__ = [
    "QuantumState",
    "StateBasis",
    "SurvivalSeries",
    "RmtSaturation",
    "ttc_amplitude",
    "survival_probability",
    "basis_averaged_survival",
    "ipr_of_state",
    "make_state",
    "make_random_basis",
    "make_sz_fock_basis",
    "make_sx_eigen_basis",
    "rmt_saturation",
    "verify_reduction",
]

NORM_TOL = 1e-12
ORTHONORMAL_TOL = 1e-10

#: default long-time averaging window and sampling (times in 1/alpha_x)
DEFAULT_T_MAX = 20.0
DEFAULT_T_SAMPLES = 2000

#: largest N accepted by the brute-force composite-space check
REDUCTION_N_LIMIT = 64


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized complex amplitude vector in the S_z (Fock) basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size < 1:
            raise ContractViolationError(f"state must be a vector, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise ContractViolationError("state contains non-finite amplitudes")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolationError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class StateBasis:
    """Orthonormal collection of D states (columns of ``matrix``)."""

    matrix: np.ndarray
    label: str

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ContractViolationError(f"basis must be a square matrix, got {mat.shape}")
        gram_defect = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if gram_defect > ORTHONORMAL_TOL:
            raise ContractViolationError(
                f"basis is not orthonormal: max |G - 1| = {gram_defect:.3e}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def states(self) -> list[QuantumState]:
        return [QuantumState(self.matrix[:, i]) for i in range(self.dim)]


@dataclass(frozen=True, eq=False)
class SurvivalSeries:
    """P_n(t) samples plus long-time averages over ``window``.

    ``values`` is the amplitude-based observable |<psi|F^n|psi>|^2 (summed
    over the basis for basis averages) and ``long_time_avg`` its plain window
    mean.  ``ipr_values`` drops the phase coherences between distinct
    eigenphases (the dephased, diagonal-approximation form): the overlap of
    the state with the instantaneous eigenbasis, sum_j |<v_j(t)|psi>|^4.
    The circular-ensemble saturation references (2/(D+1), 3/(D+2) per state
    and 2D/(D+1), 3D/(D+2) per basis) describe ``ipr_long_time_avg``; the raw
    mean sits below it whenever the order n is small enough for the ensemble
    form factor to be off its plateau (n below ~D for CUE, further for COE).
    """

    t_grid: np.ndarray
    values: np.ndarray
    n: int
    long_time_avg: float
    window: tuple[float, float]
    ipr_values: np.ndarray
    ipr_long_time_avg: float


@dataclass(frozen=True)
class RmtSaturation:
    """Circular-ensemble saturation references for Hilbert dimension D."""

    ipr_cue: float
    ipr_coe: float
    p_cue: float
    p_coe: float
    t_th_cue: float
    t_th_coe: float


def rmt_saturation(D: int) -> RmtSaturation:
    """IPR and per-state saturation values plus Thouless times for dimension D."""
    if D < 1:
        raise ValueError(f"dimension must be >= 1, got {D}")
    return RmtSaturation(
        ipr_cue=2.0 * D / (D + 1.0),
        ipr_coe=3.0 * D / (D + 2.0),
        p_cue=2.0 / (D + 1.0),
        p_coe=3.0 / (D + 2.0),
        t_th_cue=(3.0 / (2.0 * math.pi)) ** 0.25,
        t_th_coe=(3.0 / math.pi) ** 0.25,
    )


def default_window(t_max: float) -> tuple[float, float]:
    """Averaging window [max(2 t_Th, 2), t_max]; both Thouless times are < 1."""
    lo = max(2.0 * rmt_saturation(2).t_th_coe, 2.0)
    if t_max <= lo:
        raise ValueError(f"t_max = {t_max} leaves no room for the window starting at {lo}")
    return (lo, float(t_max))


def _amplitudes_for_columns(fd: FloquetDecomposition, columns: np.ndarray, n: int) -> np.ndarray:
    """<psi_k| F^n |psi_k> for each column, via the eigenphase decomposition."""
    q = fd.eigen.eigenvectors
    weights = np.exp(1j * n * fd.eigen.eigenphases)
    overlaps = q.conj().T @ columns
    return weights @ (np.abs(overlaps) ** 2)


def _survival_terms(fd: FloquetDecomposition, columns: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-column (|<psi|F^n|psi>|^2, sum_j |<v_j|psi>|^4) at one time."""
    q = fd.eigen.eigenvectors
    weights = np.exp(1j * n * fd.eigen.eigenphases)
    overlap_sq = np.abs(q.conj().T @ columns) ** 2
    amplitudes = weights @ overlap_sq
    return np.abs(amplitudes) ** 2, np.sum(overlap_sq**2, axis=0)


def _check_grid(t_grid) -> np.ndarray:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("t_grid must be nonempty")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be ascending")
    return t_grid


def _window_average(t_grid: np.ndarray, values: np.ndarray, window) -> tuple[float, tuple[float, float]]:
    if window is None:
        window = default_window(t_grid[-1])
    lo, hi = float(window[0]), float(window[1])
    mask = (t_grid >= lo) & (t_grid <= hi)
    if not np.any(mask):
        raise ValueError(f"no grid points inside the averaging window [{lo}, {hi}]")
    return float(np.mean(values[mask])), (lo, hi)


def ttc_amplitude(p: ModelParams, state: QuantumState, t: float, n: int) -> complex:
    """F_n(t) = <psi| F(t)^n |psi> for a single state and time."""
    if n < 1:
        raise ValueError(f"correlator order must be >= 1, got n={n}")
    fd = build_floquet(p, t)
    return complex(_amplitudes_for_columns(fd, state.amplitudes[:, None], n)[0])


def _survival_sweep(
    p: ModelParams, columns: np.ndarray, t_grid: np.ndarray, n: int, threads
) -> tuple[np.ndarray, np.ndarray]:
    """Raw and dephased survival terms for every grid time; shapes (T, K)."""

    def one(t: float) -> tuple[np.ndarray, np.ndarray]:
        return _survival_terms(build_floquet(p, t), columns, n)

    pairs = ordered_parallel_map(one, t_grid, threads)
    raw = np.vstack([pair[0] for pair in pairs])
    dephased = np.vstack([pair[1] for pair in pairs])
    return raw, dephased


def survival_probability(
    p: ModelParams,
    state: QuantumState,
    t_grid,
    n: int = 50,
    window=None,
    threads: int | None = 1,
) -> SurvivalSeries:
    """Return probability P_n(t) = |F_n(t)|^2 of a single state."""
    if n < 1:
        raise ValueError(f"correlator order must be >= 1, got n={n}")
    t_grid = _check_grid(t_grid)
    raw, dephased = _survival_sweep(p, state.amplitudes[:, None], t_grid, n, threads)
    values = raw[:, 0]
    if np.any(values > 1.0 + 1e-9) or np.any(values < 0.0):
        raise ContractViolationError("per-state survival probability left [0, 1]")
    avg, window = _window_average(t_grid, values, window)
    ipr_avg, _ = _window_average(t_grid, dephased[:, 0], window)
    return SurvivalSeries(
        t_grid=t_grid,
        values=values,
        n=int(n),
        long_time_avg=avg,
        window=window,
        ipr_values=dephased[:, 0],
        ipr_long_time_avg=ipr_avg,
    )


def basis_averaged_survival(
    p: ModelParams,
    basis: StateBasis,
    t_grid,
    n: int = 50,
    window=None,
    threads: int | None = 1,
) -> SurvivalSeries:
    """Survival probability summed over an entire orthonormal basis.

    The sum (not the mean) is taken, so the value starts at D at t = 0 and
    relaxes toward the IPR references near 2 (CUE) or 3 (COE).
    """
    if n < 1:
        raise ValueError(f"correlator order must be >= 1, got n={n}")
    if basis.dim != p.N + 1:
        raise ContractViolationError(
            f"basis dimension {basis.dim} does not match Hilbert dimension {p.N + 1}"
        )
    t_grid = _check_grid(t_grid)
    raw, dephased = _survival_sweep(p, basis.matrix, t_grid, n, threads)
    values = np.sum(raw, axis=1)
    ipr_series = np.sum(dephased, axis=1)
    avg, window = _window_average(t_grid, values, window)
    ipr_avg, _ = _window_average(t_grid, ipr_series, window)
    return SurvivalSeries(
        t_grid=t_grid,
        values=values,
        n=int(n),
        long_time_avg=avg,
        window=window,
        ipr_values=ipr_series,
        ipr_long_time_avg=ipr_avg,
    )


def ipr_of_state(state: QuantumState, reference_basis: np.ndarray) -> float:
    """Inverse participation ratio sum_a |<v_a|psi>|^4 over a unitary basis."""
    ref = np.asarray(reference_basis, dtype=complex)
    defect = np.max(np.abs(ref.conj().T @ ref - np.eye(ref.shape[0])))
    if defect > ORTHONORMAL_TOL:
        raise ContractViolationError(f"reference basis is not unitary: defect {defect:.3e}")
    overlaps = ref.conj().T @ state.amplitudes
    return float(np.sum(np.abs(overlaps) ** 4))


def make_state(kind: str, basis_spec: SpinBasisSpec, m: float | None = None, amplitudes=None) -> QuantumState:
    """State factory for the standard initial states.

    kind = "fock":            the S_z eigenstate |m> (pass m)
    kind = "x_polarized":     exp(-i S_y pi/2) |m = N/2>, the coherent state along
                              +x (<S_x> = +N/2; the elliptic point of the
                              classical alternating map)
    kind = "neg_x_polarized": exp(-i S_y pi/2) |m = -N/2>, the S_x ground state
                              (<S_x> = -N/2; sits at the hyperbolic point, so it
                              scrambles fastest)
    kind = "gaussian":        amplitudes proportional to exp(-m^2 / 4N), renormalized
    kind = "custom":          normalize and wrap the given amplitudes
    """
    d = basis_spec.D
    if kind == "fock":
        if m is None:
            raise ValueError("fock state requires m")
        matches = np.flatnonzero(np.abs(basis_spec.m_values - m) < 1e-9)
        if matches.size != 1:
            raise ValueError(f"m={m} is not one of the S_z eigenvalues for N={basis_spec.N}")
        amp = np.zeros(d, dtype=complex)
        amp[matches[0]] = 1.0
        return QuantumState(amp)
    if kind in ("x_polarized", "neg_x_polarized"):
        rot = expm_hermitian(build_sy(basis_spec), -1j * np.pi / 2.0)
        return QuantumState(rot[:, -1 if kind == "x_polarized" else 0])
    if kind == "gaussian":
        amp = np.exp(-basis_spec.m_values**2 / (4.0 * basis_spec.N)).astype(complex)
        return QuantumState(amp / np.linalg.norm(amp))
    if kind == "custom":
        if amplitudes is None:
            raise ValueError("custom state requires amplitudes")
        amp = np.asarray(amplitudes, dtype=complex)
        if amp.size != d:
            raise ValueError(f"expected {d} amplitudes, got {amp.size}")
        return QuantumState(amp / np.linalg.norm(amp))
    raise ValueError(f"unknown state kind {kind!r}")


def make_random_basis(D: int, seed: int) -> StateBasis:
    """Haar-distributed orthonormal basis from QR of a complex Ginibre matrix.

    The raw QR of a Gaussian matrix is not Haar; multiplying each column by
    the phase of the matching diagonal entry of R fixes that.
    """
    if D < 1:
        raise ValueError(f"dimension must be >= 1, got {D}")
    rng = np.random.default_rng(seed)
    ginibre = (rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))) / np.sqrt(2.0)
    q, r = np.linalg.qr(ginibre)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))[None, :]
    return StateBasis(matrix=q, label=f"random_haar:{seed}")


def make_sz_fock_basis(basis_spec: SpinBasisSpec) -> StateBasis:
    """The S_z (Fock) eigenbasis."""
    return StateBasis(matrix=np.eye(basis_spec.D, dtype=complex), label="sz_fock")


def make_sx_eigen_basis(basis_spec: SpinBasisSpec) -> StateBasis:
    """The S_x eigenbasis."""
    es = eig_hermitian(build_sx(basis_spec))
    return StateBasis(matrix=es.eigenvectors, label="sx_eigen")


def verify_reduction(
    p: ModelParams,
    state: QuantumState,
    t_grid,
    n: int,
    threads: int | None = 1,
) -> np.ndarray:
    """Brute-force check that the composite-space correlator equals <psi|F^n|psi>.

    The full value <Psi| [e^{iHt} sigma_x e^{-iHt} sigma_x]^n |Psi> is computed
    on the 2(N+1)-dimensional boson (x) dot space with the dot prepared in the
    sector annihilated by the (1 + sigma_z) coupling, so the forward evolution
    there is pure H_B.  For delta = 0 the complex amplitudes must agree; a
    nonzero delta only contributes a global phase, so moduli are compared.

    Returns an array of rows (t, discrepancy).
    """
    if n < 0:
        raise ValueError(f"order must be >= 0, got n={n}")
    if p.N > REDUCTION_N_LIMIT:
        raise ValueError(
            f"composite-space check is limited to N <= {REDUCTION_N_LIMIT}, got N={p.N}"
        )
    t_grid = _check_grid(t_grid)
    if state.dim != p.N + 1:
        raise ContractViolationError("state dimension does not match the model")

    es = eig_hermitian(build_full_hamiltonian(p))
    sigma_x = build_dot_sigma_x(p)
    # dot ordering is |sigma_z=+1>, |sigma_z=-1>; the coupling annihilates the latter
    dot = np.array([0.0, 1.0], dtype=complex)
    psi_full = np.kron(state.amplitudes, dot)
    v = es.eigenvectors
    lam = es.eigenvalues
    compare_moduli = p.delta != 0.0

    def one(t: float) -> float:
        forward = np.exp(-1j * lam * t)
        vec = psi_full
        for _ in range(int(n)):
            vec = sigma_x @ vec
            vec = v @ (forward * (v.conj().T @ vec))
            vec = sigma_x @ vec
            vec = v @ (forward.conj() * (v.conj().T @ vec))
        full_amp = complex(psi_full.conj() @ vec)
        if n == 0:
            reduced_amp = 1.0 + 0.0j
        else:
            fd = build_floquet(p, t)
            reduced_amp = complex(
                _amplitudes_for_columns(fd, state.amplitudes[:, None], int(n))[0]
            )
        if compare_moduli:
            return abs(abs(full_amp) - abs(reduced_amp))
        return abs(full_amp - reduced_amp)

    discrepancies = np.array(ordered_parallel_map(one, t_grid, threads))
    return np.column_stack((t_grid, discrepancies))
