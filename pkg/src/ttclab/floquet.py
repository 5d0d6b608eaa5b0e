"""The effective one-cycle unitary F(t) = exp(-i H_1 t) exp(-i H_2 t).

Repeated application of F generates the stroboscopic dynamics seen by the
n-fold probe correlator.  Powers are taken through the eigendecomposition of
F (one O(D^3) factorization per t, then O(D^2) per order n), which keeps
round-off from accumulating at large n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._util import ordered_parallel_map
from .model import ModelParams, build_h1, build_h2
from .spin import (
    HermitianEigenSystem,
    UnitaryEigenSystem,
    eig_hermitian,
    eig_unitary,
    expm_hermitian,
)

__all__ = [
    "FloquetDecomposition",
    "build_floquet",
    "floquet_power",
    "build_ut",
    "bch_short_time_residual",
    "eigenphase_sweep",
]


@dataclass(frozen=True, eq=False)
class FloquetDecomposition:
    """One-cycle unitary at kick period t, with its eigenphase decomposition."""

    t: float
    F: np.ndarray
    eigen: UnitaryEigenSystem


@lru_cache(maxsize=64)
def _reduced_operators(p: ModelParams) -> tuple[HermitianEigenSystem, np.ndarray]:
    """Eigen-factored H_1 and the (real) diagonal of H_2, cached per parameter set."""
    es = eig_hermitian(build_h1(p))
    h2_diag = np.real(np.diagonal(build_h2(p))).copy()
    return es, h2_diag


def build_floquet(p: ModelParams, t: float) -> FloquetDecomposition:
    """Build F(t) and attach its eigenphase decomposition.

    H_2 is diagonal in the S_z basis, so its exponential is elementwise; the
    H_1 factor uses the cached spectral decomposition.
    """
    if t < 0:
        raise ValueError(f"kick period must be nonnegative, got t={t}")
    es, h2_diag = _reduced_operators(p)
    v = es.eigenvectors
    u1 = (v * np.exp(-1j * es.eigenvalues * t)[None, :]) @ v.conj().T
    f = u1 * np.exp(-1j * h2_diag * t)[None, :]
    return FloquetDecomposition(t=float(t), F=f, eigen=eig_unitary(f))


def floquet_power(fd: FloquetDecomposition, n: int) -> np.ndarray:
    """F^n through the eigendecomposition: Q diag(e^{i n theta}) Q^dag."""
    if n < 0 or int(n) != n:
        raise ValueError(f"power must be a nonnegative integer, got n={n}")
    q = fd.eigen.eigenvectors
    weights = np.exp(1j * n * fd.eigen.eigenphases)
    return (q * weights[None, :]) @ q.conj().T


def build_ut(p: ModelParams, t: float, n: int) -> np.ndarray:
    """The symmetrized evolution operator U_t = F^n exp(+i H_2 t).

    In the real S_z basis U_t equals its own transpose, the symmetry that
    pushes S_z-basis survival statistics from CUE toward COE.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got n={n}")
    fd = build_floquet(p, t)
    _, h2_diag = _reduced_operators(p)
    return floquet_power(fd, n) * np.exp(1j * h2_diag * t)[None, :]


def bch_short_time_residual(p: ModelParams, t: float) -> float:
    """Operator-norm distance between F(t) and exp(-i (H_1 + H_2) t).

    The leading correction is the t^2 commutator term of the
    Baker-Campbell-Hausdorff series, so halving t should shrink this by ~4.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got t={t}")
    fd = build_floquet(p, t)
    truncated = expm_hermitian(build_h1(p) + build_h2(p), -1j * t)
    return float(np.linalg.norm(fd.F - truncated, 2))


def eigenphase_sweep(
    p: ModelParams, t_grid, threads: int | None = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Sorted eigenphases of F(t) for each t in an ascending grid.

    Returns (t_grid, phases) with phases[i] the ascending eigenphases at
    t_grid[i].  No continuity tracking is attempted across grid points: the
    rows are independent snapshots (scatter semantics).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("t_grid must be nonempty")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be ascending")
    rows = ordered_parallel_map(
        lambda t: build_floquet(p, t).eigen.eigenphases, t_grid, threads
    )
    return t_grid, np.vstack(rows)
