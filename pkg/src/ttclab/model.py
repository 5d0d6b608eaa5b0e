"""Physical parameters and Hamiltonian builders.

The boson Hamiltonian is

    H_B = k_z S_z^2 / (N+1) - alpha_x S_x + alpha_z S_z

and the pair driving the effective alternating evolution is H_1 = -H_B and
H_2 = H_B with the hopping switched off.  Energies are measured in units of
alpha_x, times in 1/alpha_x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .spin import SpinBasisSpec, build_sx, build_sz

__all__ = [
    "ModelParams",
    "build_hb",
    "build_h1",
    "build_h2",
    "build_full_hamiltonian",
    "build_dot_sigma_x",
]

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the boson + probe model (all energies in units of alpha_x)."""

    k_z: float
    alpha_x: float = 1.0
    alpha_z: float = 0.0
    delta: float = 0.0
    beta: float = 0.0
    N: int = 1

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        if not self.alpha_x > 0:
            raise ConfigError(f"alpha_x sets the energy unit and must be > 0, got {self.alpha_x!r}")
        for name in ("k_z", "alpha_x", "alpha_z", "delta", "beta"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    @classmethod
    def paper_default(cls, N: int) -> "ModelParams":
        """k_z = 3, alpha_x = 1, alpha_z = 0.01, delta = 0, beta = 1/2."""
        return cls(k_z=3.0, alpha_x=1.0, alpha_z=0.01, delta=0.0, beta=0.5, N=N)

    @property
    def spec(self) -> SpinBasisSpec:
        return SpinBasisSpec(self.N)


def build_hb(p: ModelParams) -> np.ndarray:
    """Boson Hamiltonian k_z S_z^2/(N+1) - alpha_x S_x + alpha_z S_z."""
    spec = p.spec
    sz = build_sz(spec)
    return p.k_z * (sz @ sz) / (p.N + 1) - p.alpha_x * build_sx(spec) + p.alpha_z * sz


def build_h1(p: ModelParams) -> np.ndarray:
    """Forward half of the effective alternation: H_1 = -H_B."""
    return -build_hb(p)


def build_h2(p: ModelParams, generalized: bool = False) -> np.ndarray:
    """Backward half: H_B with the hopping removed (diagonal in the S_z basis).

    With ``generalized=True`` the beta != alpha_x/2 form is returned instead,
    in which a residual hopping -(alpha_x - 2 beta) S_x survives (the constant
    -delta piece, a global phase, is dropped).
    """
    spec = p.spec
    if generalized:
        sz = build_sz(spec)
        hopping = p.alpha_x - 2.0 * p.beta
        return p.k_z * (sz @ sz) / (p.N + 1) - hopping * build_sx(spec) + p.alpha_z * sz
    m = spec.m_values
    return np.diag(p.k_z * m**2 / (p.N + 1) + p.alpha_z * m).astype(complex)


def build_full_hamiltonian(p: ModelParams) -> np.ndarray:
    """Composite boson (x) dot Hamiltonian on the 2(N+1)-dimensional space.

    Ordering is boson-major, dot-minor, with the dot basis |sigma_z = +1>
    first.  The dot term is -(delta/2)(1 + sigma_z) and the coupling is
    beta S_x (1 + sigma_z); both vanish on the sigma_z = -1 sector, which is
    why that sector evolves under H_B alone.
    """
    spec = p.spec
    hb = build_hb(p)
    proj = _I2 + _SIGMA_Z
    full = np.kron(hb, _I2)
    full -= 0.5 * p.delta * np.kron(np.eye(spec.D, dtype=complex), proj)
    full += p.beta * np.kron(build_sx(spec), proj)
    return full


def build_dot_sigma_x(p: ModelParams) -> np.ndarray:
    """Probe operator 1 (x) sigma_x on the composite space."""
    return np.kron(np.eye(p.spec.D, dtype=complex), _SIGMA_X)
