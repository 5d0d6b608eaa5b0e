"""Mean-field (classical) limit: alternating flows, portraits, Lyapunov exponents.

Phase space is the Bloch sphere in the coordinates z (scaled number
difference) and phi (relative phase).  The alternating dynamics integrates

    H1(z, phi) = -(k_z/4) z^2 + (alpha_x/2) sqrt(1-z^2) cos(phi) - (alpha_z/2) z
    H2(z, phi) = +(k_z/4) z^2 + (alpha_z/2) z

for a kick period T each, in turn.  All equations of motion are derived
canonically (dz/dt = -dH/dphi, dphi/dt = +dH/dz) so each segment conserves
its own Hamiltonian; the H2 flow is solved analytically (z is frozen).

Trajectory separations are measured with the great-circle metric on the
sphere, and the maximal Lyapunov exponent uses the two-trajectory Benettin
scheme with renormalization after every Hamiltonian segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleProximityError
from .model import ModelParams

__all__ = [
    "ClassicalState",
    "FullClassicalState",
    "LyapunovResult",
    "evolve_h1",
    "evolve_h2",
    "evolve_full_model",
    "stroboscopic_orbit",
    "phase_portrait",
    "lyapunov_max",
    "great_circle_distance",
    "h1_energy",
    "h2_energy",
    "full_energy",
]

#: trajectories reaching |z| >= POLE_GUARD are rejected (coordinate pole)
POLE_GUARD = 1.0 - 1e-12

DEFAULT_DT = 1e-3
DEFAULT_D0 = 1e-8


def wrap_angle(phi):
    """Map an angle (or array of angles) to [-pi, pi)."""
    return (phi + np.pi) % (2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class ClassicalState:
    """Point (z, phi) on the Bloch-sphere phase space."""

    z: float
    phi: float

    def __post_init__(self):
        if not (np.isfinite(self.z) and np.isfinite(self.phi)):
            raise ValueError("state coordinates must be finite")
        if abs(self.z) > 1.0:
            raise ValueError(f"|z| must be <= 1, got z={self.z}")
        object.__setattr__(self, "phi", float(wrap_angle(self.phi)))


@dataclass(frozen=True)
class FullClassicalState:
    """Boson point (z, phi) plus the conserved dot variables (y, varphi)."""

    z: float
    phi: float
    y: float
    varphi: float

    def __post_init__(self):
        if abs(self.z) > 1.0:
            raise ValueError(f"|z| must be <= 1, got z={self.z}")
        if abs(self.y) > 1.0:
            raise ValueError(f"|y| must be <= 1, got y={self.y}")
        object.__setattr__(self, "phi", float(wrap_angle(self.phi)))
        object.__setattr__(self, "varphi", float(wrap_angle(self.varphi)))


@dataclass(frozen=True, eq=False)
class LyapunovResult:
    """Ensemble-averaged maximal Lyapunov exponent (units of alpha_x)."""

    lambda_max: float
    lambda_std: float
    n_cycles: int
    n_samples: int
    kick_period: float
    n_discarded: int
    mode: str
    per_sample: np.ndarray


def h1_energy(z, phi, p: ModelParams):
    return -0.25 * p.k_z * z**2 + 0.5 * p.alpha_x * np.sqrt(1.0 - z**2) * np.cos(phi) - 0.5 * p.alpha_z * z


def h2_energy(z, phi, p: ModelParams):
    return 0.25 * p.k_z * z**2 + 0.5 * p.alpha_z * z


def full_energy(z, phi, y, p: ModelParams):
    root = np.sqrt(1.0 - z**2)
    dot_factor = 1.0 + 0.5 * y
    return (
        0.25 * p.k_z * z**2
        - 0.5 * p.alpha_x * root * np.cos(phi)
        + 0.5 * p.alpha_z * z
        - 0.5 * p.delta / p.N * dot_factor
        + 0.5 * p.beta * root * np.cos(phi) * dot_factor
    )


def great_circle_distance(z1, phi1, z2, phi2):
    """Great-circle distance on the Bloch sphere between (z, phi) points.

    Mathematically this is arccos[z1 z2 + sqrt((1-z1^2)(1-z2^2)) cos(phi1-phi2)],
    but that form cannot resolve separations below ~1e-8 (the argument rounds
    to 1), which is exactly the scale of the Benettin companion displacement.
    Computing the 3D chord first and using 2 arcsin(c/2) is stable at all
    separations.
    """
    r1 = np.sqrt(np.maximum(1.0 - z1 * z1, 0.0))
    r2 = np.sqrt(np.maximum(1.0 - z2 * z2, 0.0))
    dx = r1 * np.cos(phi1) - r2 * np.cos(phi2)
    dy = r1 * np.sin(phi1) - r2 * np.sin(phi2)
    dz = z1 - z2
    chord = np.sqrt(dx * dx + dy * dy + dz * dz)
    return 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0))


def _safe_root(z):
    # keeps lanes past the pole finite; such lanes are discarded by the guard
    return np.sqrt(np.maximum(1.0 - z * z, 1e-30))


def _h1_rhs(p: ModelParams):
    kz, ax, az = p.k_z, p.alpha_x, p.alpha_z

    def rhs(z, phi):
        root = _safe_root(z)
        dz = 0.5 * ax * root * np.sin(phi)
        dphi = -0.5 * kz * z - 0.5 * az - 0.5 * ax * z * np.cos(phi) / root
        return dz, dphi

    return rhs


def _full_rhs(p: ModelParams):
    kz, ax, az, beta = p.k_z, p.alpha_x, p.alpha_z, p.beta
    delta_term = 0.25 * p.delta / p.N

    def rhs(z, phi, y, varphi):
        root = _safe_root(z)
        dot_factor = 1.0 + 0.5 * y
        shear = (ax - beta * dot_factor) * 0.5
        dz = -shear * root * np.sin(phi)
        dphi = 0.5 * kz * z + 0.5 * az + shear * z * np.cos(phi) / root
        dy = np.zeros_like(np.asarray(y, dtype=float))
        dvarphi = 0.25 * beta * root * np.cos(phi) - delta_term
        return dz, dphi, dy, dvarphi

    return rhs


def _rk4(rhs, state, duration, dt, on_step=None):
    """Classical fixed-step 4th-order integration of ``rhs`` over ``duration``.

    ``state`` is a tuple of floats or equally shaped arrays.  The step count
    is rounded so the segment length is hit exactly; negative durations
    integrate backwards.
    """
    if duration == 0.0:
        return state
    n_steps = max(1, int(round(abs(duration) / dt)))
    h = duration / n_steps
    for _ in range(n_steps):
        k1 = rhs(*state)
        k2 = rhs(*(s + 0.5 * h * k for s, k in zip(state, k1)))
        k3 = rhs(*(s + 0.5 * h * k for s, k in zip(state, k2)))
        k4 = rhs(*(s + h * k for s, k in zip(state, k3)))
        state = tuple(
            s + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        )
        if on_step is not None:
            on_step(state)
    return state


def _raise_on_pole(state):
    z = state[0]
    if np.any(np.abs(z) >= POLE_GUARD):
        raise PoleProximityError(
            f"trajectory reached |z| = {float(np.max(np.abs(z))):.15f} (pole guard at {POLE_GUARD})"
        )


def evolve_h2(p: ModelParams, state: ClassicalState, duration: float) -> ClassicalState:
    """Exact H2 update: z is conserved, phi advances at rate k_z z/2 + alpha_z/2."""
    phi = state.phi + (0.5 * p.k_z * state.z + 0.5 * p.alpha_z) * duration
    return ClassicalState(z=state.z, phi=phi)


def evolve_h1(p: ModelParams, state: ClassicalState, duration: float, dt: float = DEFAULT_DT) -> ClassicalState:
    """Integrate the H1 flow for ``duration`` (negative values run backwards)."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if abs(state.z) >= POLE_GUARD:
        raise PoleProximityError(f"initial state sits at the pole guard, z={state.z}")
    z, phi = _rk4(_h1_rhs(p), (state.z, state.phi), duration, dt, on_step=_raise_on_pole)
    return ClassicalState(z=float(z), phi=float(phi))


def evolve_full_model(
    p: ModelParams, state: FullClassicalState, duration: float, dt: float = DEFAULT_DT
) -> FullClassicalState:
    """Integrate the continuous full-model flow; y is conserved identically."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if abs(state.z) >= POLE_GUARD:
        raise PoleProximityError(f"initial state sits at the pole guard, z={state.z}")
    z, phi, y, varphi = _rk4(
        _full_rhs(p),
        (state.z, state.phi, state.y, state.varphi),
        duration,
        dt,
        on_step=_raise_on_pole,
    )
    return FullClassicalState(z=float(z), phi=float(phi), y=float(y), varphi=float(varphi))


def stroboscopic_orbit(
    p: ModelParams,
    initial: ClassicalState,
    T: float,
    n_cycles: int,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Alternate the H2 and H1 flows for n_cycles kick periods.

    Returns an array of (z, phi) rows: the initial point plus one row after
    every half-kick, 2 n_cycles + 1 rows in total.
    """
    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")
    if T < 0:
        raise ValueError(f"kick period must be nonnegative, got {T}")
    rows = [(initial.z, initial.phi)]
    state = initial
    for _ in range(n_cycles):
        state = evolve_h2(p, state, T)
        rows.append((state.z, state.phi))
        state = evolve_h1(p, state, T, dt=dt)
        rows.append((state.z, state.phi))
    return np.array(rows)


def phase_portrait(
    p: ModelParams,
    T: float,
    n_cycles: int,
    initials=None,
    dt: float = DEFAULT_DT,
    seed: int = 0,
) -> list[tuple[str, np.ndarray]]:
    """Stroboscopic orbits for the standard starting points plus any extras.

    The defaults are the spin-up-along-S_z point (regularized off the pole),
    the spin-along-S_x point at the origin, and a seeded random point.
    """
    rng = np.random.default_rng(seed)
    targets = [
        ("sz_polarized", ClassicalState(z=1.0 - 1e-6, phi=0.0)),
        ("sx_polarized", ClassicalState(z=0.0, phi=0.0)),
        ("random", ClassicalState(z=rng.uniform(-1.0, 1.0), phi=rng.uniform(-np.pi, np.pi))),
    ]
    for i, st in enumerate(initials or []):
        targets.append((f"user_{i}", st))
    return [(label, stroboscopic_orbit(p, st, T, n_cycles, dt=dt)) for label, st in targets]


def _draw_samples(seed: int, n_samples: int, want_dot: bool):
    """Per-sample seeded streams: sample k uses default_rng([seed, k])."""
    z0 = np.empty(n_samples)
    phi0 = np.empty(n_samples)
    chi = np.empty(n_samples)
    y0 = np.empty(n_samples)
    for k in range(n_samples):
        rng = np.random.default_rng([seed, k])
        z0[k] = rng.uniform(-1.0, 1.0)
        phi0[k] = rng.uniform(-np.pi, np.pi)
        chi[k] = rng.uniform(0.0, 2.0 * np.pi)
        y0[k] = rng.uniform(-1.0, 1.0) if want_dot else 0.0
    return z0, phi0, chi, y0


def lyapunov_max(
    p: ModelParams,
    T: float,
    n_cycles: int,
    n_samples: int,
    seed: int = 0,
    mode: str = "stroboscopic",
    dt: float = DEFAULT_DT,
    d0: float = DEFAULT_D0,
) -> LyapunovResult:
    """Maximal Lyapunov exponent from the two-trajectory Benettin scheme.

    Each sample is a random phase-space point (z uniform in (-1,1), phi
    uniform in [-pi,pi)); its companion starts a great-circle distance d0
    away along a random tangent direction.  The separation is renormalized
    to d0 after every Hamiltonian segment and

        lambda = sum_k ln(d_k / d0) / (total integrated time),

    averaged over samples.  ``mode="stroboscopic"`` alternates H2 and H1
    (total time 2 T n_cycles); ``mode="full_continuous"`` integrates the full
    model continuously (total time T n_cycles, with the conserved dot
    population drawn uniformly per sample).  Samples whose trajectories reach
    the |z| pole guard are discarded and counted.
    """
    if mode not in ("stroboscopic", "full_continuous"):
        raise ValueError(f"unknown mode {mode!r}")
    if n_samples < 1 or n_cycles < 1:
        raise ValueError("n_samples and n_cycles must be >= 1")
    if T <= 0 or dt <= 0 or d0 <= 0:
        raise ValueError("T, dt and d0 must be positive")

    z0, phi0, chi, y0 = _draw_samples(seed, n_samples, want_dot=(mode == "full_continuous"))
    root0 = _safe_root(z0)
    # tangent displacement with great-circle length d0 (to first order)
    z = np.concatenate((z0, np.clip(z0 + d0 * np.cos(chi) * root0, -POLE_GUARD, POLE_GUARD)))
    phi = np.concatenate((phi0, phi0 + d0 * np.sin(chi) / root0))
    y = np.concatenate((y0, y0))
    alive = np.ones(2 * n_samples, dtype=bool)
    log_sum = np.zeros(n_samples)

    def guard(state):
        np.logical_and(alive, np.abs(state[0]) < POLE_GUARD, out=alive)

    def renormalize(z, phi):
        zm, zc = z[:n_samples], z[n_samples:]
        pm, pc = phi[:n_samples], phi[n_samples:]
        delta_phi = wrap_angle(pc - pm)
        pm = wrap_angle(pm)  # keeps cos/sin accurate over long runs
        d = great_circle_distance(zm, pm, zc, pc)
        np.logical_and(alive[:n_samples], np.isfinite(d), out=alive[:n_samples])
        d = np.maximum(d, 1e-14)
        pair_alive = alive[:n_samples] & alive[n_samples:]
        log_sum[pair_alive] += np.log(d[pair_alive] / d0)
        shrink = d0 / d
        zc_new = np.clip(zm + (zc - zm) * shrink, -1.0, 1.0)
        pc_new = pm + delta_phi * shrink
        return np.concatenate((zm, zc_new)), np.concatenate((pm, pc_new))

    if mode == "stroboscopic":
        rhs = _h1_rhs(p)
        for _ in range(n_cycles):
            phi = phi + (0.5 * p.k_z * z + 0.5 * p.alpha_z) * T
            z, phi = renormalize(z, phi)
            z, phi = _rk4(rhs, (z, phi), T, dt, on_step=guard)
            z, phi = renormalize(z, phi)
        total_time = 2.0 * T * n_cycles
    else:
        rhs = _full_rhs(p)
        varphi = np.zeros_like(z)
        for _ in range(n_cycles):
            z, phi, y, varphi = _rk4(rhs, (z, phi, y, varphi), T, dt, on_step=guard)
            z, phi = renormalize(z, phi)
        total_time = T * n_cycles

    pair_alive = alive[:n_samples] & alive[n_samples:]
    per_sample = np.where(pair_alive, log_sum / total_time, np.nan)
    n_discarded = int(n_samples - np.count_nonzero(pair_alive))
    kept = per_sample[pair_alive]
    lambda_mean = float(np.mean(kept)) if kept.size else float("nan")
    lambda_std = float(np.std(kept)) if kept.size else float("nan")
    return LyapunovResult(
        lambda_max=lambda_mean,
        lambda_std=lambda_std,
        n_cycles=int(n_cycles),
        n_samples=int(n_samples),
        kick_period=float(T),
        n_discarded=n_discarded,
        mode=mode,
        per_sample=per_sample,
    )
