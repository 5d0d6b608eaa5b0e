import numpy as np
import pytest

from ttclab import (
    ConfigError,
    ModelParams,
    SpinBasisSpec,
    build_dot_sigma_x,
    build_full_hamiltonian,
    build_h1,
    build_h2,
    build_hb,
    build_sx,
)

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


def test_paper_default_values():
    p = ModelParams.paper_default(N=60)
    assert (p.k_z, p.alpha_x, p.alpha_z, p.delta, p.beta, p.N) == (3.0, 1.0, 0.01, 0.0, 0.5, 60)


@pytest.mark.parametrize("kwargs", [dict(N=0), dict(alpha_x=0.0), dict(alpha_x=-1.0), dict(k_z=np.nan)])
def test_params_validation(kwargs):
    base = dict(k_z=3.0, alpha_x=1.0, alpha_z=0.01, delta=0.0, beta=0.5, N=4)
    base.update(kwargs)
    with pytest.raises(ConfigError):
        ModelParams(**base)


def test_hb_reduces_to_hopping():
    p = ModelParams(k_z=0.0, alpha_x=1.3, alpha_z=0.0, N=5)
    assert np.allclose(build_hb(p), -1.3 * build_sx(SpinBasisSpec(5)), atol=1e-14)


def test_hb_single_spin_diagonal():
    p = ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.0, N=1)
    hb = build_hb(p)
    assert np.allclose(np.diag(hb).real, [0.375, 0.375])


def _hb_elementwise(p):
    """Independent elementwise construction from the defining formula."""
    spec = SpinBasisSpec(p.N)
    s = spec.S
    m = spec.m_values
    out = np.zeros((spec.D, spec.D), dtype=complex)
    for i in range(spec.D):
        out[i, i] = p.k_z * m[i] ** 2 / (p.N + 1) + p.alpha_z * m[i]
        if i + 1 < spec.D:
            hop = -p.alpha_x * 0.5 * np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
            out[i, i + 1] = hop
            out[i + 1, i] = hop
    return out


def test_hb_matches_elementwise_oracle():
    p = ModelParams.paper_default(N=4)
    assert np.max(np.abs(build_hb(p) - _hb_elementwise(p))) < 1e-14


def test_h1_is_minus_hb():
    p = ModelParams.paper_default(N=6)
    assert np.max(np.abs(build_h1(p) + build_hb(p))) == 0.0


def test_h1_corner_entry_n2():
    p = ModelParams.paper_default(N=2)
    assert np.isclose(build_h1(p)[0, 0], -0.99)


def test_h2_zero_couplings():
    p = ModelParams(k_z=0.0, alpha_x=1.0, alpha_z=0.0, N=4)
    assert np.max(np.abs(build_h2(p))) == 0.0


def test_h2_diagonal_n2():
    p = ModelParams.paper_default(N=2)
    assert np.allclose(np.diag(build_h2(p)).real, [0.99, 0.0, 1.01])
    assert np.max(np.abs(build_h2(p) - np.diag(np.diag(build_h2(p))))) == 0.0


def test_h2_generalized_matches_default_at_half_alpha():
    p = ModelParams.paper_default(N=5)  # beta = alpha_x / 2
    assert np.max(np.abs(build_h2(p, generalized=True) - build_h2(p))) < 1e-14


def test_h2_generalized_keeps_hopping_otherwise():
    p = ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.01, beta=0.2, N=5)
    residual = build_h2(p, generalized=True) - build_h2(p)
    assert np.max(np.abs(residual - (-(1.0 - 0.4) * build_sx(SpinBasisSpec(5))))) < 1e-14


def test_builders_are_hermitian():
    p = ModelParams.paper_default(N=9)
    for mat in (build_hb(p), build_h1(p), build_h2(p), build_full_hamiltonian(p)):
        assert np.max(np.abs(mat - mat.conj().T)) < 1e-13


def test_h1_h2_do_not_commute_at_defaults():
    p = ModelParams.paper_default(N=8)
    h1, h2 = build_h1(p), build_h2(p)
    assert np.linalg.norm(h1 @ h2 - h2 @ h1) > 0.1


def test_full_hamiltonian_block_structure():
    p = ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.01, delta=0.0, beta=0.0, N=3)
    full = build_full_hamiltonian(p)
    hb = build_hb(p)
    d = 4
    plus = full[0::2, 0::2]
    minus = full[1::2, 1::2]
    assert np.allclose(plus, hb)
    assert np.allclose(minus, hb)
    assert np.max(np.abs(full[0::2, 1::2])) == 0.0


def test_full_hamiltonian_minus_sector_is_hb():
    # the (1 + sigma_z) coupling annihilates the sigma_z = -1 sector
    p = ModelParams.paper_default(N=4)
    full = build_full_hamiltonian(p)
    assert np.allclose(full[1::2, 1::2], build_hb(p))
    assert np.max(np.abs(full[1::2, 0::2])) == 0.0


def test_full_hamiltonian_commutes_with_dot_sigma_z():
    p = ModelParams(k_z=2.0, alpha_x=1.0, alpha_z=0.3, delta=0.8, beta=0.7, N=5)
    full = build_full_hamiltonian(p)
    sz_dot = np.kron(np.eye(6), SIGMA_Z)
    assert np.max(np.abs(full @ sz_dot - sz_dot @ full)) < 1e-12


def test_dot_sigma_x_properties():
    p = ModelParams.paper_default(N=3)
    sx_dot = build_dot_sigma_x(p)
    dim = 2 * 4
    assert np.allclose(sx_dot @ sx_dot, np.eye(dim))
    assert np.allclose(sx_dot, sx_dot.conj().T)
    assert abs(np.trace(sx_dot)) < 1e-14
    sz_dot = np.kron(np.eye(4), SIGMA_Z)
    assert np.max(np.abs(sx_dot @ sz_dot + sz_dot @ sx_dot)) < 1e-14
