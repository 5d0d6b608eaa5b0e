import numpy as np
import pytest

from ttclab import (
    ModelParams,
    SpinBasisSpec,
    bch_short_time_residual,
    build_floquet,
    build_h2,
    build_sx,
    build_ut,
    eigenphase_sweep,
    expm_hermitian,
    floquet_power,
)
from conftest import parity_operator


def test_floquet_at_zero_time_is_identity():
    p = ModelParams.paper_default(N=6)
    fd = build_floquet(p, 0.0)
    assert np.allclose(fd.F, np.eye(7), atol=1e-14)
    assert np.allclose(fd.eigen.eigenphases, 0.0, atol=1e-12)


def test_floquet_commuting_limit_closed_form():
    # k_z = alpha_z = 0 leaves H_2 = 0 and H_1 = +alpha_x S_x
    p = ModelParams(k_z=0.0, alpha_x=1.0, alpha_z=0.0, N=4)
    t = 0.9
    fd = build_floquet(p, t)
    expected = expm_hermitian(1.0 * build_sx(SpinBasisSpec(4)), -1j * t)
    assert np.max(np.abs(fd.F - expected)) < 1e-12
    wrapped = np.sort((SpinBasisSpec(4).m_values * t + np.pi) % (2 * np.pi) - np.pi)
    assert np.max(np.abs(fd.eigen.eigenphases - wrapped)) < 1e-10


def test_floquet_unitarity_across_parameters():
    for p, t in [
        (ModelParams.paper_default(N=12), 0.7),
        (ModelParams(k_z=5.0, alpha_x=2.0, alpha_z=0.3, N=9), 2.4),
        (ModelParams(k_z=0.5, alpha_x=1.0, alpha_z=0.0, N=15), 4.0),
    ]:
        fd = build_floquet(p, t)
        dim = p.N + 1
        assert np.max(np.abs(fd.F @ fd.F.conj().T - np.eye(dim))) < 1e-10
        assert abs(abs(np.linalg.det(fd.F)) - 1.0) < 1e-9


def test_floquet_rejects_negative_time():
    with pytest.raises(ValueError):
        build_floquet(ModelParams.paper_default(N=4), -0.1)


def test_power_zero_and_one():
    p = ModelParams.paper_default(N=5)
    fd = build_floquet(p, 1.1)
    assert np.allclose(floquet_power(fd, 0), np.eye(6), atol=1e-12)
    assert np.max(np.abs(floquet_power(fd, 1) - fd.F)) < 1e-10


def test_power_matches_repeated_multiplication():
    p = ModelParams.paper_default(N=8)
    fd = build_floquet(p, 0.8)
    direct = fd.F @ fd.F @ fd.F @ fd.F
    assert np.max(np.abs(floquet_power(fd, 4) - direct)) < 1e-9


def test_power_stays_unitary_at_large_order():
    p = ModelParams.paper_default(N=10)
    fd = build_floquet(p, 2.3)
    f50 = floquet_power(fd, 50)
    assert np.max(np.abs(f50 @ f50.conj().T - np.eye(11))) < 1e-9


def test_ut_trivial_case():
    p = ModelParams.paper_default(N=4)
    assert np.allclose(build_ut(p, 0.0, 1), np.eye(5), atol=1e-12)


def test_ut_transpose_symmetry_and_unitarity():
    p = ModelParams.paper_default(N=20)
    ut = build_ut(p, 2.7, 5)
    assert np.max(np.abs(ut - ut.T)) < 1e-9
    assert np.max(np.abs(ut @ ut.conj().T - np.eye(21))) < 1e-9


def test_ut_is_fn_times_reversed_h2():
    p = ModelParams.paper_default(N=7)
    t, n = 1.4, 3
    fd = build_floquet(p, t)
    expected = floquet_power(fd, n) @ expm_hermitian(build_h2(p), 1j * t)
    assert np.max(np.abs(build_ut(p, t, n) - expected)) < 1e-10


def test_bch_residual_zero_at_zero_time():
    assert bch_short_time_residual(ModelParams.paper_default(N=6), 0.0) == 0.0


def test_bch_residual_quadratic_scaling():
    p = ModelParams.paper_default(N=10)
    ratio = bch_short_time_residual(p, 0.02) / bch_short_time_residual(p, 0.01)
    assert 3.5 <= ratio <= 4.5


def test_bch_residual_vanishes_in_commuting_limit():
    p = ModelParams(k_z=0.0, alpha_x=1.0, alpha_z=0.0, N=6)
    assert bch_short_time_residual(p, 1.7) < 1e-12


def test_parity_symmetry_controlled_by_tilt():
    spec_dim = 17
    p_sym = ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.0, N=16)
    fd = build_floquet(p_sym, 1.9)
    parity = parity_operator(spec_dim)
    assert np.max(np.abs(fd.F @ parity - parity @ fd.F)) < 1e-10
    p_tilt = ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.01, N=16)
    fd_tilt = build_floquet(p_tilt, 1.9)
    assert np.max(np.abs(fd_tilt.F @ parity - parity @ fd_tilt.F)) > 1e-4


def test_sweep_shapes_and_zero_row():
    p = ModelParams.paper_default(N=4)
    t_grid, phases = eigenphase_sweep(p, [0.0])
    assert phases.shape == (1, 5)
    assert np.allclose(phases, 0.0, atol=1e-12)
    t_grid, phases = eigenphase_sweep(p, np.linspace(0.0, 1.0, 7))
    assert phases.shape == (7, 5)
    assert np.all(np.diff(phases, axis=1) >= 0)


def test_sweep_requires_ascending_grid():
    p = ModelParams.paper_default(N=4)
    with pytest.raises(ValueError):
        eigenphase_sweep(p, [1.0, 0.5])
    with pytest.raises(ValueError):
        eigenphase_sweep(p, [])


def test_sweep_thread_determinism():
    p = ModelParams.paper_default(N=10)
    grid = np.linspace(0.0, 2.0, 9)
    _, serial = eigenphase_sweep(p, grid, threads=1)
    _, threaded = eigenphase_sweep(p, grid, threads=4)
    assert np.array_equal(serial, threaded)


def test_eigenphase_winding_onset():
    # regular linear growth early, winding of the spectrum shortly after
    p = ModelParams.paper_default(N=16)
    _, phases = eigenphase_sweep(p, [0.1, 0.2, 0.3])
    spans = np.ptp(phases, axis=1)
    assert spans[0] < spans[1] < spans[2] < 2.0 * np.pi - 0.3
    _, late = eigenphase_sweep(p, [0.45, 0.6])
    assert np.ptp(late[0]) > 2.0 * np.pi - 0.35
    assert np.ptp(late[1]) > 2.0 * np.pi - 0.35
