import numpy as np
import pytest
import scipy.linalg

from ttclab import (
    BasisError,
    ContractViolationError,
    ModelParams,
    SpinBasisSpec,
    build_h1,
    build_sx,
    build_sy,
    build_sz,
    eig_hermitian,
    eig_unitary,
    expm_hermitian,
)
from conftest import random_hermitian


def test_basis_spec_m_values():
    assert np.allclose(SpinBasisSpec(2).m_values, [-1.0, 0.0, 1.0])
    assert np.allclose(SpinBasisSpec(1).m_values, [-0.5, 0.5])
    assert np.allclose(SpinBasisSpec(4).m_values, [-2, -1, 0, 1, 2])
    assert SpinBasisSpec(7).D == 8


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_basis_spec_rejects_bad_counts(bad):
    with pytest.raises(BasisError):
        SpinBasisSpec(bad)


def test_sz_is_diagonal_m():
    assert np.allclose(build_sz(SpinBasisSpec(2)), np.diag([-1.0, 0.0, 1.0]))


def test_sx_single_spin_is_half_pauli():
    sx = build_sx(SpinBasisSpec(1))
    assert np.allclose(sx, np.array([[0.0, 0.5], [0.5, 0.0]]))


def test_sx_spin_one_ladder_entries():
    sx = build_sx(SpinBasisSpec(2))
    assert np.allclose(sx[0, 1], 1.0 / np.sqrt(2.0))
    assert np.allclose(sx[1, 2], 1.0 / np.sqrt(2.0))


def test_sy_single_spin_and_basics():
    spec = SpinBasisSpec(1)
    sy = build_sy(spec)
    # ordering (m=-1/2, m=+1/2): sigma_y/2 has +i/2 above the diagonal
    assert np.allclose(sy, np.array([[0.0, 0.5j], [-0.5j, 0.0]]))
    sy5 = build_sy(SpinBasisSpec(5))
    assert np.allclose(sy5, sy5.conj().T)
    assert abs(np.trace(sy5)) < 1e-14


@pytest.mark.parametrize("N", list(range(1, 21)))
def test_su2_algebra_and_casimir(N):
    spec = SpinBasisSpec(N)
    sx, sy, sz = build_sx(spec), build_sy(spec), build_sz(spec)
    assert np.max(np.abs(sx @ sy - sy @ sx - 1j * sz)) < 1e-11
    assert np.max(np.abs(sy @ sz - sz @ sy - 1j * sx)) < 1e-11
    assert np.max(np.abs(sz @ sx - sx @ sz - 1j * sy)) < 1e-11
    s = N / 2.0
    casimir = sx @ sx + sy @ sy + sz @ sz
    assert np.max(np.abs(casimir - s * (s + 1) * np.eye(spec.D))) < 1e-10


def test_eig_hermitian_sorts_ascending():
    es = eig_hermitian(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert np.allclose(es.eigenvalues, [1.0, 2.0, 3.0])


def test_eig_hermitian_spin_one_sx_spectrum():
    es = eig_hermitian(build_sx(SpinBasisSpec(2)))
    assert np.allclose(es.eigenvalues, [-1.0, 0.0, 1.0], atol=1e-12)


def _charpoly_coefficients(matrix):
    """Faddeev-LeVerrier recursion for det(lambda 1 - H)."""
    dim = matrix.shape[0]
    coeffs = np.zeros(dim + 1, dtype=complex)
    coeffs[0] = 1.0
    aux = np.zeros_like(matrix)
    for k in range(1, dim + 1):
        aux = matrix @ aux + coeffs[k - 1] * np.eye(dim)
        coeffs[k] = -np.trace(matrix @ aux) / k
    return coeffs


def test_eig_hermitian_matches_charpoly_roots():
    # independent oracle: characteristic polynomial + companion-matrix roots
    h1 = build_h1(ModelParams(k_z=3.0, alpha_x=1.0, alpha_z=0.01, N=4))
    expected = np.sort(np.roots(_charpoly_coefficients(h1)).real)
    es = eig_hermitian(h1)
    assert np.max(np.abs(es.eigenvalues - expected)) < 1e-8


def test_eig_hermitian_reconstruction_and_phase_convention(rng):
    h = random_hermitian(rng, 9)
    es = eig_hermitian(h)
    rebuilt = (es.eigenvectors * es.eigenvalues[None, :]) @ es.eigenvectors.conj().T
    assert np.max(np.abs(rebuilt - h)) < 1e-10
    lead = es.eigenvectors[np.argmax(np.abs(es.eigenvectors), axis=0), np.arange(9)]
    assert np.all(np.abs(lead.imag) < 1e-12)
    assert np.all(lead.real > 0)
    es2 = eig_hermitian(h)
    assert np.array_equal(es.eigenvectors, es2.eigenvectors)


def test_eig_hermitian_rejects_non_hermitian(rng):
    bad = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    with pytest.raises(ContractViolationError):
        eig_hermitian(bad)


def test_expm_zero_scale_is_identity(rng):
    h = random_hermitian(rng, 6)
    assert np.allclose(expm_hermitian(h, 0.0), np.eye(6), atol=1e-13)


def test_expm_diagonal_matches_elementwise():
    h = np.diag([0.3, -1.2, 2.0]).astype(complex)
    assert np.allclose(expm_hermitian(h, -1.7j), np.diag(np.exp(-1.7j * np.diag(h))))


def test_expm_unitarity_random_ensemble(rng):
    for _ in range(100):
        dim = int(rng.integers(2, 17))
        h = random_hermitian(rng, dim)
        u = expm_hermitian(h, -0.37j)
        assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) < 1e-10


def test_expm_against_scipy(rng):
    # cross-library oracle for the spectral route
    h = random_hermitian(rng, 8)
    ours = expm_hermitian(h, -0.61j)
    assert np.max(np.abs(ours - scipy.linalg.expm(-0.61j * h))) < 1e-11


def test_expm_inverse_pair(rng):
    h = random_hermitian(rng, 8)
    prod = expm_hermitian(h, -0.9j) @ expm_hermitian(h, 0.9j)
    assert np.max(np.abs(prod - np.eye(8))) < 1e-10


def test_eig_unitary_identity():
    es = eig_unitary(np.eye(5, dtype=complex))
    assert np.allclose(es.eigenphases, 0.0, atol=1e-12)


def test_eig_unitary_simple_phases():
    u = np.diag([np.exp(1j * np.pi / 2), np.exp(-1j * np.pi / 2)])
    es = eig_unitary(u)
    assert np.allclose(es.eigenphases, [-np.pi / 2, np.pi / 2])


def test_eig_unitary_of_sz_rotation():
    spec = SpinBasisSpec(2)
    u = expm_hermitian(build_sz(spec), -0.3j)
    es = eig_unitary(u)
    assert np.allclose(es.eigenphases, [-0.3, 0.0, 0.3], atol=1e-12)


def test_eig_unitary_recovers_diagonal_generator():
    diag = np.array([0.4, -2.0, 1.1, 3.3])
    t = 0.7
    es = eig_unitary(expm_hermitian(np.diag(diag).astype(complex), -1j * t))
    expected = np.sort((-diag * t + np.pi) % (2 * np.pi) - np.pi)
    assert np.max(np.abs(es.eigenphases - expected)) < 1e-9


def test_eig_unitary_eigenvectors_are_orthonormal(rng):
    h = random_hermitian(rng, 12)
    es = eig_unitary(expm_hermitian(h, -1.3j))
    q = es.eigenvectors
    assert np.max(np.abs(q.conj().T @ q - np.eye(12))) < 1e-12


def test_eig_unitary_rejects_non_unitary(rng):
    with pytest.raises(ContractViolationError):
        eig_unitary(random_hermitian(rng, 4))


def test_eig_unitary_phases_in_range(rng):
    h = random_hermitian(rng, 10)
    es = eig_unitary(expm_hermitian(h, -2.9j))
    assert np.all(es.eigenphases >= -np.pi)
    assert np.all(es.eigenphases < np.pi)
    assert np.all(np.diff(es.eigenphases) >= 0)
