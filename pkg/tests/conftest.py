import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0


def parity_operator(dim):
    """Basis-reversal exchange |m> -> |-m>."""
    return np.eye(dim)[::-1].astype(complex)
