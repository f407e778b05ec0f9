import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_hermitian(rng, scale=1.0):
    a, d, re, im = rng.uniform(-scale, scale, size=4)
    return np.array([[a, re + 1j * im], [re - 1j * im, d]], dtype=complex)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
