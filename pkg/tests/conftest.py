import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_antisymmetric(rng, n, scale=1.0):
    m = scale * rng.standard_normal((n, n))
    return m - m.T


def random_gauge(rng, n, scale=1.0):
    return scale * rng.standard_normal((n, n))


def random_spd(rng, n):
    m = rng.standard_normal((n, n))
    return m @ m.T + n * np.eye(n)


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
