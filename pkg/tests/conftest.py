import numpy as np
import pytest

from szegolab.reduced import L1State


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)


def random_l1_state(rng, p_max=0.9, scale=1.0) -> L1State:
    """Random manifold state with |p| <= p_max and O(scale) coordinates."""
    b = scale * complex(*rng.normal(size=2)) / np.sqrt(2)
    c = scale * complex(*rng.normal(size=2)) / np.sqrt(2)
    while abs(c) < 1e-3:
        c = scale * complex(*rng.normal(size=2)) / np.sqrt(2)
    p = p_max * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    return L1State(b, c, complex(p))


def condition_state(rng, alpha, p_max=0.8) -> L1State:
    """Random state satisfying the blow-up condition discriminant^2 = alpha."""
    b = complex(*rng.normal(size=2)) / np.sqrt(2)
    r = 0.1 + (p_max - 0.1) * rng.random()
    p = complex(r * np.exp(2j * np.pi * rng.random()))
    phi = 2j * np.pi * rng.random()
    target = np.sqrt(alpha) * np.exp(phi)
    c = (target - b) * (1.0 - abs(p) ** 2) / p.conjugate()
    if abs(c) < 1e-6:
        c = 1e-6 + 0j
    return L1State(b, complex(c), p)
