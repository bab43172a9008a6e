import numpy as np
import pytest

from ndyn.conjugate import make_form


def random_form(rng, n_lo=2, n_hi=6, k_hi=5, box=3.0):
    """A random normal form kept away from the degenerate sum and from a
    vanishing bottom coefficient."""
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        k = int(rng.integers(0, k_hi + 1))
        a = tuple(complex(rng.uniform(-box, box), rng.uniform(-box, box))
                  for _ in range(k))
        if k and abs(a[-1]) < 1e-2:
            continue
        if abs(1 + sum(a)) < 1e-2:
            continue
        return make_form(n, a)


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)
