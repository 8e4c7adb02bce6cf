import math

import numpy as np
import pytest
from scipy.stats import binom

from quasipower.lattice import LatticeDistribution


def binomial_law(n, p=0.5):
    mass = binom.pmf(np.arange(n + 1), n, p)
    return LatticeDistribution(mass / mass.sum(), 0.0, 1.0)


def standardized_binomial(n):
    """(S - n/2) / sqrt(n/4): mean 0, variance 1."""
    return binomial_law(n).affine(n / 2, math.sqrt(n / 4))


def product_law(a, b):
    return LatticeDistribution(np.multiply.outer(a.mass, b.mass), np.concatenate([a.offset, b.offset]),
                               np.concatenate([a.step, b.step]))


@pytest.fixture
def rng():
    # used only to pick test points, never inside the library
    return np.random.default_rng(20240611)
