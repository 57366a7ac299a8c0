import numpy as np
import pytest

from qcmt.algebra import AlgebraElement, Index, paired_indices
from qcmt.gaussian import GaussianKernel

K2 = [[1.0, 0.5], [0.5, 1.0]]
K3 = [[1.0, 0.5, 0.2], [0.5, 1.0, 0.3], [0.2, 0.3, 1.0]]


@pytest.fixture
def k2():
    return GaussianKernel.from_matrix([1, 2], K2)


@pytest.fixture
def k3():
    return GaussianKernel.from_matrix([1, 2, 3], K3)


@pytest.fixture
def k_paired():
    """Complex Hermitian kernel over a conjugate index pair (a, a*)."""
    a, ac = paired_indices("a", "a*")
    return GaussianKernel.from_matrix([a, ac], [[1.0, 0.3j], [-0.3j, 1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20220815)


def random_element(rng, pool, max_terms=3, max_len=3, integer=True):
    """Random algebra element; integer coefficients keep cancellations exact."""
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        length = int(rng.integers(0, max_len + 1))
        w = tuple(pool[int(t)] for t in rng.integers(0, len(pool), size=length))
        if integer:
            coeff = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        else:
            coeff = complex(rng.standard_normal(), rng.standard_normal())
        terms[w] = terms.get(w, 0j) + coeff
    return AlgebraElement(terms)


def index_pool():
    a, ac = paired_indices("a", "a*")
    return (Index(1), Index(2), a, ac)
