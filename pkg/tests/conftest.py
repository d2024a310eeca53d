"""Shared helpers for the test suite."""

import os

import numpy as np
import pytest

# Arithmetic oracle-equivalence suites run a reduced case count by default to
# keep CI wall time sane; set HODLR_FUNM_THOROUGH=1 for the full sweep.
THOROUGH = os.environ.get("HODLR_FUNM_THOROUGH") == "1"


def random_complex(rng, m, n=None):
    n = m if n is None else n
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def random_hermitian(rng, m):
    a = random_complex(rng, m)
    return (a + a.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(0)
