import numpy as np
import pytest

from kmmix import ChainParams

# the worked example: p = 1/11, q = 9/11, r = 1/11
EXAMPLE = ChainParams(1 / 11, 9 / 11, 1 / 11)


def _grid():
    """Deterministic grid of valid (p, q, r) triples covering the parameter
    wedge q > p > 0, r > 0; 24 chains."""
    chains = []
    for p in (0.02, 0.06, 0.12, 0.20, 0.30):
        for q_extra in (0.08, 0.22, 0.40, 0.55, 0.72):
            q = p + q_extra
            r = 1.0 - p - q
            if r > 0.01 and q < 0.97:
                chains.append(ChainParams(p, q, r))
    return chains


GRID = _grid()
assert len(GRID) >= 20


def _random_chains(count=5, seed=20240817):
    rng = np.random.default_rng(seed)
    chains = []
    while len(chains) < count:
        p = rng.uniform(0.02, 0.35)
        q = rng.uniform(p + 0.05, 0.95)
        r = 1.0 - p - q
        if r > 0.02:
            chains.append(ChainParams(p, q, r))
    return chains


RANDOM_CHAINS = _random_chains()


@pytest.fixture(scope="session")
def example_chain():
    return EXAMPLE


@pytest.fixture(scope="session")
def chain_grid():
    return GRID


@pytest.fixture(scope="session")
def random_chains():
    return RANDOM_CHAINS
