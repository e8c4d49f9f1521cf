import numpy as np
import pytest

from distembed import Atom, GeneralizedMeasure, MultiIndex


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_measure(rng, dim=1, max_order=2, max_atoms=8, spread=3.0, complex_weights=True):
    """Random atomic generalized measure for numerical property tests."""
    size = int(rng.integers(2, max_atoms + 1))
    atoms = []
    for _ in range(size):
        budget = int(rng.integers(0, max_order + 1))
        order = rng.multinomial(budget, np.ones(dim) / dim)
        w = rng.standard_normal()
        if complex_weights:
            w = complex(w, rng.standard_normal())
        atoms.append(
            Atom(
                w,
                MultiIndex(tuple(int(o) for o in order)),
                tuple(float(c) for c in rng.uniform(-spread, spread, dim)),
            )
        )
    return GeneralizedMeasure(dim, tuple(atoms))


def random_order0_measure(rng, dim=1, max_atoms=8, spread=3.0, complex_weights=True):
    return random_measure(
        rng, dim=dim, max_order=0, max_atoms=max_atoms, spread=spread,
        complex_weights=complex_weights,
    )


@pytest.fixture
def make_measure():
    return random_measure


@pytest.fixture
def make_order0():
    return random_order0_measure
