import math

import numpy as np
import pytest
from hypothesis import strategies as st

from catnet.cat_algebra import CatState


def complex_numbers(bound=2.0):
    return st.builds(
        complex,
        st.floats(-bound, bound, allow_nan=False, allow_infinity=False),
        st.floats(-bound, bound, allow_nan=False, allow_infinity=False),
    )


@st.composite
def cat_states(draw, max_modes=4, max_terms=6, bound=1.5):
    M = draw(st.integers(1, max_modes))
    T = draw(st.integers(1, max_terms))
    coeffs = [draw(complex_numbers(1.0)) for _ in range(T)]
    labels = [[draw(complex_numbers(bound)) for _ in range(M)] for _ in range(T)]
    return CatState(coeffs, np.array(labels, dtype=complex).reshape(T, M), M)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, M, T, scale=1.0):
    coeffs = rng.normal(size=T) + 1j * rng.normal(size=T)
    labels = scale * (rng.normal(size=(T, M)) + 1j * rng.normal(size=(T, M)))
    return CatState(coeffs, labels, M)


SQRT = math.sqrt
