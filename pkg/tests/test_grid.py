import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonlocal_decay import Grid
from nonlocal_decay.errors import GridError


def test_nodes_and_wavenumbers():
    g = Grid(256, 10.0)
    assert g.h == pytest.approx(20.0 / 256)
    assert g.x[0] == -10.0
    assert g.x[g.origin_index] == 0.0
    assert g.dxi == pytest.approx(math.pi / 10.0)
    assert np.allclose(np.sort(g.xi), g.dxi * np.arange(-128, 128))


@pytest.mark.parametrize("n", [1000, 128, 0, 255])
def test_bad_sizes(n):
    with pytest.raises(GridError):
        Grid(n, 1.0)


def test_bad_length():
    with pytest.raises(GridError):
        Grid(256, 0.0)


@given(st.integers(min_value=8, max_value=14), st.floats(min_value=0.5, max_value=500))
def test_reflection_map(p, X):
    g = Grid(2**p, X)
    r = g.reflection_indices()
    assert np.allclose(g.x[r][1:], -g.x[1:], atol=1e-12 * X)
    assert np.array_equal(r[r], np.arange(g.n_points))


def test_transforms_round_trip():
    g = Grid(512, 5.0)
    u = np.exp(-g.x**2)
    assert np.allclose(g.to_physical(g.to_spectral(u)).real, u, atol=1e-15)
