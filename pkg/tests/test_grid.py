import numpy as np
import pytest
from hypothesis import given, strategies as st

from degenflow.grid import GammaSet, Grid1D, Grid2D, distance_field, torus_distance_to_gamma


@pytest.mark.parametrize(
    "m, nodes",
    [
        (1, [-1.0, 0.0]),
        (2, [-1.0, -0.5, 0.0, 0.5]),
        (3, [-1.0, -2 / 3, -1 / 3, 0.0, 1 / 3, 2 / 3]),
    ],
)
def test_nodes_small_grids(m, nodes):
    g = Grid1D(m)
    np.testing.assert_allclose(g.nodes, nodes, atol=1e-15)
    assert g.size == 2 * m
    assert g.spacing == pytest.approx(1 / m)


def test_spacing_m2():
    assert Grid1D(2).spacing == 0.5


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_rejects_bad_m(bad):
    with pytest.raises(ValueError):
        Grid1D(bad)


def test_position_roundtrip():
    g = Grid1D(5)
    for p, i in enumerate(g.indices):
        assert g.position(i) == p
    assert g.position(5) == g.position(-5)


def test_from_size():
    assert Grid1D.from_size(8).m == 4
    for n in (0, 7):
        with pytest.raises(ValueError):
            Grid1D.from_size(n)


@pytest.mark.parametrize("x, expected", [(0.5, 0.0), (0.0, 0.5), (-1.0, 0.5), (-0.5, 0.0), (0.9, 0.4)])
def test_distance_1d(x, expected):
    assert torus_distance_to_gamma(x) == pytest.approx(expected)


@given(st.floats(-10, 10, allow_nan=False))
def test_distance_periodic_and_bounded(x):
    d = torus_distance_to_gamma(x)
    assert 0 <= d <= 0.5 + 1e-12
    assert d == pytest.approx(torus_distance_to_gamma(x + 2.0), abs=1e-9)
    assert d == pytest.approx(torus_distance_to_gamma(-x), abs=1e-9)


def test_circle_distance():
    gam = GammaSet.circle(radius=0.5)
    assert torus_distance_to_gamma([0.0, 0.0], gam) == pytest.approx(0.5)
    assert torus_distance_to_gamma([0.5, 0.0], gam) == pytest.approx(0.0)
    # nearest image across the wrap
    assert torus_distance_to_gamma([-1.0, 0.0], gam) == pytest.approx(0.5)


def test_circle_validation():
    with pytest.raises(ValueError):
        GammaSet.circle(center=(0.7, 0.0), radius=0.5)
    with pytest.raises(ValueError):
        GammaSet("segment")


def test_distance_field_shapes():
    assert distance_field(Grid1D(4)).shape == (8,)
    assert distance_field(Grid2D(4), GammaSet.circle()).shape == (8, 8)
    with pytest.raises(ValueError):
        distance_field(Grid1D(4), GammaSet.circle())
