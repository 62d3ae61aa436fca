import numpy as np
import pytest
from hypothesis import given, strategies as st

from loopsoup.geometry import (Bump, MoebiusMap, UNIT_DISK, dist_to_boundary,
                               gauss_ring_grid, integrate, ring_grid)

interior = st.complex_numbers(max_magnitude=0.95, allow_nan=False,
                              allow_infinity=False)


@given(a=st.complex_numbers(max_magnitude=0.9), theta=st.floats(0, 6.28),
       w=interior)
def test_moebius_round_trip(a, theta, w):
    f = MoebiusMap(a=a, theta=theta)
    assert abs(f.inverse(f.apply(w)) - w) < 1e-9


@given(a=st.complex_numbers(max_magnitude=0.9), w=interior)
def test_moebius_maps_disk_to_disk(a, w):
    assert abs(MoebiusMap(a=a).apply(w)) < 1.0


@given(a=st.complex_numbers(max_magnitude=0.9), w=interior)
def test_moebius_derivative_matches_finite_difference(a, w):
    f = MoebiusMap(a=a)
    h = 1e-7
    fd = abs(f.apply(w + h) - f.apply(w)) / h
    assert fd == pytest.approx(float(f.deriv_abs(w)), rel=1e-4)


def test_grid_weights_integrate_area():
    for grid in (ring_grid(64), gauss_ring_grid(16, 32)):
        assert np.sum(grid.weights) == pytest.approx(np.pi, rel=1e-12)


def test_gauss_grid_integrates_polynomial_exactly():
    grid = gauss_ring_grid(8, 16)
    # int |z|^2 dz over the unit disk = pi/2
    assert integrate(lambda z: np.abs(z) ** 2, grid) == \
        pytest.approx(np.pi / 2, rel=1e-12)


def test_bump_supported_in_ball():
    phi = Bump(0.2 + 0.1j, 0.3)
    assert phi(0.2 + 0.1j) > 0
    assert phi(0.2 + 0.1j + 0.31) == 0.0
    assert phi(0.2 + 0.1j + 0.29) > 0


def test_dist_to_boundary():
    assert float(dist_to_boundary(0j)) == pytest.approx(1.0)
    assert float(dist_to_boundary(0.25 + 0j)) == pytest.approx(0.75)
    assert UNIT_DISK.contains(0.5j) and not UNIT_DISK.contains(1.5j)
