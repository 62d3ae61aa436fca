import numpy as np
import pytest

from loopsoup.errors import InvalidQuery
from loopsoup.geometry import Bump, UNIT_DISK, gauss_ring_grid, ring_grid
from loopsoup.layering_fields import (CoveringMethod, conformal_dimension,
                                      covers, disk_layering_numbers,
                                      field_sample, layering_number,
                                      layering_numbers, n_point_estimate,
                                      pair)
from loopsoup.loop_measures import (Loop, MarkedLoop, MarkedSoup,
                                    MeasureKind, sample_disk_soups_pooled,
                                    sample_soup)

DISK = MeasureKind("disk")


def _manual_soup(disks, lam=1.0, delta=0.1):
    loops = [MarkedLoop(Loop.from_disk(c, r), m) for c, r, m in disks]
    return MarkedSoup(loops, lam, delta, DISK, UNIT_DISK, 0.0, None, {})


def test_conformal_dimension_formulas():
    assert conformal_dimension("loop", 2.0, np.pi).value == \
        pytest.approx(2.0 * 2.0 / 10.0)
    assert conformal_dimension("massive", 2.0, np.pi).value == \
        pytest.approx(0.4)
    assert conformal_dimension("disk", 2.0, np.pi).value == \
        pytest.approx(2.0 * np.pi)
    with pytest.raises(InvalidQuery):
        conformal_dimension("other", 1.0, 1.0)


def test_layering_number_manual_count():
    soup = _manual_soup([(0j, 0.5, 1), (0.1 + 0j, 0.5, 1),
                         (0.8j, 0.1, -1), (0j, 0.2, -1)])
    assert layering_number(soup, 0j) == 1 + 1 - 1       # inside first three
    assert layering_number(soup, 0.8j) == -1
    assert layering_number(soup, 0.45 + 0j) == 2
    with pytest.raises(InvalidQuery):
        layering_number(soup, 1.2 + 0j)


def test_layering_numbers_diam_min_subset():
    soup = _manual_soup([(0j, 0.5, 1), (0j, 0.1, 1)])
    z = np.array([0j])
    assert layering_numbers(soup, z)[0] == 2
    assert layering_numbers(soup, z, diam_min=0.5)[0] == 1


def test_disk_layering_numbers_vs_brute_force(rng):
    for grid in (ring_grid(9), gauss_ring_grid(8, 16)):
        n_soups = 5
        soup_id, centers, radii, marks = sample_disk_soups_pooled(
            6.0, 0.2, n_soups, rng)
        fast = disk_layering_numbers(soup_id, centers, radii, marks,
                                     grid, n_soups)
        brute = np.zeros((n_soups, len(grid.nodes)), dtype=int)
        for s, c, r, m in zip(soup_id, centers, radii, marks):
            brute[s] += m * (np.abs(grid.nodes - c) <= r)
        assert np.array_equal(fast, brute)


def test_field_sample_normalization(rng):
    soup = sample_soup(1.0, 0.25, DISK, rng=rng)
    grid = ring_grid(8)
    beta = np.pi / 2
    field = field_sample(soup, grid, beta)
    dim = conformal_dimension("disk", 1.0, beta).value
    n = layering_numbers(soup, grid.nodes)
    want = 0.25 ** (-2 * dim) * np.exp(1j * beta * n)
    assert np.allclose(field.values, want)


def test_pair_is_quadrature_sum(rng):
    soup = sample_soup(1.0, 0.3, DISK, rng=rng)
    grid = ring_grid(8)
    field = field_sample(soup, grid, 1.0)
    phi = Bump(0j, 0.8)
    direct = np.sum(field.values * phi(grid.nodes) * grid.weights)
    assert pair(field, phi) == pytest.approx(complex(direct))


def test_n_point_estimate_requires_distinct_points(rng):
    with pytest.raises(InvalidQuery):
        n_point_estimate([0j, 0j], 1.0, 1.0, 0.2, DISK, UNIT_DISK, 10, rng)


def test_one_point_matches_quadrature_oracle(rng):
    # <delta^{-2 Dim} V(z)> = delta^{-2 Dim} e^{-lam (1-cos beta) alpha}
    from loopsoup.loop_measures import AlphaQuery, alpha
    lam, beta, delta, z = 0.5, np.pi / 2, 0.4, 0.2 + 0.1j
    a = alpha(AlphaQuery("in_domain", z, delta=delta), DISK).value
    dim = conformal_dimension("disk", lam, beta).value
    want = delta ** (-2 * dim) * np.exp(-lam * (1 - np.cos(beta)) * a)
    value, err = n_point_estimate([z], lam, beta, delta, DISK, UNIT_DISK,
                                  3000, rng)
    assert abs(value - want) <= 3.0 * err


def test_covers_disk_loop():
    loop = Loop.from_disk(0.5 + 0j, 0.2)
    assert covers(loop, 0.5 + 0j)
    assert covers(loop, 0.69 + 0j)
    assert not covers(loop, 0.75 + 0j)


def test_covering_method_validation():
    with pytest.raises(InvalidQuery):
        CoveringMethod("magic")
    with pytest.raises(InvalidQuery):
        CoveringMethod("flood", resolution=16)
