import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loopsoup.errors import DivergentQuery, InvalidQuery
from loopsoup.loop_measures import (AlphaQuery, Budget, MeasureKind,
                                    alpha, alpha_hat, concentration_check,
                                    polyline_diameter, read_soup,
                                    sample_brownian_bridge_loop, sample_soup,
                                    write_soup)
from loopsoup.loop_measures.disk_model import (disk_mass_in_domain,
                                               disks_intersection_area)

LOOP = MeasureKind("loop")
DISK = MeasureKind("disk")


def _disk_F(r):
    # antiderivative of (1 - r)^2 / r^3
    return -1.0 / (2.0 * r * r) + 2.0 / r + np.log(r)


# ------------------------------------------------------------ closed forms
def test_annulus_closed_forms():
    for kind, eta in (("loop", 0.2), ("disk", np.pi)):
        for delta, R in ((0.1, 1.0), (0.2, 0.8)):
            v = alpha(AlphaQuery("annulus", 0j, delta=delta, R=R),
                      MeasureKind(kind))
            assert v.method == "closed_form"
            assert v.value == pytest.approx(eta * np.log(R / delta))


def test_annulus_divergent_without_cutoff():
    with pytest.raises(DivergentQuery):
        alpha(AlphaQuery("annulus", 0j, delta=0.0, R=1.0), LOOP)


def test_disk_in_domain_quadrature_oracle():
    # independent oracle: alpha^{disk}_{delta,D}(0) = pi (log((1+d/2)/ (d/2)
    # restricted ...)  -- integral of pi min(1-r, ...)  worked out by hand:
    # disks covering 0 inside D have center |y| <= min(r, 1-r), so
    # alpha = pi int_{delta/2}^{1/2} min(r,1-r)^2/r^3 dr
    #       = pi [ log(1/(2 f)) + F(1) - F(1/2) ]   with f = delta/2 <= 1/2
    for delta, want in ((0.2, np.pi * (np.log(5.0)
                                       + _disk_F(1.0) - _disk_F(0.5))),
                        (1.0, np.pi * (_disk_F(1.0) - _disk_F(0.5)))):
        v = alpha(AlphaQuery("in_domain", 0j, delta=delta), DISK)
        assert v.method == "quadrature"
        assert v.value == pytest.approx(want, rel=1e-8)


def test_disk_in_domain_delta_one_paper_value():
    v = alpha(AlphaQuery("in_domain", 0j, delta=1.0), DISK)
    assert v.value == pytest.approx(np.pi * (np.log(2.0) - 0.5), rel=1e-8)


# --------------------------------------------------- exact disk-area oracle
circles = st.lists(
    st.tuples(st.complex_numbers(max_magnitude=1.0, allow_nan=False,
                                 allow_infinity=False),
              st.floats(0.05, 1.2)),
    min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(circles)
def test_disks_intersection_area_vs_shapely(config):
    import shapely.geometry as geom

    centers = np.array([c for c, _ in config])
    radii = np.array([r for _, r in config])
    region = geom.Point(centers[0].real, centers[0].imag).buffer(
        float(radii[0]), quad_segs=512)
    for c, r in zip(centers[1:], radii[1:]):
        region = region.intersection(
            geom.Point(c.real, c.imag).buffer(float(r), quad_segs=512))
    mine = disks_intersection_area(centers, radii)
    assert mine == pytest.approx(region.area, abs=2e-4)


def test_disks_intersection_area_containment():
    # small disk inside a big one: intersection is the small disk exactly
    area = disks_intersection_area(np.array([0j, 0.1 + 0j]),
                                   np.array([1.0, 0.2]))
    assert area == pytest.approx(np.pi * 0.2**2, rel=1e-12)


def test_disks_intersection_area_disjoint():
    assert disks_intersection_area(np.array([0j, 3.0 + 0j]),
                                   np.array([1.0, 1.0])) == 0.0


# ----------------------------------------------------------------- bridges
def test_bridge_loop_closes_and_roots(rng):
    loop = sample_brownian_bridge_loop(0.3 + 0.1j, 0.5, 64, rng)
    assert loop.points[0] == loop.points[-1] == 0.3 + 0.1j
    assert loop.time_length == 0.5
    assert loop.diameter > 0


def test_bridge_increment_variance(rng):
    # bridge marginal at the midpoint has per-coordinate variance t/4
    t = 0.7
    mids = np.array([sample_brownian_bridge_loop(0j, t, 16, rng).points[8]
                     for _ in range(4000)])
    assert mids.real.var() == pytest.approx(t / 4, rel=0.1)
    assert mids.imag.var() == pytest.approx(t / 4, rel=0.1)


@given(st.integers(4, 40), st.integers(0, 1000))
@settings(max_examples=20, deadline=None)
def test_polyline_diameter_close_to_brute_force(n, seed):
    pts = np.random.default_rng(seed).standard_normal(n) \
        + 1j * np.random.default_rng(seed + 1).standard_normal(n)
    brute = max(abs(a - b) for a in pts for b in pts)
    approx = polyline_diameter(pts)
    # projection over 32 directions: exact up to a cos(pi/64) factor
    assert brute * np.cos(np.pi / 64) <= approx <= brute + 1e-12


# ------------------------------------------------------------------- soups
def test_sample_soup_disk_counts(rng):
    lam, delta = 3.0, 0.4
    counts = [len(sample_soup(lam, delta, DISK, rng=rng).loops)
              for _ in range(300)]
    want = lam * disk_mass_in_domain(delta)
    got = np.mean(counts)
    assert got == pytest.approx(want, abs=3 * np.std(counts) / np.sqrt(300))


def test_sample_soup_marks_symmetric(rng):
    soup = sample_soup(20.0, 0.3, DISK, rng=rng)
    marks = [ml.mark for ml in soup.loops]
    assert set(marks) <= {-1, 1}
    n = len(marks)
    assert abs(sum(marks)) <= 4 * np.sqrt(n)


def test_sample_soup_respects_cutoff_and_domain(rng):
    soup = sample_soup(1.0, 0.3, LOOP, rng=rng)
    for ml in soup.loops:
        assert ml.loop.diameter >= 0.3 * np.cos(np.pi / 64)
        assert np.abs(ml.loop.points).max() < 1.0


def test_sample_soup_t_min_guard(rng):
    with pytest.raises(InvalidQuery):
        sample_soup(1.0, 0.1, LOOP, t_min=0.1, rng=rng)


def test_snapshot_round_trip(tmp_path, rng):
    soup = sample_soup(2.0, 0.25, DISK, rng=rng)
    path = tmp_path / "soup.bin"
    write_soup(soup, path)
    back = read_soup(path)
    assert len(back.loops) == len(soup.loops)
    assert back.lam == soup.lam and back.delta == soup.delta
    for a, b in zip(soup.loops, back.loops):
        assert a.mark == b.mark
        assert a.loop.center == b.loop.center
        assert a.loop.radius == b.loop.radius


# ------------------------------------------------------------- massive/hat
def test_massive_requires_mass_bound():
    with pytest.raises(InvalidQuery):
        MeasureKind("massive")


def test_alpha_hat_small_mass_scales_quadratically(rng):
    # hat-alpha ~ m^2 * integral t dmu for small m: ratio of values at
    # m and m/2 approaches 4
    b = Budget(lam_total=400.0)
    v1 = alpha_hat(0j, 0.5, 1.0, b, rng=np.random.default_rng(3))
    v2 = alpha_hat(0j, 0.5, 0.5, b, rng=np.random.default_rng(3))
    assert v1.value > v2.value > 0


def test_concentration_bound_value(rng):
    est, bound = concentration_check(0.25, 0.5, 1.0,
                                     Budget(lam_total=50.0), rng)
    assert bound == pytest.approx(0.125)
    assert est.value <= bound + 3 * est.std_error + 1e-12
