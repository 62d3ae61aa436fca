import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loopsoup.errors import InvalidQuery, NotPositiveSemidefinite
from loopsoup.gaussian_gmc import (GmcParams, gaussian_dimension,
                                   hyp3f2_series, kernel_from_csv,
                                   kernel_loop_disk, kernel_matrix,
                                   kernel_residual, kernel_to_csv,
                                   psd_repair, sample_gaussian_field,
                                   sample_gaussian_vectors, tilt_profile,
                                   tilted_gmc_pair)
from loopsoup.geometry import MoebiusMap, gauss_ring_grid
from loopsoup.loop_measures import Budget

mpmath = pytest.importorskip("mpmath")


# ------------------------------------------------------------------ 3F2
def _mp_3f2(x):
    return float(mpmath.hyp3f2(1, mpmath.mpf(4) / 3, 1,
                               mpmath.mpf(5) / 3, 2, x))


@pytest.mark.parametrize("x", [0.0, 0.3, 0.9, 0.99, 0.9999, 1 - 1e-8,
                               1 - 1e-12])
def test_hyp3f2_against_mpmath(x):
    assert hyp3f2_series(x) == pytest.approx(_mp_3f2(x), rel=1e-8)


def test_hyp3f2_at_one():
    # terminating value F(1) = Gamma identities; from the Euler integral
    assert hyp3f2_series(1.0) == pytest.approx(_mp_3f2(1.0), rel=1e-8)


@given(st.floats(0.0, 1.0))
@settings(max_examples=30, deadline=None)
def test_hyp3f2_monotone_increasing(x):
    # positive coefficients: F increasing on [0, 1]
    assert hyp3f2_series(x) >= 1.0 - 1e-12
    assert hyp3f2_series(min(1.0, x + 0.01)) >= hyp3f2_series(x) - 1e-10


# ---------------------------------------------------------------- kernel
@given(z=st.complex_numbers(max_magnitude=0.85),
       w=st.complex_numbers(max_magnitude=0.85),
       a=st.complex_numbers(max_magnitude=0.8))
@settings(max_examples=40, deadline=None)
def test_kernel_cross_ratio_moebius_invariant(z, w, a):
    # sigma = |z-w|^2 / |1 - z conj(w)|^2 is invariant under disk
    # automorphisms, hence so is the kernel
    if abs(z - w) < 1e-3:
        return
    f = MoebiusMap(a=a)
    assert kernel_loop_disk(f.apply(z), f.apply(w)) == \
        pytest.approx(kernel_loop_disk(z, w), rel=1e-9, abs=1e-12)


def test_kernel_at_center_closed_form():
    # at z = 0 the cross-ratio is |w|^2 exactly
    w = 0.4 + 0.1j
    s = abs(w) ** 2
    want = -0.1 * (np.log(s) + (1 - s) * hyp3f2_series(1 - s))
    assert kernel_loop_disk(0j, w) == pytest.approx(want, rel=1e-12)


def test_kernel_residual_bounded_and_continuous():
    # K - (1/5) log(1/|z-w|) along shrinking separations at z = 0
    seps = np.geomspace(1e-2, 1e-6, 9)
    vals = [kernel_residual(0j, r + 0j) for r in seps]
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(np.diff(vals))) < 5e-2
    # the residual settles: last two decades move < 1e-3
    assert abs(vals[-1] - vals[-3]) < 1e-3


def test_gaussian_dimension_window():
    assert gaussian_dimension("loop", 1.0) == pytest.approx(0.05)
    assert gaussian_dimension("disk", 0.5) == pytest.approx(np.pi * 0.25 / 4)
    GmcParams(xi=3.0, kind="loop")       # dimension 0.45 < 1/2: allowed
    with pytest.raises(InvalidQuery):
        GmcParams(xi=4.0, kind="loop")   # dimension 0.8 >= 1/2: rejected


def test_psd_repair_adds_minimal_jitter():
    m = np.eye(3)
    m[0, 1] = m[1, 0] = 1.0 + 1e-9   # slightly indefinite
    repaired, jitter = psd_repair(m)
    assert jitter > 0
    assert np.linalg.eigvalsh(repaired).min() >= -1e-15


def test_psd_repair_raises_beyond_cap():
    m = -np.eye(3)
    with pytest.raises(NotPositiveSemidefinite):
        psd_repair(m)


# ------------------------------------------------------- matrix and field
@pytest.fixture(scope="module")
def small_kernel():
    grid = gauss_ring_grid(3, 6)
    return kernel_matrix(grid, 0.3, "disk", Budget(), None,
                         np.random.default_rng(0))


def test_kernel_matrix_symmetric_psd(small_kernel):
    k = small_kernel.entries
    assert np.allclose(k, k.T)
    assert np.linalg.eigvalsh(k).min() > -1e-10


def test_kernel_csv_round_trip(tmp_path, small_kernel):
    path = str(tmp_path / "kernel.csv")
    kernel_to_csv(small_kernel, path)
    back = kernel_from_csv(path)
    assert np.allclose(back.entries, small_kernel.entries)
    assert back.delta == small_kernel.delta
    assert back.kind == small_kernel.kind


def test_gaussian_sampler_covariance(small_kernel, rng):
    draws = sample_gaussian_vectors(small_kernel, 40000, rng)
    emp = draws.T @ draws / len(draws)
    k = small_kernel.entries
    n = len(draws)
    se = np.sqrt((np.outer(np.diag(k), np.diag(k)) + k**2) / n)
    assert np.all(np.abs(emp - k) <= 4.0 * se + 1e-12)


def test_gaussian_field_one_point(small_kernel, rng):
    xi = 0.3
    field = sample_gaussian_field(small_kernel, xi, rng)
    g = field.params["gaussian"]
    k00 = small_kernel.entries[0, 0]
    # single draw sanity: field value has the stated modulus
    dim = gaussian_dimension("disk", xi)
    assert np.allclose(np.abs(field.values),
                       small_kernel.delta ** (-2 * dim))
    assert np.isrealobj(g)
    assert k00 > 0


def test_tilt_profile_radial_symmetry():
    grid = gauss_ring_grid(3, 8)
    tilt = tilt_profile(grid, kind="disk")
    theta = tilt.theta.reshape(-1)
    r = np.abs(grid.nodes)
    for radius in np.unique(np.round(r, 12)):
        sel = np.round(r, 12) == radius
        assert np.ptp(theta[sel]) < 1e-9
