"""Tests for the Dirichlet eigenbasis and negative Sobolev diagnostics."""

import numpy as np
import pytest

from loopsoup.errors import (GridMismatch, InvalidQuery, NumericalFailure,
                             ParameterOutOfRange, TruncationWarning)
from loopsoup.geometry import gauss_ring_grid
from loopsoup.sobolev import (basis_from_csv, basis_to_csv, bessel_zero,
                              build_basis, cauchy_diagnostic, coefficients,
                              grieser_fit, pair_norm_zero_check, sobolev_norm,
                              weyl_counts)


def _j0_series(x):
    """Independent J0 via its power series (converges fast for x < 10)."""
    total, term = 1.0, 1.0
    for m in range(1, 40):
        term *= -(x * x / 4.0) / (m * m)
        total += term
    return total


def _bisect_first_j0_zero():
    lo, hi = 2.0, 3.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _j0_series(lo) * _j0_series(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_first_zero_matches_bisection_oracle():
    assert bessel_zero(0, 1) == pytest.approx(_bisect_first_j0_zero(),
                                              abs=1e-10)


def test_zeros_interlace_and_increase():
    for n in range(4):
        zeros = [bessel_zero(n, k) for k in range(1, 6)]
        assert all(a < b for a, b in zip(zeros, zeros[1:]))
        # zeros of J_n and J_{n+1} interlace
        nxt = [bessel_zero(n + 1, k) for k in range(1, 5)]
        for k in range(4):
            assert zeros[k] < nxt[k] < zeros[k + 1]


def test_bessel_zero_rejects_bad_indices():
    with pytest.raises((InvalidQuery, NumericalFailure, ValueError)):
        bessel_zero(0, 0)


def test_basis_sorted_and_eigenvalues_are_squared_zeros():
    basis = build_basis(30)
    assert basis.count == 30
    lam = basis.eigenvalues
    assert np.all(np.diff(lam) >= -1e-12)
    for mode in basis.modes:
        assert mode.eigenvalue == pytest.approx(mode.zero ** 2)


def test_orthonormality_on_quadrature_grid():
    basis = build_basis(20)
    grid = gauss_ring_grid(48, 64)
    modes = basis.evaluate(grid)
    gram = (modes * grid.weights) @ modes.T
    assert np.max(np.abs(gram - np.eye(20))) < 1e-6


def test_ground_mode_is_radial():
    basis = build_basis(1)
    grid = gauss_ring_grid(6, 16)
    vals = basis.evaluate(grid)[0].reshape(6, 16)
    assert np.max(np.abs(vals - vals[:, :1])) < 1e-12


def test_norm_of_single_eigenmode():
    basis = build_basis(25)
    grid = gauss_ring_grid(48, 64)
    u1 = basis.evaluate(grid)[0]
    out = sobolev_norm(u1, 2.0, basis, grid)
    assert out.value == pytest.approx(basis.eigenvalues[0] ** -2.0, rel=1e-6)


def test_norm_decreases_with_alpha():
    basis = build_basis(25)
    grid = gauss_ring_grid(32, 48)
    field = np.exp(1j * grid.nodes.real)
    norms = [sobolev_norm(field, a, basis, grid).value
             for a in (1.6, 2.0, 3.0)]
    assert norms[0] > norms[1] > norms[2] > 0


def test_zero_field_zero_norm():
    basis = build_basis(10)
    grid = gauss_ring_grid(8, 12)
    out = sobolev_norm(np.zeros(len(grid.nodes)), 2.0, basis, grid)
    assert out.value == 0.0 and out.tail_estimate == 0.0


def test_alpha_window_guard():
    basis = build_basis(5)
    grid = gauss_ring_grid(4, 8)
    with pytest.raises(InvalidQuery):
        sobolev_norm(np.ones(len(grid.nodes)), 1.2, basis, grid)


def test_grid_mismatch_guard():
    basis = build_basis(5)
    grid = gauss_ring_grid(4, 8)
    with pytest.raises(GridMismatch):
        coefficients(np.ones(7), grid, basis)


def test_truncation_warning_with_tiny_basis():
    basis = build_basis(4)
    grid = gauss_ring_grid(24, 32)
    rng = np.random.default_rng(7)
    field = rng.normal(size=len(grid.nodes))
    with pytest.warns(TruncationWarning):
        sobolev_norm(field, 1.6, basis, grid)


def test_weyl_counts_track_area_law():
    basis = build_basis(300)
    lam = basis.eigenvalues
    levels = [lam[49], lam[149], lam[249]]
    out = weyl_counts(basis, levels)
    # N(L) / L should stabilize near 1/4 on the unit disk
    for L, ratio in out.items():
        assert abs(ratio - 0.25) < 0.05
    with pytest.raises(InvalidQuery):
        weyl_counts(basis, [10.0 * lam[-1]])


def test_grieser_sup_norm_fit():
    basis = build_basis(250)
    out = grieser_fit(basis, gauss_ring_grid(64, 96))
    assert 0.3 < out["c"] < 1.5
    assert np.all(np.asarray(out["sup_norms"]) > 0)


def test_basis_csv_round_trip(tmp_path):
    basis = build_basis(15)
    path = tmp_path / "basis.csv"
    basis_to_csv(basis, str(path))
    back = basis_from_csv(str(path))
    assert back.count == basis.count
    for a, b in zip(basis.modes, back.modes):
        assert (a.n, a.k, a.parity) == (b.n, b.k, b.parity)
        assert a.zero == b.zero and a.normalization == b.normalization


def test_pair_norm_vanishes_for_equal_cutoffs():
    assert pair_norm_zero_check(0.25, np.pi / 2, 0.2, rng=3) == 0.0


def test_cauchy_diagnostic_guards():
    with pytest.raises(InvalidQuery):
        cauchy_diagnostic(0.25, np.pi / 2, [0.2, 0.3])
    with pytest.raises(ParameterOutOfRange):
        cauchy_diagnostic(0.25, np.pi, [0.4, 0.2])  # disk dimension >= 1/2


def test_cauchy_diagnostic_small_run():
    basis = build_basis(60)
    grid = gauss_ring_grid(16, 24)
    rows = cauchy_diagnostic(0.25, np.pi / 2, [0.4, 0.2], n_soups=200,
                             basis=basis, grid=grid, rng=11)
    assert len(rows) == 1
    row = rows[0]
    assert row.delta_coarse == 0.4 and row.delta_fine == 0.2
    assert row.mean_sq_norm > 0 and row.std_error > 0
    assert row.n_soups == 200
