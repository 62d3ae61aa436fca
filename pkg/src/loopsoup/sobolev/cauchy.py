"""Cauchy-in-delta diagnostic for the renormalized layering field.

Estimates <||delta^{-2 Dim} V^delta - delta'^{-2 Dim} V^{delta'}||^2>
in H^{-alpha} over coupled soups for consecutive cutoff pairs.  All
cutoffs are read off one soup sampled at the finest cutoff, so loops
with diameter >= max(delta, delta') are shared between the two fields
of every pair and only the band in between differs - the coupling that
makes the difference norm small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidQuery, ParameterOutOfRange
from ..geometry import QuadratureGrid, gauss_ring_grid
from ..layering_fields import (CoveringMethod, conformal_dimension,
                               disk_layering_numbers, layering_numbers)
from ..loop_measures import MeasureKind, sample_disk_soups_pooled, sample_soup
from .basis import EigenBasis, build_basis
from .norms import sobolev_norm

__all__ = ["CauchyRow", "cauchy_diagnostic"]

DEFAULT_GRID = (64, 96)
DEFAULT_MODES = 400


@dataclass(frozen=True)
class CauchyRow:
    delta_coarse: float
    delta_fine: float
    mean_sq_norm: float
    std_error: float
    n_soups: int


def _check_window(kind: str, lam: float, beta: float, alpha: float):
    dim = conformal_dimension(kind, lam, beta).value
    if not dim < 0.5:
        raise ParameterOutOfRange(
            f"conformal dimension {dim:.4f} >= 1/2 violates the "
            "convergence hypothesis")
    if alpha <= 1.5:
        raise ParameterOutOfRange("the diagnostic needs alpha > 3/2")
    return dim


def _disk_fields(lam, beta, deltas, n_soups, grid, rng):
    """Renormalized fields at every cutoff, coupled on one pooled soup."""
    soup_id, centers, radii, marks = sample_disk_soups_pooled(
        lam, deltas[-1], n_soups, rng)
    diam = 2.0 * radii
    fields = []
    for d in deltas:
        sel = diam >= d
        n = disk_layering_numbers(soup_id[sel], centers[sel], radii[sel],
                                  marks[sel], grid, n_soups)
        dim = conformal_dimension("disk", lam, beta).value
        fields.append(d ** (-2.0 * dim) * np.exp(1j * beta * n))
    return fields


def _loop_fields(lam, beta, kind, deltas, n_soups, grid, rng, method):
    dim = conformal_dimension(kind, lam, beta).value
    measure = MeasureKind(kind) if kind == "loop" else \
        MeasureKind(kind, mass_bound=1.0)
    fields = [np.empty((n_soups, len(grid.nodes)), dtype=complex)
              for _ in deltas]
    for s in range(n_soups):
        soup = sample_soup(lam, deltas[-1], measure, rng=rng)
        for fi, d in zip(fields, deltas):
            n = layering_numbers(soup, grid.nodes, method, diam_min=d)
            fi[s] = d ** (-2.0 * dim) * np.exp(1j * beta * n)
    return fields


def cauchy_diagnostic(lam: float, beta: float, deltas, alpha: float = 2.0,
                      kind: str = "disk", n_soups: int = 2000,
                      basis: EigenBasis | None = None,
                      grid: QuadratureGrid | None = None,
                      rng=None,
                      method: CoveringMethod | None = None) -> list:
    """Pair norms for consecutive cutoffs of a decreasing delta schedule."""
    deltas = [float(d) for d in deltas]
    if len(deltas) < 2 or any(a <= b for a, b in zip(deltas, deltas[1:])):
        raise InvalidQuery("deltas must be a decreasing list of cutoffs")
    _check_window(kind, lam, beta, alpha)
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    if grid is None:
        grid = gauss_ring_grid(*DEFAULT_GRID)
    if basis is None:
        basis = build_basis(DEFAULT_MODES)

    if kind == "disk":
        fields = _disk_fields(lam, beta, deltas, n_soups, grid, rng)
    else:
        fields = _loop_fields(lam, beta, kind, deltas, n_soups, grid, rng,
                              method or CoveringMethod())

    modes_w = basis.evaluate(grid) * grid.weights
    lam_pow = basis.eigenvalues ** (-alpha)
    rows = []
    for (d0, d1), (f0, f1) in zip(zip(deltas, deltas[1:]),
                                  zip(fields, fields[1:])):
        coeff = (f0 - f1) @ modes_w.T
        norms = np.abs(coeff) ** 2 @ lam_pow
        rows.append(CauchyRow(d0, d1, float(norms.mean()),
                              float(norms.std(ddof=1) / np.sqrt(n_soups)),
                              n_soups))
    return rows


def pair_norm_zero_check(lam: float, beta: float, delta: float,
                         alpha: float = 2.0, kind: str = "disk",
                         basis: EigenBasis | None = None,
                         grid: QuadratureGrid | None = None,
                         rng=None) -> float:
    """delta = delta' gives an exactly zero difference norm."""
    _check_window(kind, lam, beta, alpha)
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    if grid is None:
        grid = gauss_ring_grid(12, 24)
    if basis is None:
        basis = build_basis(40)
    if kind == "disk":
        f = _disk_fields(lam, beta, [delta, delta], 8, grid, rng)
    else:
        f = _loop_fields(lam, beta, kind, [delta, delta], 8, grid, rng,
                         CoveringMethod())
    diff = f[0] - f[1]
    return float(np.abs(sobolev_norm(diff[0], alpha, basis, grid).value))
