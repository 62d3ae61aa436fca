"""Negative Sobolev norms of sampled fields on the unit disk.

||h||^2_{H^{-alpha}} = sum_i eigenvalue_i^{-alpha} |<h, u_i>|^2 over the
Dirichlet eigenbasis; truncated at the basis size with a Weyl-law tail
extrapolation (eigenvalue_i grows like 4 i on the unit disk).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from ..errors import GridMismatch, InvalidQuery, TruncationWarning
from ..geometry import QuadratureGrid
from .basis import EigenBasis

__all__ = ["SobolevNorm", "coefficients", "sobolev_norm"]


@dataclass(frozen=True)
class SobolevNorm:
    alpha: float
    value: float
    truncation: int
    tail_estimate: float


def coefficients(values, grid: QuadratureGrid, basis: EigenBasis) -> np.ndarray:
    """Quadrature pairings <h, u_i> for one field (or a stack of fields).

    `values` has shape (..., size); the result has shape (..., count).
    """
    values = np.asarray(values)
    if values.shape[-1] != len(grid.nodes):
        raise GridMismatch("field values do not match the grid size")
    modes = basis.evaluate(grid)
    return values * grid.weights @ modes.T


def _tail(coeff_sq: np.ndarray, lam: np.ndarray, alpha: float) -> float:
    """Weyl extrapolation of sum_{i > count} eigenvalue_i^{-alpha} |a_i|^2.

    Uses the mean |a_i|^2 over the last block of modes and eigenvalue_i
    ~ 4 i, so the remaining sum is 4^{-alpha} zeta(alpha, count + 1).
    """
    count = len(lam)
    block = max(10, count // 8)
    a2 = float(coeff_sq[-block:].mean())
    return a2 * 4.0 ** (-alpha) * float(zeta(alpha, count + 1))


def sobolev_norm(field, alpha: float, basis: EigenBasis,
                 grid: QuadratureGrid | None = None) -> SobolevNorm:
    """H^{-alpha} norm (squared) of a FieldSample or raw node values."""
    if alpha <= 1.5:
        raise InvalidQuery("the diagnostic needs alpha > 3/2")
    if grid is None:
        grid = field.grid
        values = field.values
    else:
        values = np.asarray(field)
    a = coefficients(values, grid, basis)
    coeff_sq = np.abs(a) ** 2
    lam = basis.eigenvalues
    value = float(coeff_sq @ lam ** (-alpha))
    tail = _tail(coeff_sq, lam, alpha)
    if tail > 0.1 * value > 0:
        warnings.warn(
            f"tail estimate {tail:.3g} exceeds 10% of the truncated "
            f"norm {value:.3g}; increase the basis size",
            TruncationWarning)
    return SobolevNorm(float(alpha), value, basis.count, tail)
