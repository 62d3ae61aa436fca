"""Dirichlet eigenbasis, negative Sobolev norms, and the Cauchy-in-delta
convergence diagnostic on the unit disk."""

from .basis import (EigenBasis, Mode, basis_from_csv, basis_to_csv,
                    bessel_zero, build_basis, grieser_fit, weyl_counts)
from .norms import SobolevNorm, coefficients, sobolev_norm
from .cauchy import CauchyRow, cauchy_diagnostic, pair_norm_zero_check

__all__ = [
    "EigenBasis", "Mode", "bessel_zero", "build_basis",
    "basis_to_csv", "basis_from_csv", "grieser_fit", "weyl_counts",
    "SobolevNorm", "coefficients", "sobolev_norm",
    "CauchyRow", "cauchy_diagnostic", "pair_norm_zero_check",
]
