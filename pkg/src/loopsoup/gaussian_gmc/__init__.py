"""Gaussian layering fields, covariance kernels, tilts, and tilted GMC."""

from .hyp import hyp3f2_series, kernel_loop_disk, kernel_residual
from .kernels import (
    GmcParams,
    KernelMatrix,
    gaussian_dimension,
    kernel_matrix,
    psd_repair,
    kernel_to_csv,
    kernel_from_csv,
)
from .fields import (
    TiltProfile,
    sample_gaussian_vectors,
    sample_gaussian_field,
    tilt_profile,
    tilted_gmc_pair,
)

__all__ = [
    "hyp3f2_series",
    "kernel_loop_disk",
    "kernel_residual",
    "GmcParams",
    "KernelMatrix",
    "gaussian_dimension",
    "kernel_matrix",
    "psd_repair",
    "kernel_to_csv",
    "kernel_from_csv",
    "TiltProfile",
    "sample_gaussian_vectors",
    "sample_gaussian_field",
    "tilt_profile",
    "tilted_gmc_pair",
]
