"""Chaos expansions, isometry identities, and convergence diagnostics."""

from .chaos import (
    ChaosLab,
    ChaosOrderTerm,
    ChaosReport,
    poisson_chaos_norm,
    gaussian_chaos_norm,
    variance_identity_check,
    cil_diagnostic,
    report_to_json,
)
from .fdd import energy_distance, permutation_test, fdd_convergence_test

__all__ = [
    "ChaosLab",
    "ChaosOrderTerm",
    "ChaosReport",
    "poisson_chaos_norm",
    "gaussian_chaos_norm",
    "variance_identity_check",
    "cil_diagnostic",
    "report_to_json",
    "energy_distance",
    "permutation_test",
    "fdd_convergence_test",
]
