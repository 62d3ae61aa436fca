"""Numerical verifications of the auxiliary analytic facts used by the
acceptance suite (disk double integral, massive thinning bounds,
conformal covariance of means, loop concentration)."""

from .lemmas import (LemmaCheckResult, check_concentration,
                     check_conformal_covariance_disk,
                     check_disk_triple_integral, check_massive_bounds,
                     massive_deficit_curve, result_to_json)

__all__ = [
    "LemmaCheckResult", "check_disk_triple_integral", "check_massive_bounds",
    "massive_deficit_curve", "check_conformal_covariance_disk",
    "check_concentration", "result_to_json",
]
