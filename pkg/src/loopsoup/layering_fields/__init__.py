"""Layering numbers, Poisson layering fields, and n-point statistics."""

from .fields import (
    ConformalDimension,
    CoveringMethod,
    FieldSample,
    conformal_dimension,
    covers,
    layering_number,
    layering_numbers,
    field_sample,
    pair,
    n_point_estimate,
    field_to_csv,
    npoint_to_csv,
)
from .diskfield import disk_layering_numbers

__all__ = [
    "ConformalDimension",
    "CoveringMethod",
    "FieldSample",
    "conformal_dimension",
    "covers",
    "layering_number",
    "layering_numbers",
    "field_sample",
    "pair",
    "n_point_estimate",
    "field_to_csv",
    "npoint_to_csv",
    "disk_layering_numbers",
]
