"""Loop measures: Brownian loop, disk (Boolean) and massive variants.

Exposes the loop/soup types, the bridge sampler, soup sampling, the
alpha-quantity evaluator and the snapshot format.
"""

from .loops import Loop, MarkedLoop, MeasureKind, polyline_diameter
from .montecarlo import LoopEventSpec, MCResult, loop_event_mc
from .bridges import sample_brownian_bridge_loop, bridge_steps
from .soups import (
    MarkedSoup,
    sample_soup,
    sample_disk_soups_pooled,
    disk_radial_mass,
    t_min_truncation_bound,
)
from .alpha import (
    AlphaQuery,
    AlphaValue,
    Budget,
    alpha,
    alpha_hat,
    psi_star,
    concentration_check,
)
from .disk_model import disk_annulus_mc
from .snapshot import write_soup, read_soup

__all__ = [
    "Loop",
    "MarkedLoop",
    "MeasureKind",
    "MarkedSoup",
    "polyline_diameter",
    "LoopEventSpec",
    "MCResult",
    "loop_event_mc",
    "sample_brownian_bridge_loop",
    "bridge_steps",
    "sample_soup",
    "sample_disk_soups_pooled",
    "disk_radial_mass",
    "disk_annulus_mc",
    "t_min_truncation_bound",
    "AlphaQuery",
    "AlphaValue",
    "Budget",
    "alpha",
    "alpha_hat",
    "psi_star",
    "concentration_check",
    "write_soup",
    "read_soup",
]
