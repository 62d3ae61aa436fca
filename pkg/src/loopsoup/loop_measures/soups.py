"""Poisson loop-soup sampling for the three measures.

Loop/massive kinds use the dominating-measure thinning construction:
Poisson(lambda |D| / (2 pi t_min)) candidate loops with uniform roots
and duration density proportional to t^-2 on [t_min, infinity); a
candidate is kept iff its diameter is >= delta and it stays inside the
domain (massive kind additionally survives with probability
e^{-m^2 t}).  The disk kind is sampled exactly from dy dr / r^3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ..errors import BudgetError, InvalidQuery
from ..geometry import Domain, UNIT_DISK
from .loops import Loop, MarkedLoop, MeasureKind, polyline_diameter
from .bridges import sample_bridges_grouped
from .disk_model import disk_mass_in_domain, sample_radii

__all__ = [
    "MarkedSoup",
    "sample_soup",
    "sample_disk_soups_pooled",
    "t_min_truncation_bound",
    "disk_radial_mass",
]

disk_radial_mass = disk_mass_in_domain

CANDIDATE_CAP = 50_000_000


@dataclass
class MarkedSoup:
    loops: list[MarkedLoop]
    lam: float
    delta: float
    measure: MeasureKind
    domain: Domain = UNIT_DISK
    t_min: float = 0.0
    seed: int | None = None
    bias_report: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.loops)


def t_min_truncation_bound(delta: float, t_min: float, area: float = np.pi) -> float:
    """Upper bound on the neglected candidate mass below the time floor:
    (|D| / 2 pi) * integral_0^{t_min} 4 e^{-delta^2/(8t)} t^-2 dt."""
    if t_min <= 0:
        return 0.0
    val = quad(lambda t: 4.0 * np.exp(-delta**2 / (8.0 * t)) / t**2, 0.0, t_min,
               limit=200)[0]
    return float(area / (2.0 * np.pi) * val)


def _sample_durations(n: int, t_min: float, rng: np.random.Generator) -> np.ndarray:
    """Density proportional to t^-2 on [t_min, infinity)."""
    return t_min / rng.random(n)


def sample_soup(lam: float, delta: float, measure: MeasureKind,
                domain: Domain = UNIT_DISK, t_min: float | None = None,
                rng: np.random.Generator | int | None = None,
                candidate_cap: int = CANDIDATE_CAP) -> MarkedSoup:
    """One marked soup with intensity lam * mu*_D restricted to diam >= delta."""
    if lam <= 0 or delta <= 0:
        raise InvalidQuery("lambda and delta must be positive")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    kept: list[MarkedLoop] = []
    bias: dict = {}

    if measure.kind == "disk":
        mass = disk_mass_in_domain(delta)
        n = rng.poisson(lam * mass)
        r = sample_radii(n, delta, rng)
        u = np.sqrt(rng.random(n)) * (1.0 - r)
        y = u * np.exp(2j * np.pi * rng.random(n))
        for yi, ri in zip(y, r):
            kept.append(MarkedLoop(Loop.from_disk(yi, ri), 1))
        t_min = 0.0
    else:
        if t_min is None:
            t_min = delta**2 / 50.0
        if t_min > delta**2 / 50.0:
            raise InvalidQuery("t_min must be <= delta^2 / 50")
        area = np.pi  # unit disk (Moebius images coincide with the disk)
        mass = lam * area / (2.0 * np.pi * t_min)
        if mass > candidate_cap:
            raise BudgetError(
                f"candidate budget exceeded: expected {mass:.3g} candidates")
        n = rng.poisson(mass)
        roots = np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
        ts = _sample_durations(n, t_min, rng)
        for idx, blocks, diams in sample_bridges_grouped(roots, ts, delta, rng):
            sel = diams >= delta
            if not sel.any():
                continue
            inside = np.abs(blocks[sel]).max(axis=1) < 1.0
            for pts, t in zip(blocks[sel][inside], ts[idx][sel][inside]):
                if measure.kind == "massive" and \
                        rng.exponential() <= measure.m2 * t:
                    continue
                kept.append(MarkedLoop(Loop.from_polyline(pts, t), 1))
        bias["t_min_truncation_mass"] = t_min_truncation_bound(delta, t_min)

    marks = rng.integers(0, 2, size=len(kept)) * 2 - 1
    for ml, m in zip(kept, marks):
        ml.mark = int(m)
    return MarkedSoup(kept, lam, delta, measure, domain, t_min, seed, bias)


def sample_disk_soups_pooled(lam: float, delta: float, n_soups: int,
                             rng: np.random.Generator,
                             reach: float | None = None):
    """Disk-kind soups pooled into flat arrays.

    Samples the superposition of ``n_soups`` independent soups (all
    disks inside the unit disk, diameter >= delta, optionally restricted
    to disks able to cover some point of B(0, reach)) and assigns each
    disk a uniform soup index.

    Returns (soup_id, centers, radii, marks).
    """
    from .disk_model import radial_mass_profile

    if reach is None:
        mass = disk_mass_in_domain(delta)
    else:
        mass = radial_mass_profile(delta, reach)[3]
    n = rng.poisson(lam * mass * n_soups)
    soup_id = rng.integers(0, n_soups, size=n)
    r = sample_radii(n, delta, rng, reach=reach)
    lim = 1.0 - r
    if reach is not None:
        lim = np.minimum(lim, reach + r)
    y = lim * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    marks = (rng.integers(0, 2, size=n) * 2 - 1).astype(np.int8)
    return soup_id, y, r, marks
