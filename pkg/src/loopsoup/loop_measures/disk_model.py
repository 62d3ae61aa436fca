"""Disk (Boolean) model: exact quadrature and sampling under dy dr/r^3.

A disk-model "loop" is the boundary circle of B(y, r); its hull is the
closed disk, so every covering/containment event is an explicit region
in (y, r).  Alpha quantities reduce to

    integral over r of  area{admissible y}  dr / r^3,

with the y-region an intersection/difference of disks whose area is
computed with shapely polygons (regular n-gons radius-corrected to the
exact disk area).
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from ..errors import DivergentQuery, InvalidQuery

__all__ = [
    "disk_polygon",
    "region_area",
    "alpha_quad",
    "disk_mass_in_domain",
    "radial_mass_profile",
    "sample_radii",
    "disk_annulus_mc",
]

_QUAD_SEGS = 96
# inflate the buffer radius so the inscribed polygon has the exact disk area
_N_VERT = 4 * _QUAD_SEGS
_INFLATE = float(np.sqrt(2 * np.pi / _N_VERT / np.sin(2 * np.pi / _N_VERT)))


def disk_polygon(center: complex, r: float):
    from shapely.geometry import Point

    return Point(center.real, center.imag).buffer(r * _INFLATE, quad_segs=_QUAD_SEGS)


def region_area(r: float, cover=(), avoid=(), inside=None, not_inside=None) -> float:
    """Area of {y : B(y,r) realizes the query constraints}.

    cover:      points z with z in B(y,r), i.e. y in B(z,r)
    avoid:      points w with w not in B(y,r)
    inside:     (c, rho): B(y,r) inside B(c,rho), i.e. y in B(c, rho-r)
    not_inside: (c, rho): B(y,r) not inside B(c,rho)
    """
    if r <= 0:
        return 0.0
    if not avoid and not_inside is None and (cover or inside is not None):
        # pure intersection of disks: exact arc formula, no polygons
        centers = [complex(z) for z in cover]
        radii = [r] * len(centers)
        if inside is not None:
            c, rho = inside
            if rho - r <= 0:
                return 0.0
            centers.append(complex(c))
            radii.append(rho - r)
        return disks_intersection_area(centers, radii)
    region = None
    if inside is not None:
        c, rho = inside
        if rho - r <= 0:
            return 0.0
        region = disk_polygon(c, rho - r)
    for z in cover:
        d = disk_polygon(complex(z), r)
        region = d if region is None else region.intersection(d)
        if region.is_empty:
            return 0.0
    if region is None:
        raise DivergentQuery("y-region is unbounded; query has infinite measure")
    if not_inside is not None:
        c, rho = not_inside
        if rho - r > 0:
            region = region.difference(disk_polygon(c, rho - r))
    for w in avoid:
        region = region.difference(disk_polygon(complex(w), r))
        if region.is_empty:
            return 0.0
    return region.area


def disks_intersection_area(centers, radii) -> float:
    """Exact area of the intersection of disks B(c_i, r_i).

    Green's theorem over the boundary arcs: each circle contributes the
    angular set of its boundary lying inside every other disk.  Handles
    containment and empty intersections; used on the hot quadrature
    path where shapely polygons are too slow.
    """
    # duplicate circles would each contribute their shared boundary arc
    seen = sorted({(complex(c), float(r)) for c, r in zip(centers, radii)},
                  key=lambda cr: (cr[0].real, cr[0].imag, cr[1]))
    cs = [c for c, _ in seen]
    rs = [r for _, r in seen]
    n = len(cs)
    if any(r <= 0 for r in rs):
        return 0.0
    # a disk contained in all others is the whole intersection
    for i in range(n):
        if all(i == j or abs(cs[i] - cs[j]) + rs[i] <= rs[j] + 1e-15
               for j in range(n)):
            return np.pi * rs[i] ** 2
    area = 0.0
    arcs_found = False
    for i in range(n):
        # allowed angular set on circle i: start with the full circle
        arcs = [(0.0, 2.0 * np.pi)]
        empty = False
        for j in range(n):
            if j == i:
                continue
            d = abs(cs[j] - cs[i])
            if d >= rs[i] + rs[j]:
                empty = True
                break
            if d + rs[i] <= rs[j]:
                continue  # circle i fully inside disk j: no constraint
            if d <= 1e-15:
                empty = True  # concentric with r_i > r_j: boundary outside
                break
            # |c_i + r_i e^{i t} - c_j| <= r_j  <=>  cos(t - phi) >= q
            phi = np.angle(cs[j] - cs[i])
            q = (d * d + rs[i] ** 2 - rs[j] ** 2) / (2.0 * d * rs[i])
            q = min(1.0, max(-1.0, q))
            half = np.arccos(q)
            lo, hi = phi - half, phi + half
            new = []
            for a, b in arcs:
                # intersect [a,b] with [lo,hi] modulo 2 pi
                for k in (-1.0, 0.0, 1.0):
                    aa = max(a, lo + 2.0 * np.pi * k)
                    bb = min(b, hi + 2.0 * np.pi * k)
                    if bb > aa + 1e-14:
                        new.append((aa, bb))
            arcs = new
            if not arcs:
                empty = True
                break
        if empty:
            continue
        for a, b in arcs:
            arcs_found = True
            cx, cy, rho = cs[i].real, cs[i].imag, rs[i]
            area += 0.5 * (rho * rho * (b - a)
                           + cx * rho * (np.sin(b) - np.sin(a))
                           + cy * rho * (np.cos(a) - np.cos(b)))
    return area if arcs_found else 0.0


def alpha_quad(delta: float = 0.0, R: float | None = None, cover=(), avoid=(),
               inside=None, not_inside=None, epsabs: float = 1e-10,
               epsrel: float = 1e-9):
    """Disk-model measure of the loop set described by the constraints.

    delta/R bound the diameter 2r; the remaining constraints are as in
    ``region_area``.  Returns (value, quadrature_error_estimate).
    """
    r_lo = delta / 2.0
    pts = [complex(z) for z in cover]
    if len(pts) >= 2:
        # both points inside B(y,r) forces 2r >= max pairwise distance
        gap = max(abs(a - b) for a in pts for b in pts)
        r_lo = max(r_lo, gap / 2.0)
    if not_inside is not None and pts:
        # escaping B(c,rho) while covering z forces 2r >= rho - |z-c|
        c0, rho0 = not_inside
        reach = min(rho0 - abs(z - complex(c0)) for z in pts)
        if reach > 0:
            r_lo = max(r_lo, reach / 2.0)
    r_hi = np.inf
    if R is not None:
        r_hi = R / 2.0
    if inside is not None:
        r_hi = min(r_hi, inside[1])
    if r_hi <= r_lo:
        return 0.0, 0.0
    if not cover and inside is None:
        raise DivergentQuery("unbounded y-region")
    if r_lo <= 0.0:
        # covering a point with no diameter floor has infinite measure
        # unless the small-r area vanishes; here area ~ pi r^2 exactly,
        # so the integral of r^-1 diverges
        raise DivergentQuery("no lower diameter cutoff: infinite measure")

    def integrand(r):
        return region_area(r, cover, avoid, inside, not_inside) / r**3

    if np.isfinite(r_hi):
        val, err = quad(integrand, r_lo, r_hi, epsabs=epsabs, epsrel=epsrel,
                        limit=400)
        return val, err
    # unbounded r: substitute u = 1/r; integrand bounded as u -> 0
    def integrand_u(u):
        r = 1.0 / u
        return region_area(r, cover, avoid, inside, not_inside) / r

    val, err = quad(integrand_u, 0.0, 1.0 / r_lo, epsabs=epsabs, epsrel=epsrel,
                    limit=400)
    return val, err


def _F(r):
    """Antiderivative of (1-r)^2 / r^3."""
    return -1.0 / (2.0 * r * r) + 2.0 / r + np.log(r)


def disk_mass_in_domain(delta: float) -> float:
    """Total mass of {2r >= delta, B(y,r) inside the unit disk}:
    integral of pi (1-r)^2 / r^3 over [delta/2, 1]."""
    if delta <= 0:
        raise DivergentQuery("disk-model mass diverges without a cutoff")
    if delta >= 2:
        return 0.0
    return float(np.pi * (_F(1.0) - _F(delta / 2.0)))


def radial_mass_profile(delta: float, reach: float | None = None):
    """Radial density of the in-domain disk model, optionally restricted
    to disks that can cover some point of B(0, reach).

    Returns (density callable rho(r), r_lo, r_hi, total_mass).  The
    density is pi * min(reach + r, 1 - r)^2 / r^3 (min dropped when
    reach is None).
    """
    if delta <= 0:
        raise DivergentQuery("disk-model mass diverges without a cutoff")
    r_lo, r_hi = delta / 2.0, 1.0
    if r_lo >= r_hi:
        def zero(r):
            return np.zeros_like(np.asarray(r, dtype=float))
        return zero, r_lo, r_hi, 0.0

    def dens(r):
        r = np.asarray(r, dtype=float)
        lim = 1.0 - r
        if reach is not None:
            lim = np.minimum(reach + r, lim)
        lim = np.clip(lim, 0.0, None)
        return np.pi * lim**2 / r**3

    mass = quad(dens, r_lo, r_hi, limit=200)[0]
    return dens, r_lo, r_hi, float(mass)


def sample_radii(n: int, delta: float, rng: np.random.Generator,
                 reach: float | None = None, grid: int = 8192) -> np.ndarray:
    """Sample disk radii from the (possibly reach-restricted) radial
    density by inverse CDF on a log-spaced grid."""
    dens, r_lo, r_hi, mass = radial_mass_profile(delta, reach)
    if mass <= 0 or n == 0:
        return np.empty(0)
    r = np.geomspace(r_lo, r_hi, grid)
    d = dens(r)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (d[1:] + d[:-1]) * np.diff(r))])
    cdf /= cdf[-1]
    return np.interp(rng.random(n), cdf, r)


def disk_annulus_mc(z: complex, delta: float, R: float, lam_total: float,
                    rng: np.random.Generator):
    """Monte Carlo estimate of the annulus mass pi log(R / delta):
    circles covering z with diameter in (delta, R], no domain constraint.

    Candidates are drawn from the restriction of dy dr / r^3 to centers
    in B(z, R/2) and radii in [delta/2, R/2]; a candidate qualifies when
    its disk covers z (|y - z| <= r).  The estimate is the qualifying
    count divided by lam_total, with Poisson standard error.
    """
    from .montecarlo import MCResult
    from ..errors import BudgetError

    if not 0 < delta <= R:
        raise InvalidQuery("need 0 < delta <= R")
    if lam_total <= 0:
        raise BudgetError("lam_total must be positive")
    a, b = delta / 2.0, R / 2.0
    # candidate mass: area of the center ball times int_a^b dr / r^3
    mass = np.pi * b**2 * 0.5 * (a**-2 - b**-2)
    n = int(rng.poisson(lam_total * mass))
    # inverse CDF of the r^{-3} radial density on [a, b]
    u = rng.random(n)
    r = 1.0 / np.sqrt(a**-2 - u * (a**-2 - b**-2))
    rho = b * np.sqrt(rng.random(n))
    qualifying = int(np.count_nonzero(rho <= r))
    value = qualifying / lam_total
    return MCResult(value, np.sqrt(qualifying) / lam_total, lam_total,
                    n, n, qualifying, mass)
