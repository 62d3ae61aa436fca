"""Poisson layering fields V^delta = exp(i beta N^delta) and statistics.

The layering number N^delta(z) is the signed count of soup loops whose
hull covers z.  The renormalized field delta^{-2 Delta} V^delta carries
the conformal dimension Delta of the measure kind:

    Delta = lam (1 - cos beta) / 10      (loop and massive kinds)
    Delta = lam pi (1 - cos beta) / 2    (disk kind)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidQuery
from ..geometry import QuadratureGrid, integrate
from .._covering import covers_fast, covers_flood, winding_number
from ..loop_measures import Loop, MarkedSoup, sample_soup

__all__ = [
    "ConformalDimension", "CoveringMethod", "FieldSample",
    "conformal_dimension", "covers", "layering_number", "layering_numbers",
    "field_sample",
    "pair", "n_point_estimate", "field_to_csv", "npoint_to_csv",
]


@dataclass(frozen=True)
class ConformalDimension:
    value: float
    kind: str
    lam: float
    beta: float


def conformal_dimension(kind: str, lam: float, beta: float) -> ConformalDimension:
    if kind == "disk":
        value = lam * np.pi * (1.0 - np.cos(beta)) / 2.0
    elif kind in ("loop", "massive"):
        value = lam * (1.0 - np.cos(beta)) / 10.0
    else:
        raise InvalidQuery(f"unknown measure kind {kind!r}")
    return ConformalDimension(float(value), kind, float(lam), float(beta))


@dataclass(frozen=True)
class CoveringMethod:
    """Hull-membership test: 'flood' (default, converges to the true
    hull with resolution) or 'winding' (fast under-approximation)."""

    kind: str = "flood"
    resolution: int = 256

    def __post_init__(self):
        if self.kind not in ("flood", "winding"):
            raise InvalidQuery(f"unknown covering method {self.kind!r}")
        if self.kind == "flood" and self.resolution < 64:
            raise InvalidQuery("resolution_factor must be >= 64")


FLOOD = CoveringMethod()


@dataclass
class FieldSample:
    grid: QuadratureGrid
    values: np.ndarray
    delta: float
    normalization_exponent: float  # equals -2*Delta
    params: dict


def _covers_array(loop: Loop, z: np.ndarray, method: CoveringMethod) -> np.ndarray:
    if loop.representation == "disk":
        return np.abs(z - loop.center) <= loop.radius
    pts = loop.points
    if method.kind == "winding":
        return winding_number(pts, z) != 0
    return covers_fast(pts, z, method.resolution)


def covers(loop: Loop, z: complex, method: CoveringMethod = FLOOD) -> bool:
    """Whether z lies in the hull of the loop (complement of the
    unbounded complementary component)."""
    return bool(_covers_array(loop, np.atleast_1d(complex(z)), method)[0])


def layering_numbers(soup: MarkedSoup, z, method: CoveringMethod = FLOOD,
                     diam_min: float = 0.0) -> np.ndarray:
    """Signed covering counts at an array of points, vectorized over z.

    ``diam_min`` restricts to loops of diameter >= diam_min, giving the
    coarser-cutoff field coupled on the same soup.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = np.zeros(len(z), dtype=np.int64)
    for ml in soup.loops:
        if diam_min > 0.0 and ml.loop.diameter < diam_min:
            continue
        n += ml.mark * _covers_array(ml.loop, z, method)
    return n


def layering_number(soup: MarkedSoup, z: complex,
                    method: CoveringMethod = FLOOD) -> int:
    """N^delta(z): sum of marks over soup loops covering z."""
    z = complex(z)
    if abs(z) >= 1.0 and soup.domain.moebius is None:
        raise InvalidQuery("point outside the soup's domain")
    return int(layering_numbers(soup, z, method)[0])


def field_sample(soup: MarkedSoup, grid: QuadratureGrid, beta: float,
                 method: CoveringMethod = FLOOD) -> FieldSample:
    """Renormalized layering field delta^{-2 Delta} exp(i beta N) on a grid."""
    dim = conformal_dimension(soup.measure.kind, soup.lam, beta)
    n = layering_numbers(soup, grid.nodes, method)
    norm = soup.delta ** (-2.0 * dim.value)
    values = norm * np.exp(1j * beta * n)
    return FieldSample(grid, values, soup.delta, -2.0 * dim.value,
                       {"lambda": soup.lam, "beta": beta,
                        "measure": soup.measure.kind, "seed": soup.seed})


def pair(field: FieldSample, phi) -> complex:
    """Quadrature pairing integral of field * phi over the grid."""
    test = np.asarray([phi(z) for z in field.grid.nodes]) \
        if callable(phi) else np.asarray(phi)
    if len(test) != len(field.grid.nodes):
        raise InvalidQuery("test function values do not match the grid")
    return complex(np.sum(field.values * test * field.grid.weights))


def n_point_estimate(points, lam: float, beta: float, delta: float,
                     measure, domain, n_soups: int,
                     rng: np.random.Generator,
                     method: CoveringMethod = FLOOD):
    """Monte Carlo n-point function of the renormalized field.

    Returns (estimate, std_error) where the estimate is the empirical
    mean of prod_k delta^{-2 Delta} exp(i beta N(z_k)) over independent
    soups and the error is the jackknife standard error of the mean.
    """
    pts = np.asarray([complex(p) for p in points])
    if len(set(pts.tolist())) != len(pts):
        raise InvalidQuery("n-point query requires distinct points")
    dim = conformal_dimension(measure.kind, lam, beta)
    norm = delta ** (-2.0 * dim.value * len(pts))
    draws = np.empty(n_soups, dtype=complex)
    for i in range(n_soups):
        soup = sample_soup(lam, delta, measure, domain, rng=rng)
        n = layering_numbers(soup, pts, method)
        draws[i] = np.exp(1j * beta * n.sum())
    draws *= norm
    mean = draws.mean()
    # jackknife standard error of the mean (equals the usual formula
    # for a mean but kept for drop-in use with other statistics)
    jack = (draws.sum() - draws) / (n_soups - 1)
    se = float(np.sqrt((n_soups - 1) / n_soups
                       * np.sum(np.abs(jack - jack.mean()) ** 2)))
    return complex(mean), se


def field_to_csv(field: FieldSample, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "re", "im"])
        for z, v in zip(field.grid.nodes, field.values):
            w.writerow([repr(z.real), repr(z.imag), repr(v.real), repr(v.imag)])


def npoint_to_csv(rows, path: str) -> None:
    """Rows: iterables (points, estimate, std_error, budget, seed)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["points", "estimate_re", "estimate_im", "std_error",
                    "budget", "seed"])
        for points, est, se, budget, seed in rows:
            pts = ";".join(f"{p.real}+{p.imag}j" for p in points)
            w.writerow([pts, repr(est.real), repr(est.imag), repr(se),
                        budget, seed])
