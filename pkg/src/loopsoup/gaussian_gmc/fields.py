"""Gaussian layering fields W^delta_xi, tilt profiles, and tilted GMC.

W^delta_xi(z) = exp(i xi G_delta(z)) with G_delta centered Gaussian of
covariance alpha*_{delta,D}; renormalization delta^{-2 Delta_xi}.  The
tilt

    Theta^{loop}(z) = (1/5) log d_z + alpha^{loop}_{d_z,D}(z)
    Theta^{disk}(z) = pi    log d_z + alpha^{disk}_{d_z,D}(z)
    Theta^{m}(z)    = Theta^{loop}(z) - hat-alpha_{0,D}(z)

absorbs the divergent part of the variance; the tilted pairing
integrates M^delta_xi(z) e^{-(xi^2/2) Theta(z)} phi(z) with
M^delta_xi = exp(i xi G_delta + (xi^2/2) K_delta(z,z)), a mean-one
complex martingale in delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidQuery, NotPositiveSemidefinite
from ..geometry import QuadratureGrid, dist_to_boundary
from ..layering_fields import FieldSample
from ..loop_measures import AlphaQuery, Budget, MeasureKind, alpha, alpha_hat
from ..geometry import UNIT_DISK
from .kernels import KernelMatrix, gaussian_dimension

__all__ = ["TiltProfile", "sample_gaussian_vectors", "sample_gaussian_field",
           "tilt_profile", "tilted_gmc_pair"]


@dataclass
class TiltProfile:
    grid: QuadratureGrid
    theta: np.ndarray
    kind: str


def _factor(K: KernelMatrix) -> np.ndarray:
    """Symmetric square root of the covariance (eigh; tiny negatives
    from roundoff are clipped)."""
    eig, vec = np.linalg.eigh(K.entries)
    if eig.min() < -1e-10 * max(1.0, eig.max()):
        raise NotPositiveSemidefinite(
            f"covariance has eigenvalue {eig.min():.3g}")
    return vec * np.sqrt(np.clip(eig, 0.0, None))


def sample_gaussian_vectors(K: KernelMatrix, n_draws: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Centered Gaussian draws with covariance K, shape (n_draws, n)."""
    root = _factor(K)
    return rng.standard_normal((n_draws, root.shape[1])) @ root.T


def sample_gaussian_field(K: KernelMatrix, xi: float,
                          rng: np.random.Generator) -> FieldSample:
    """One draw of the renormalized Gaussian layering field on the grid."""
    if K.delta <= 0:
        raise InvalidQuery("field sampling needs delta > 0")
    g = sample_gaussian_vectors(K, 1, rng)[0]
    dim = gaussian_dimension(K.kind, xi)
    values = K.delta ** (-2.0 * dim) * np.exp(1j * xi * g)
    return FieldSample(K.grid, values, K.delta, -2.0 * dim,
                       {"xi": xi, "measure": K.kind, "gaussian": g})


def tilt_profile(grid: QuadratureGrid, kind: str = "loop",
                 budget: Budget | None = None,
                 mass_bound: float | None = None,
                 rng: np.random.Generator | int | None = None) -> TiltProfile:
    """Theta* at the grid nodes over the unit disk."""
    budget = budget or Budget()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    measure = MeasureKind("loop" if kind == "massive" else kind,
                          None)
    eta = np.pi if kind == "disk" else 0.2
    theta = np.empty(len(grid.nodes))
    cache: dict[float, float] = {}
    for i, z in enumerate(grid.nodes):
        d_z = float(dist_to_boundary(z))
        if d_z <= 0:
            raise InvalidQuery("tilt profile needs interior nodes")
        key = round(d_z, 15)
        if key not in cache:
            a = alpha(AlphaQuery("in_domain", z, delta=d_z), measure,
                      budget, rng)
            cache[key] = eta * np.log(d_z) + a.value
        theta[i] = cache[key]
    if kind == "massive":
        if mass_bound is None:
            raise InvalidQuery("massive tilt needs mass_bound")
        hat_cache: dict[float, float] = {}
        for i, z in enumerate(grid.nodes):
            key = round(float(dist_to_boundary(z)), 15)
            if key not in hat_cache:
                hat_cache[key] = alpha_hat(z, UNIT_DISK, mass_bound,
                                           budget, rng).value
            theta[i] -= hat_cache[key]
    return TiltProfile(grid, theta, kind)


def tilted_gmc_pair(K: KernelMatrix, tilt: TiltProfile, xi: float, phi,
                    rng: np.random.Generator, n_draws: int = 1):
    """Draws of the tilted pairing int M^delta_xi e^{-(xi^2/2) Theta} phi.

    M^delta_xi(z) = exp(i xi G(z) + (xi^2/2) K(z,z)) has mean one, so
    the expectation equals int e^{-(xi^2/2) Theta} phi exactly.
    """
    if K.grid is not tilt.grid and len(K.grid.nodes) != len(tilt.grid.nodes):
        raise InvalidQuery("kernel and tilt grids do not match")
    nodes, weights = K.grid.nodes, K.grid.weights
    test = np.asarray([phi(z) for z in nodes]) if callable(phi) \
        else np.asarray(phi)
    g = sample_gaussian_vectors(K, n_draws, rng)
    m = np.exp(1j * xi * g + 0.5 * xi**2 * np.diag(K.entries)[None, :])
    integrand = m * (np.exp(-0.5 * xi**2 * tilt.theta) * test * weights)[None, :]
    draws = integrand.sum(axis=1)
    return draws if n_draws > 1 else complex(draws[0])
