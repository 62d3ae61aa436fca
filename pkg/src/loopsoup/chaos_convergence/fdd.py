"""Finite-dimensional-distribution comparison via the energy distance.

For each schedule step the Poisson side samples the vector
(Re V(phi_1), Im V(phi_1), ..., Re V(phi_m), Im V(phi_m)) over soups;
the Gaussian side samples the same functional of W_xi.  The two-sample
energy statistic

    E = 2 E|X - Y| - E|X - X'| - E|Y - Y'|

is zero iff the distributions agree; p-values come from label
permutations on the pooled pairwise-distance matrix.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidQuery
from ..geometry import QuadratureGrid, gauss_ring_grid
from ..loop_measures import Budget, sample_disk_soups_pooled
from ..layering_fields import conformal_dimension, disk_layering_numbers
from ..gaussian_gmc import (kernel_matrix, gaussian_dimension,
                            sample_gaussian_vectors)

__all__ = ["energy_distance", "permutation_test", "fdd_convergence_test"]


def _pdist_mean(x: np.ndarray, y: np.ndarray) -> float:
    """Mean Euclidean distance between rows of x and rows of y."""
    xx = (x * x).sum(axis=1)
    yy = (y * y).sum(axis=1)
    sq = xx[:, None] + yy[None, :] - 2.0 * (x @ y.T)
    return float(np.mean(np.sqrt(np.maximum(sq, 0.0))))


def energy_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sample energy statistic (>= 0, zero iff equal laws)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return (2.0 * _pdist_mean(x, y) - _pdist_mean(x, x) - _pdist_mean(y, y))


def permutation_test(x: np.ndarray, y: np.ndarray, n_perm: int = 1000,
                     rng: np.random.Generator | int | None = None):
    """(statistic, p-value) under label permutations.

    All permutation statistics reuse one pooled distance matrix; each
    permutation costs one matrix-vector product.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    n, m = len(x), len(y)
    pool = np.vstack([x, y])
    sq = (pool * pool).sum(axis=1)
    d = np.sqrt(np.maximum(sq[:, None] + sq[None, :] - 2.0 * pool @ pool.T,
                           0.0))
    total = d.sum()

    def stat(mask: np.ndarray) -> float:
        # mask selects the "x" rows of the pool
        row = d @ mask          # per-row summed distance to the x group
        sxx = float(mask @ row)
        syy = float(total - 2.0 * row.sum() + sxx)
        sxy = float(row.sum() - sxx)
        return 2.0 * sxy / (n * m) - sxx / (n * n) - syy / (m * m)

    base_mask = np.zeros(n + m)
    base_mask[:n] = 1.0
    observed = stat(base_mask)
    hits = 0
    for _ in range(n_perm):
        perm = rng.permutation(n + m)
        mask = np.zeros(n + m)
        mask[perm[:n]] = 1.0
        if stat(mask) >= observed:
            hits += 1
    return observed, (hits + 1.0) / (n_perm + 1.0)


def fdd_convergence_test(xi: float, schedule, phis, delta: float,
                         n_soups: int = 10000, n_perm: int = 1000,
                         grid: QuadratureGrid | None = None,
                         subsample: int = 1000,
                         budget: Budget | None = None,
                         rng: np.random.Generator | int | None = None,
                         lab=None) -> list:
    """Energy distances between Poisson and Gaussian pairings per step.

    Disk kind.  Returns a list of dicts (lam, beta, distance, p_value).
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if grid is None:
        grid = gauss_ring_grid(12, 24)
    if not phis:
        raise InvalidQuery("need at least one test function")
    tests = np.column_stack([
        (np.asarray([phi(z) for z in grid.nodes]) if callable(phi)
         else np.asarray(phi)) * grid.weights
        for phi in phis])

    # Gaussian side: shared across steps (law depends only on xi, delta)
    K = kernel_matrix(grid, delta, "disk", budget, rng=rng)
    g = sample_gaussian_vectors(K, n_soups, rng)
    dim_g = gaussian_dimension("disk", xi)
    wvals = delta ** (-2.0 * dim_g) * np.exp(1j * xi * g)
    wpair = wvals @ tests
    yvec = np.column_stack([wpair.real, wpair.imag])

    results = []
    for step in schedule:
        lam, beta = step if isinstance(step, (tuple, list)) \
            else (step, xi / np.sqrt(step))
        dim = conformal_dimension("disk", lam, beta).value
        norm = delta ** (-2.0 * dim)
        draws = np.empty((n_soups, tests.shape[1]), dtype=complex)
        # cap both the node matrix and the expected pooled disk count
        from ..loop_measures.disk_model import disk_mass_in_domain
        per_soup = lam * disk_mass_in_domain(delta)
        block = max(1, min(int(2e8 // (8 * len(grid.nodes))),
                           int(4e6 // max(per_soup, 1.0))))
        done = 0
        while done < n_soups:
            nb = min(block, n_soups - done)
            sid, centers, radii, marks = sample_disk_soups_pooled(
                lam, delta, nb, rng)
            nmat = disk_layering_numbers(sid, centers, radii, marks, grid, nb)
            draws[done:done + nb] = np.exp(1j * beta * nmat) @ tests
            done += nb
        draws *= norm
        xvec = np.column_stack([draws.real, draws.imag])
        ix = rng.choice(n_soups, size=min(subsample, n_soups), replace=False)
        iy = rng.choice(n_soups, size=min(subsample, n_soups), replace=False)
        dist, p = permutation_test(xvec[ix], yvec[iy], n_perm, rng)
        results.append({"lam": lam, "beta": beta, "distance": dist,
                        "p_value": p,
                        "full_distance": energy_distance(xvec, yvec)
                        if n_soups <= 4000 else None})
    return results
