"""Wiener-Ito chaos norms for Poisson and Gaussian layering fields.

The order-q norms reduce to double integrals against powers of the
two-point mass alpha_{delta,D}(z, t):

    q! lam^q ||f_q||^2 = (1/q!) II phi phi <V><V> [2 lam (1-cos b) a]^q
    q!       ||w_q||^2 = (1/q!) II phi phi <W><W> [xi^2 a]^q
    q! <lam^{q/2} f_q, w_q> = (1/q!) II phi phi <V><W> [sqrt(lam) xi sin(b) a]^q

with one-point means <V> = e^{-lam(1-cos b) a(z)}, <W> = e^{-(xi^2/2) a(z)}.
Summing the geometric series resums the full variance exactly, so
truncation tails are exact remainders, not just envelopes.

alpha values are cached per unique node-pair orbit (rotations of the
disk), which collapses the O(n^2) pair lattice on ring grids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from ..errors import InvalidQuery
from ..geometry import QuadratureGrid, gauss_ring_grid, dist_to_boundary
from ..loop_measures import AlphaQuery, Budget, MeasureKind, alpha
from ..layering_fields import conformal_dimension
from ..gaussian_gmc import gaussian_dimension

__all__ = ["ChaosLab", "ChaosOrderTerm", "ChaosReport",
           "poisson_chaos_norm", "gaussian_chaos_norm",
           "variance_identity_check", "cil_diagnostic", "report_to_json"]

Q_MAX_DEFAULT = 16


@dataclass
class ChaosOrderTerm:
    q: int
    poisson_norm: float = 0.0
    gaussian_norm: float = 0.0
    cross: float = 0.0
    cross_l2_gap: float = 0.0
    method: str = "quadrature"
    std_error: float = 0.0


@dataclass
class ChaosReport:
    lam: float
    beta: float
    xi: float
    delta: float
    kind: str
    terms: list = field(default_factory=list)
    mean_gap: float = 0.0
    variance_identity_residual: float = 0.0
    tail_mass: float = 0.0
    extras: dict = field(default_factory=dict)


class ChaosLab:
    """Shared alpha lattice on a grid; all chaos norms are polynomial
    functionals of it."""

    def __init__(self, grid: QuadratureGrid | None = None, delta: float = 0.2,
                 kind: str = "disk", budget: Budget | None = None,
                 mass_bound: float | None = None,
                 rng: np.random.Generator | int | None = None):
        if grid is None:
            grid = gauss_ring_grid(12, 24)
        if delta <= 0:
            raise InvalidQuery("chaos norms need delta > 0")
        self.grid = grid
        self.delta = float(delta)
        self.kind = kind
        budget = budget or Budget()
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        measure = MeasureKind(kind, mass_bound)
        z = grid.nodes
        n = len(z)
        # one-point masses, deduplicated on the boundary distance
        one_cache: dict[float, float] = {}
        self.alpha_one = np.empty(n)
        for i in range(n):
            key = round(float(dist_to_boundary(z[i])), 12)
            if key not in one_cache:
                q = AlphaQuery("in_domain", z[i], delta=self.delta)
                one_cache[key] = alpha(q, measure, budget, rng).value
            self.alpha_one[i] = one_cache[key]
        # two-point masses, deduplicated on the rotation orbit (r1, r2, dtheta)
        pair_cache: dict[tuple, float] = {}
        self.alpha_pair = np.empty((n, n))
        r = np.round(np.abs(z), 12)
        th = np.angle(z)
        for i in range(n):
            self.alpha_pair[i, i] = self.alpha_one[i]
            for j in range(i + 1, n):
                dth = abs(th[i] - th[j])
                dth = round(min(dth, 2.0 * np.pi - dth), 12)
                key = (min(r[i], r[j]), max(r[i], r[j]), dth)
                if key not in pair_cache:
                    q = AlphaQuery("two_point_domain", z[i], w=z[j],
                                   delta=self.delta)
                    pair_cache[key] = alpha(q, measure, budget, rng).value
                self.alpha_pair[i, j] = self.alpha_pair[j, i] = pair_cache[key]

    # -- one-point means ------------------------------------------------
    def poisson_mean(self, lam: float, beta: float) -> np.ndarray:
        """Renormalized <delta^{-2D} V^delta(z)> at the nodes."""
        dim = conformal_dimension(self.kind, lam, beta).value
        return self.delta ** (-2.0 * dim) * np.exp(
            -lam * (1.0 - np.cos(beta)) * self.alpha_one)

    def gaussian_mean(self, xi: float) -> np.ndarray:
        dim = gaussian_dimension(self.kind, xi)
        return self.delta ** (-2.0 * dim) * np.exp(-0.5 * xi**2 * self.alpha_one)

    def _phi(self, phi) -> np.ndarray:
        return np.asarray([phi(z) for z in self.grid.nodes]) if callable(phi) \
            else np.asarray(phi)

    def _bilinear(self, u: np.ndarray, v: np.ndarray, scale: float,
                  q: int) -> float:
        from math import factorial
        a = scale * self.alpha_pair
        return float(u @ (a**q) @ v) / factorial(q)

    # -- order-q norms ---------------------------------------------------
    def poisson_norm(self, q: int, phi, lam: float, beta: float) -> float:
        """q! lam^q ||f^phi_q||^2 (renormalized field)."""
        u = self._phi(phi) * self.grid.weights * self.poisson_mean(lam, beta)
        return self._bilinear(u, u, 2.0 * lam * (1.0 - np.cos(beta)), q)

    def gaussian_norm(self, q: int, phi, xi: float) -> float:
        """q! ||w^phi_q||^2 (renormalized field)."""
        u = self._phi(phi) * self.grid.weights * self.gaussian_mean(xi)
        return self._bilinear(u, u, xi**2, q)

    def cross_norm(self, q: int, phi, lam: float, beta: float,
                   xi: float) -> float:
        """q! <lam^{q/2} f_q, w_q>."""
        p = self._phi(phi) * self.grid.weights
        u = p * self.poisson_mean(lam, beta)
        v = p * self.gaussian_mean(xi)
        return self._bilinear(u, v, np.sqrt(lam) * xi * np.sin(beta), q)

    def cross_l2_gap(self, q: int, phi, lam: float, beta: float,
                     xi: float) -> float:
        """q! ||lam^{q/2} f_q - w_q||^2."""
        return (self.poisson_norm(q, phi, lam, beta)
                - 2.0 * self.cross_norm(q, phi, lam, beta, xi)
                + self.gaussian_norm(q, phi, xi))

    # -- exact resummations ----------------------------------------------
    def poisson_variance(self, phi, lam: float, beta: float) -> float:
        """Var of the renormalized V(phi): exact geometric resummation."""
        u = self._phi(phi) * self.grid.weights * self.poisson_mean(lam, beta)
        a = 2.0 * lam * (1.0 - np.cos(beta)) * self.alpha_pair
        return float(u @ np.expm1(a) @ u)

    def gaussian_variance(self, phi, xi: float) -> float:
        u = self._phi(phi) * self.grid.weights * self.gaussian_mean(xi)
        return float(u @ np.expm1(xi**2 * self.alpha_pair) @ u)

    def poisson_tail(self, phi, lam: float, beta: float, q_max: int) -> float:
        """Exact remainder beyond q_max (resummation minus partial sum)."""
        total = self.poisson_variance(phi, lam, beta)
        partial = sum(self.poisson_norm(q, phi, lam, beta)
                      for q in range(1, q_max + 1))
        return total - partial

    def mean_gap(self, phi, lam: float, beta: float, xi: float) -> float:
        """|<V(phi)> - <W(phi)>| for the renormalized fields."""
        p = self._phi(phi) * self.grid.weights
        return abs(float(p @ (self.poisson_mean(lam, beta)
                              - self.gaussian_mean(xi))))

    def envelope_tail(self, phi, scale: float, dim: float, q_max: int) -> float:
        """Loop-kind analytic envelope of the tail mass: replace alpha by
        (1/5) log(2/|z-t|) and the means by d^{-2 dim}."""
        z = self.grid.nodes
        d = np.array([dist_to_boundary(p) for p in z])
        u = np.abs(self._phi(phi)) * self.grid.weights * d ** (-2.0 * dim)
        gap = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(gap, np.inf)
        a = scale * 0.2 * np.log(2.0 / gap)
        np.fill_diagonal(a, scale * 0.2 * np.log(2.0 / self.delta))
        tail = np.zeros_like(a)
        term = np.ones_like(a)
        for q in range(1, q_max + 60):
            term = term * a / q
            if q > q_max:
                tail += term
        return float(u @ tail @ u)


def poisson_chaos_norm(q: int, phi, delta: float, lam: float, beta: float,
                       kind: str = "disk", grid=None,
                       budget: Budget | None = None,
                       rng=None, lab: ChaosLab | None = None) -> ChaosOrderTerm:
    lab = lab or ChaosLab(grid, delta, kind, budget, rng=rng)
    val = lab.poisson_norm(q, phi, lam, beta)
    return ChaosOrderTerm(q, poisson_norm=val,
                          method="quadrature" if kind == "disk"
                          else "monte_carlo")


def gaussian_chaos_norm(q: int, phi, delta: float, xi: float,
                        kind: str = "disk", grid=None,
                        budget: Budget | None = None,
                        rng=None, lab: ChaosLab | None = None) -> ChaosOrderTerm:
    lab = lab or ChaosLab(grid, delta, kind, budget, rng=rng)
    val = lab.gaussian_norm(q, phi, xi)
    return ChaosOrderTerm(q, gaussian_norm=val,
                          method="quadrature" if kind == "disk"
                          else "monte_carlo")


def variance_identity_check(phi, delta: float, lam: float, beta: float,
                            n_soups: int = 10000,
                            q_max: int = Q_MAX_DEFAULT,
                            lab: ChaosLab | None = None,
                            rng: np.random.Generator | int | None = None):
    """Disk kind: MC variance of the renormalized V(phi) against the
    truncated chaos sum plus exact tail.

    Returns dict with mc_variance, mc_std_error, chaos_sum, tail,
    residual.
    """
    from ..loop_measures import sample_disk_soups_pooled
    from ..layering_fields import disk_layering_numbers

    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    lab = lab or ChaosLab(delta=delta)
    if lab.kind != "disk":
        raise InvalidQuery("the variance identity check needs the disk kind")
    grid = lab.grid
    test = lab._phi(phi) * grid.weights
    dim = conformal_dimension("disk", lam, beta).value
    norm = delta ** (-2.0 * dim)
    # pooled soups -> layering numbers -> pairings
    draws = np.empty(n_soups, dtype=complex)
    block = max(1, int(2e8 // (8 * len(grid.nodes))))
    done = 0
    while done < n_soups:
        nb = min(block, n_soups - done)
        sid, centers, radii, marks = sample_disk_soups_pooled(
            lam, delta, nb, rng)
        nmat = disk_layering_numbers(sid, centers, radii, marks, grid, nb)
        draws[done:done + nb] = np.exp(1j * beta * nmat) @ test
        done += nb
    draws *= norm
    mu = draws.mean()
    var = float(np.mean(np.abs(draws - mu) ** 2)) * n_soups / (n_soups - 1)
    # jackknife standard error of the variance
    centered = np.abs(draws - mu) ** 2
    se = float(np.std(centered, ddof=1) / np.sqrt(n_soups))
    chaos_sum = sum(lab.poisson_norm(q, phi, lam, beta)
                    for q in range(1, q_max + 1))
    tail = lab.poisson_tail(phi, lam, beta, q_max)
    return {
        "mc_variance": var,
        "mc_std_error": se,
        "chaos_sum": chaos_sum,
        "tail": tail,
        "residual": abs(var - chaos_sum - tail),
        "mean": mu,
    }


def cil_diagnostic(xi: float, schedule, phi, delta: float,
                   kind: str = "disk", q_max: int = Q_MAX_DEFAULT,
                   lab: ChaosLab | None = None,
                   grid=None, budget: Budget | None = None,
                   rng=None, beyond_proof: bool = False) -> list:
    """Per schedule step (lam, beta): mean gap, per-q cross gaps, tails.

    The proof window is xi^2 < 5 (loop/massive) or xi^2 < 1/pi (disk);
    runs outside it require beyond_proof=True and assert nothing.
    """
    window = 1.0 / np.pi if kind == "disk" else 5.0
    if xi**2 >= window and not beyond_proof:
        raise InvalidQuery(
            f"xi^2 = {xi**2:.3g} outside the proof window (< {window:.3g})")
    lams = [s[0] if isinstance(s, (tuple, list)) else s for s in schedule]
    if any(b >= a for a, b in zip(lams[1:], lams[:-1])):
        raise InvalidQuery("schedule must be strictly increasing in lambda")
    lab = lab or ChaosLab(grid, delta, kind, budget, rng=rng)
    reports = []
    for step in schedule:
        lam, beta = step if isinstance(step, (tuple, list)) \
            else (step, xi / np.sqrt(step))
        rep = ChaosReport(lam=lam, beta=beta, xi=xi, delta=delta, kind=kind)
        rep.mean_gap = lab.mean_gap(phi, lam, beta, xi)
        for q in range(1, q_max + 1):
            term = ChaosOrderTerm(
                q,
                poisson_norm=lab.poisson_norm(q, phi, lam, beta),
                gaussian_norm=lab.gaussian_norm(q, phi, xi),
                cross=lab.cross_norm(q, phi, lam, beta, xi),
            )
            term.cross_l2_gap = (term.poisson_norm - 2.0 * term.cross
                                 + term.gaussian_norm)
            rep.terms.append(term)
        rep.tail_mass = lab.poisson_tail(phi, lam, beta, q_max)
        reports.append(rep)
    return reports


def report_to_json(reports, path: str, meta: dict | None = None) -> None:
    payload = {"meta": meta or {}, "reports": [asdict(r) for r in reports]}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, default=str)
