"""Dirichlet Laplacian eigenbasis on the unit disk.

Eigenfunctions are J_n(j_{n,k} r) cos(n theta) / sin(n theta) with
eigenvalue j_{n,k}^2, where j_{n,k} is the k-th positive zero of the
Bessel function J_n.  Zeros are located by Newton iteration started
from McMahon asymptotic guesses (first-zero asymptotics for k = 1).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import jv, jvp

from ..errors import InvalidQuery, NumericalFailure
from ..geometry import QuadratureGrid

__all__ = [
    "Mode", "EigenBasis", "bessel_zero", "build_basis",
    "basis_to_csv", "basis_from_csv", "grieser_fit", "weyl_counts",
]

ZERO_TOL = 1e-10


def _initial_guess(n: int, k: int) -> float:
    """Asymptotic initial guess for the k-th positive zero of J_n."""
    if k == 1 and n >= 1:
        # First-zero expansion j_{n,1} ~ n + 1.8557 n^{1/3} + ...
        c = n ** (1.0 / 3.0)
        return n + 1.8557571 * c + 1.033150 / c - 0.00397 / n
    # McMahon expansion about b = (k + n/2 - 1/4) pi.
    b = (k + 0.5 * n - 0.25) * np.pi
    mu = 4.0 * n * n
    return (b - (mu - 1.0) / (8.0 * b)
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * b) ** 3))


def bessel_zero(n: int, k: int) -> float:
    """k-th positive zero of J_n by safeguarded Newton iteration."""
    if k < 1 or n < 0:
        raise InvalidQuery("need n >= 0 and k >= 1")
    x = _initial_guess(n, k)
    for _ in range(60):
        f = jv(n, x)
        step = f / jvp(n, x)
        # Zeros of J_n are separated by more than pi; never jump that far.
        step = float(np.clip(step, -1.5, 1.5))
        x -= step
        if abs(step) < 1e-14 * x:
            break
    if not np.isfinite(x) or abs(jv(n, x)) >= ZERO_TOL:
        raise NumericalFailure(
            f"Bessel zero j({n},{k}) failed: residual {abs(jv(n, x)):.3g}")
    return float(x)


@dataclass(frozen=True)
class Mode:
    n: int
    k: int
    parity: str          # "cos" or "sin" ("cos" for n = 0)
    zero: float          # j_{n,k}
    eigenvalue: float    # j_{n,k}^2
    normalization: float  # c with ||c J_n(j r) trig(n theta)||_{L^2} = 1


@dataclass(frozen=True)
class EigenBasis:
    modes: tuple
    count: int

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([m.eigenvalue for m in self.modes])

    def evaluate(self, grid: QuadratureGrid) -> np.ndarray:
        """Mode values at the grid nodes, shape (count, size)."""
        key = (len(grid.nodes), complex(grid.nodes[0]), complex(grid.nodes[-1]))
        cache = self.__dict__.setdefault("_eval_cache", {})
        if key not in cache:
            rel = (np.asarray(grid.nodes) - grid.center) / grid.radius
            r = np.abs(rel)
            theta = np.angle(rel)
            out = np.empty((self.count, len(r)))
            for i, m in enumerate(self.modes):
                radial = jv(m.n, m.zero * r)
                ang = np.cos(m.n * theta) if m.parity == "cos" \
                    else np.sin(m.n * theta)
                out[i] = m.normalization * radial * ang
            cache[key] = out
        return cache[key]


def _normalization(n: int, zero: float) -> float:
    # With J_n(j) = 0: int_0^1 J_n(j r)^2 r dr = J_{n+1}(j)^2 / 2,
    # and the angular integral is 2 pi (n = 0) or pi (n >= 1).
    angular = 2.0 * np.pi if n == 0 else np.pi
    return 1.0 / np.sqrt(angular * 0.5 * jv(n + 1, zero) ** 2)


def build_basis(count: int) -> EigenBasis:
    """First `count` Dirichlet eigenmodes of the unit disk by eigenvalue."""
    if count < 1:
        raise InvalidQuery("count must be >= 1")
    jcap = 2.2 * np.sqrt(count) + 12.0
    while True:
        modes = []
        n = 0
        while True:
            j1 = bessel_zero(n, 1)
            if j1 > jcap:
                break
            k, j = 1, j1
            while j <= jcap:
                norm = _normalization(n, j)
                modes.append(Mode(n, k, "cos", j, j * j, norm))
                if n > 0:
                    modes.append(Mode(n, k, "sin", j, j * j, norm))
                k += 1
                j = bessel_zero(n, k)
            n += 1
        if len(modes) >= count:
            break
        jcap *= 1.3
    modes.sort(key=lambda m: (m.eigenvalue, m.n, m.parity))
    return EigenBasis(tuple(modes[:count]), count)


def grieser_fit(basis: EigenBasis, grid: QuadratureGrid,
                n_modes: int = 200) -> dict:
    """Smallest c with ||u_i||_inf <= c eigenvalue^{1/4} on the grid."""
    n_modes = min(n_modes, basis.count)
    values = basis.evaluate(grid)[:n_modes]
    sup = np.abs(values).max(axis=1)
    lam = basis.eigenvalues[:n_modes]
    ratios = sup / lam ** 0.25
    return {"c": float(ratios.max()), "ratios": ratios, "sup_norms": sup}


def weyl_counts(basis: EigenBasis, levels) -> dict:
    """#{eigenvalue <= L} / L for each L; the ratio should stabilize."""
    lam = basis.eigenvalues
    out = {}
    for L in levels:
        if L > lam[-1]:
            raise InvalidQuery(
                f"basis only reaches eigenvalue {lam[-1]:.1f} < {L}")
        out[float(L)] = float(np.count_nonzero(lam <= L) / L)
    return out


def basis_to_csv(basis: EigenBasis, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "k", "parity", "zero", "normalization"])
        for m in basis.modes:
            writer.writerow([m.n, m.k, m.parity,
                             format(m.zero, ".17g"),
                             format(m.normalization, ".17g")])


def basis_from_csv(path: str) -> EigenBasis:
    modes = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            zero = float(row["zero"])
            modes.append(Mode(int(row["n"]), int(row["k"]), row["parity"],
                              zero, zero * zero,
                              float(row["normalization"])))
    return EigenBasis(tuple(modes), len(modes))
