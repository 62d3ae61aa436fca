"""Planar geometry: the unit disk, Moebius automorphisms, bump test
functions, and quadrature grids.

Points are represented as complex numbers throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidQuery

__all__ = [
    "MoebiusMap",
    "Domain",
    "UNIT_DISK",
    "Bump",
    "QuadratureGrid",
    "ring_grid",
    "gauss_ring_grid",
    "integrate",
    "dist_to_boundary",
    "dist_restricted",
]


@dataclass(frozen=True)
class MoebiusMap:
    """Automorphism of the unit disk, w -> e^{i theta} (w - a) / (1 - conj(a) w).

    :param a: point of the open disk sent to 0.
    :param theta: rotation angle.
    """

    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise InvalidQuery("Moebius parameter a must lie in the open unit disk")

    def apply(self, w):
        w = np.asarray(w, dtype=complex)
        return np.exp(1j * self.theta) * (w - self.a) / (1.0 - np.conj(self.a) * w)

    def inverse(self, z):
        z = np.asarray(z, dtype=complex)
        u = np.exp(-1j * self.theta) * z
        return (u + self.a) / (1.0 + np.conj(self.a) * u)

    def deriv_abs(self, w):
        """|f'(w)| = (1 - |a|^2) / |1 - conj(a) w|^2."""
        w = np.asarray(w, dtype=complex)
        return (1.0 - abs(self.a) ** 2) / np.abs(1.0 - np.conj(self.a) * w) ** 2

    def __call__(self, w):
        return self.apply(w)


@dataclass(frozen=True)
class Domain:
    """The unit disk, optionally equipped with a Moebius automorphism.

    Automorphisms map the disk onto itself, so the underlying point set
    is always the unit disk; the map is carried along for covariance
    checks and for transforming mass profiles.
    """

    moebius: MoebiusMap | None = None

    @property
    def kind(self) -> str:
        return "unit_disk" if self.moebius is None else "moebius_image"

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z, dtype=complex)) < 1.0


UNIT_DISK = Domain()


def dist_to_boundary(z, domain: Domain = UNIT_DISK):
    """Distance from z to the boundary circle, d_z = 1 - |z|."""
    return 1.0 - np.abs(np.asarray(z, dtype=complex))


def dist_restricted(z, center: complex, radius: float):
    """Distance from z to the boundary of the disk B(center, radius)."""
    return radius - np.abs(np.asarray(z, dtype=complex) - center)


@dataclass(frozen=True)
class Bump:
    """Smooth compactly supported test function.

    Value is ``amplitude * exp(-1 / (1 - s))`` with
    ``s = |z - center|^2 / radius^2`` inside the support and 0 outside.
    """

    center: complex = 0j
    radius: float = 0.5
    amplitude: float = 1.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        s = np.abs(z - self.center) ** 2 / self.radius**2
        out = np.zeros(s.shape, dtype=float)
        inside = s < 1.0
        out[inside] = self.amplitude * np.exp(-1.0 / (1.0 - s[inside]))
        return out if out.shape else float(out)


@dataclass(frozen=True)
class QuadratureGrid:
    """Quadrature nodes and weights on a disk.

    ``ring_radii``, ``ring_counts`` and ``ring_offsets`` expose the
    concentric-ring layout (one entry per ring; nodes are uniformly
    spaced in angle within each ring), which fast covering accumulators
    rely on.  ``ring_offsets[j]`` is the index of the first node of ring
    j in ``nodes``.
    """

    nodes: np.ndarray  # complex
    weights: np.ndarray  # float, sums to the disk area
    center: complex
    radius: float
    ring_radii: np.ndarray = field(default=None)  # type: ignore[assignment]
    ring_counts: np.ndarray = field(default=None)  # type: ignore[assignment]
    ring_offsets: np.ndarray = field(default=None)  # type: ignore[assignment]

    @property
    def size(self) -> int:
        return len(self.nodes)


def ring_grid(resolution: int = 128, center: complex = 0j, radius: float = 1.0,
              nodes_per_ring: int = 4) -> QuadratureGrid:
    """Concentric-ring midpoint rule on the disk B(center, radius).

    Ring j (j = 0..resolution-1) sits at radius (j + 1/2) * h with
    h = radius / resolution and carries ``nodes_per_ring * (2j + 1)``
    uniformly spaced nodes, so every node owns a cell of equal area.
    Weights are exact annulus areas split evenly, hence they sum to the
    disk area exactly.
    """
    if resolution < 1:
        raise InvalidQuery("resolution must be >= 1")
    h = radius / resolution
    nodes, weights = [], []
    radii, counts, offsets = [], [], []
    off = 0
    for j in range(resolution):
        r = (j + 0.5) * h
        m = nodes_per_ring * (2 * j + 1)
        ann = np.pi * h * h * (2 * j + 1)
        th = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        nodes.append(center + r * np.exp(1j * th))
        weights.append(np.full(m, ann / m))
        radii.append(r)
        counts.append(m)
        offsets.append(off)
        off += m
    return QuadratureGrid(
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        center=center,
        radius=radius,
        ring_radii=np.array(radii),
        ring_counts=np.array(counts, dtype=int),
        ring_offsets=np.array(offsets, dtype=int),
    )


def gauss_ring_grid(radial: int = 64, angular: int = 128, center: complex = 0j,
                    radius: float = 1.0) -> QuadratureGrid:
    """Gauss-Legendre radial nodes crossed with uniform angles.

    Spectrally accurate for smooth integrands (for instance products of
    disk eigenfunctions); weights sum to the disk area to machine
    precision.  Keeps the ring layout so the fast accumulators apply.
    """
    x, wx = np.polynomial.legendre.leggauss(radial)
    r = 0.5 * (x + 1.0) * radius  # map [-1,1] -> [0,radius]
    wr = 0.5 * radius * wx * r  # includes the Jacobian r dr
    th = 2.0 * np.pi * np.arange(angular) / angular
    dth = 2.0 * np.pi / angular
    nodes = (center + r[:, None] * np.exp(1j * th)[None, :]).ravel()
    weights = np.repeat(wr * dth, angular)
    return QuadratureGrid(
        nodes=nodes,
        weights=weights,
        center=center,
        radius=radius,
        ring_radii=r,
        ring_counts=np.full(radial, angular, dtype=int),
        ring_offsets=np.arange(radial, dtype=int) * angular,
    )


def integrate(f, grid: QuadratureGrid):
    """Integrate ``f`` over the grid; ``f`` may be a callable or an array
    of values at the grid nodes."""
    vals = f(grid.nodes) if callable(f) else np.asarray(f)
    if vals.shape[-1] != grid.size:
        raise InvalidQuery("value array does not match grid size")
    return vals @ grid.weights
