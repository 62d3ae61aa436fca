"""Loop and measure-kind types shared by the samplers and estimators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidQuery

__all__ = [
    "MeasureKind",
    "Loop",
    "MarkedLoop",
    "polyline_diameter",
    "projection_diameters",
]


@dataclass(frozen=True)
class MeasureKind:
    """One of the three loop measures.

    kind: 'loop' (Brownian loop measure), 'disk' (Boolean circle model
    with intensity dy dr/r^3) or 'massive' (Brownian loops thinned by
    the survival weight e^{-m^2 t}).  Mass functions are constant.
    """

    kind: str = "loop"
    mass_bound: float | None = None

    def __post_init__(self):
        if self.kind not in ("loop", "disk", "massive"):
            raise InvalidQuery(f"unknown measure kind {self.kind!r}")
        if self.kind == "massive" and self.mass_bound is None:
            raise InvalidQuery("massive measure requires mass_bound")

    @property
    def m2(self) -> float:
        return 0.0 if self.mass_bound is None else self.mass_bound**2


LOOP = MeasureKind("loop")
DISK = MeasureKind("disk")


@dataclass
class Loop:
    """A planar loop: closed polyline, or an exact disk boundary.

    For polylines, ``points[0] == points[-1]`` and the cached diameter
    is the maximum pairwise distance of the stored points.  Disk
    boundaries have diameter 2·radius and time_length 0.
    """

    representation: str  # 'polyline' | 'disk'
    points: np.ndarray | None = None
    center: complex = 0j
    radius: float = 0.0
    time_length: float = 0.0
    diameter: float = field(default=0.0)

    @classmethod
    def from_polyline(cls, points: np.ndarray, t: float, diameter: float | None = None):
        if len(points) < 9:
            raise InvalidQuery("polyline loops need at least 8 steps")
        if points[0] != points[-1]:
            raise InvalidQuery("polyline is not closed")
        d = polyline_diameter(points) if diameter is None else diameter
        return cls("polyline", points=points, time_length=t, diameter=d)

    @classmethod
    def from_disk(cls, center: complex, radius: float):
        if radius <= 0:
            raise InvalidQuery("disk radius must be positive")
        return cls("disk", center=complex(center), radius=float(radius),
                   diameter=2.0 * float(radius))


@dataclass
class MarkedLoop:
    loop: Loop
    mark: int  # +1 or -1

    def __post_init__(self):
        if self.mark not in (-1, 1):
            raise InvalidQuery("mark must be +1 or -1")


def polyline_diameter(points: np.ndarray) -> float:
    """Exact diameter of the point set via its convex hull."""
    pts = np.column_stack([points.real, points.imag])
    try:
        from scipy.spatial import ConvexHull

        hull = pts[ConvexHull(pts).vertices]
    except Exception:  # collinear or tiny point sets
        hull = pts
    d2 = np.sum((hull[:, None, :] - hull[None, :, :]) ** 2, axis=-1)
    return float(np.sqrt(d2.max()))


_DIR_CACHE: dict[int, np.ndarray] = {}


def projection_diameters(blocks: np.ndarray, n_dir: int = 32) -> np.ndarray:
    """Approximate diameters of many loops at once.

    ``blocks`` has shape (n_loops, n_points), complex.  The diameter is
    taken as the largest width over ``n_dir`` directions spanning
    [0, pi); this underestimates the true diameter by at most a factor
    1 - cos(pi / (2 n_dir)) (about 0.12% at n_dir=32).
    """
    if n_dir not in _DIR_CACHE:
        ang = np.pi * np.arange(n_dir) / n_dir
        _DIR_CACHE[n_dir] = (np.cos(ang), np.sin(ang))
    cs, sn = _DIR_CACHE[n_dir]
    xs, ys = blocks.real, blocks.imag
    best = np.zeros(blocks.shape[0])
    proj = np.empty_like(xs)
    for c, s in zip(cs, sn):  # loop over directions bounds the memory
        np.multiply(xs, c, out=proj)
        proj += s * ys
        np.maximum(best, proj.max(axis=1) - proj.min(axis=1), out=best)
    return best
