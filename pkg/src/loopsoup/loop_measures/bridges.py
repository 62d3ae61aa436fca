"""Brownian bridge loop sampling.

A rooted loop of time length t is a complex Brownian bridge from the
root back to itself.  Bridges are sampled at uniform times k·t/steps
with exact finite-dimensional marginals: B_k = W_k - (k/n)·W_n for a
standard complex walk W.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidQuery
from .loops import Loop, projection_diameters

__all__ = ["bridge_steps", "sample_brownian_bridge_loop", "sample_bridges_grouped"]

STEPS_CAP = 32768


def bridge_steps(t, delta: float, cap: int = STEPS_CAP):
    """Discretization resolution: max(64, ceil(256 t / delta^2)), capped."""
    t = np.asarray(t, dtype=float)
    s = np.maximum(64, np.ceil(256.0 * t / delta**2)).astype(int)
    return np.minimum(s, cap)


def _bridge_block(roots: np.ndarray, ts: np.ndarray, steps: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Bridges for a batch sharing one step count.

    Returns complex array (len(roots), steps+1); first and last columns
    equal the roots.
    """
    n = len(roots)
    scale = np.sqrt(ts / steps)
    inc = rng.standard_normal((n, steps)) + 1j * rng.standard_normal((n, steps))
    w = np.cumsum(inc * scale[:, None], axis=1)
    frac = np.arange(1, steps + 1) / steps
    b = w - frac[None, :] * w[:, -1:]
    out = np.empty((n, steps + 1), dtype=complex)
    out[:, 0] = 0.0
    out[:, 1:] = b
    out += roots[:, None]
    out[:, -1] = roots  # exact closure
    return out


def sample_brownian_bridge_loop(root: complex, t: float, steps: int,
                                rng: np.random.Generator) -> Loop:
    """One rooted Brownian loop with exact bridge marginals."""
    if t <= 0:
        raise InvalidQuery("time length must be positive")
    if steps < 8:
        raise InvalidQuery("steps must be at least 8")
    pts = _bridge_block(np.array([complex(root)]), np.array([float(t)]), steps, rng)[0]
    return Loop.from_polyline(pts, t)


def sample_bridges_grouped(roots: np.ndarray, ts: np.ndarray, delta: float,
                           rng: np.random.Generator, n_dir: int = 32,
                           cap: int = STEPS_CAP):
    """Sample many bridges, grouped by step count for vectorization.

    Yields tuples (index, blocks, diams) where ``index`` are positions
    into the input arrays, ``blocks`` is the (n, steps+1) point array
    and ``diams`` its projection diameters.  Groups are emitted in
    ascending step order; within a group the input order is preserved.
    """
    steps = bridge_steps(ts, delta, cap)
    order = np.argsort(steps, kind="stable")
    steps_sorted = steps[order]
    bounds = np.flatnonzero(np.diff(steps_sorted)) + 1
    # limit block memory: split groups into chunks of ~2^23 complex values
    for grp in np.split(order, bounds):
        s = int(steps[grp[0]])
        chunk = max(1, int(8e6 // (s + 1)))
        for i in range(0, len(grp), chunk):
            idx = grp[i : i + chunk]
            blocks = _bridge_block(roots[idx], ts[idx], s, rng)
            diams = projection_diameters(blocks, n_dir)
            yield idx, blocks, diams
