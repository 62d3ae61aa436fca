"""The 3F2 closed form of the loop-measure kernel on the unit disk.

    K(z, w) = -(1/10) [ log s + (1 - s) 3F2(1, 4/3, 1; 5/3, 2; 1 - s) ],
    s = |z - w|^2 / |1 - z conj(w)|^2.

The conjugate in s is required for s in [0, 1) on the disk and for the
short-distance behavior (1/5) log(1/|z - w|) to emerge; the residual
g = K - (1/5) log+(1/|z-w|) is bounded and continuous.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import beta as beta_fn

from ..errors import InvalidQuery

__all__ = ["hyp3f2_series", "kernel_loop_disk", "kernel_residual"]

ETA_LOOP = 0.2


def _aitken(s: np.ndarray) -> np.ndarray:
    """One Aitken delta-squared pass over a sequence of partial sums."""
    d1 = s[1:-1] - s[:-2]
    d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
    with np.errstate(divide="ignore", invalid="ignore"):
        acc = s[:-2] - d1 * d1 / d2
    return np.where(np.abs(d2) > 0, acc, s[2:])


def hyp3f2_series(x: float) -> float:
    """3F2(1, 4/3, 1; 5/3, 2; x) by direct summation.

    Terms are positive and the parameter excess is 1/3, so the series
    converges on [0, 1) but slows near 1; iterated Aitken acceleration
    on the partial sums is applied for x > 0.95.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise InvalidQuery("hyp3f2_series requires 0 <= x <= 1")
    if x == 0.0:
        return 1.0
    if x <= 0.95:
        total = term = 1.0
        k = 0
        while term >= 1e-14 * total:
            term *= (k + 1.0) * (k + 4.0 / 3.0) / ((k + 5.0 / 3.0) * (k + 2.0)) * x
            total += term
            k += 1
        return total
    if x == 1.0:
        # the Euler integral evaluates in closed form at x = 1:
        #   int_0^1 t^{-2/3}(1-t)^{-2/3} ln(1-t) dt
        #     = B(1/3,1/3) (psi(1/3) - psi(2/3)) = -B(1/3,1/3) pi/sqrt(3)
        return float(beta_fn(1.0 / 3.0, 1.0 / 3.0) * np.pi / np.sqrt(3.0)
                     / beta_fn(4.0 / 3.0, 1.0 / 3.0))
    if x > 1.0 - 1e-3:
        # the accelerated series loses digits this close to 1; use the
        # exact Euler-integral form
        #   F(x) = -1/(B(4/3,1/3) x) int_0^1 t^{-2/3}(1-t)^{-2/3} ln(1-xt) dt
        # (insert (4/3)_k/(5/3)_k = B(4/3+k,1/3)/B(4/3,1/3) and sum)
        val, _ = quad(lambda t: -np.log1p(-x * t), 0.0, 1.0,
                      weight="alg", wvar=(-2.0 / 3.0, -2.0 / 3.0),
                      limit=200)
        return val / (beta_fn(4.0 / 3.0, 1.0 / 3.0) * x)
    # slow region: accelerate an adaptive block of partial sums
    n = int(min(400_000, max(4000, 60.0 / (1.0 - x))))
    terms = np.empty(n)
    terms[0] = 1.0
    k = np.arange(n - 1)
    ratio = (k + 1.0) * (k + 4.0 / 3.0) / ((k + 5.0 / 3.0) * (k + 2.0)) * x
    np.cumprod(ratio, out=terms[1:])
    s = np.cumsum(terms)
    for _ in range(8):
        if len(s) < 3:
            break
        s = _aitken(s)
    return float(s[-1])


def kernel_loop_disk(z: complex, w: complex) -> float:
    """Loop-measure covariance kernel on the unit disk, z != w."""
    z, w = complex(z), complex(w)
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise InvalidQuery("kernel_loop_disk needs both points inside the disk")
    if z == w:
        raise InvalidQuery("coincident points: kernel diverges")
    s = abs(z - w) ** 2 / abs(1.0 - z * np.conj(w)) ** 2
    if s >= 1.0:  # roundoff at the boundary
        return 0.0
    return -0.1 * (np.log(s) + (1.0 - s) * hyp3f2_series(1.0 - s))


def kernel_residual(z: complex, w: complex, eta: float = ETA_LOOP) -> float:
    """g(z, w) = K(z, w) - eta log+(1/|z - w|), the bounded part of the
    short-distance decomposition."""
    r = abs(complex(z) - complex(w))
    return kernel_loop_disk(z, w) - eta * max(0.0, np.log(1.0 / r))
