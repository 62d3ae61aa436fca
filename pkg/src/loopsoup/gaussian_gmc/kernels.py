"""Covariance kernel matrices for Gaussian layering fields.

Entries are the two-point masses alpha*_{delta,D}(z, w) (and the
one-point masses alpha*_{delta,D}(z) on the diagonal, finite only for
delta > 0).  Route per entry:

* ClosedForm3F2 - loop kind on the unit disk whenever the cutoff is
  inactive (|z - w| >= delta, since covering both points already forces
  the diameter past delta);
* Quadrature   - disk kind (exact area integrals);
* MonteCarlo   - everything else (massive kind, cutoff-active pairs,
  loop diagonals via the exact split
  alpha_{delta,D}(z) = (1/5) log(d_z/delta) + alpha_{d_z,D}(z)).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidQuery, NotPositiveSemidefinite
from ..geometry import QuadratureGrid, dist_to_boundary
from ..loop_measures import AlphaQuery, Budget, MeasureKind, alpha
from .hyp import kernel_loop_disk

__all__ = ["GmcParams", "KernelMatrix", "gaussian_dimension",
           "kernel_matrix", "psd_repair", "kernel_to_csv", "kernel_from_csv"]

JITTER_CAP_FRACTION = 1e-6


@dataclass(frozen=True)
class GmcParams:
    """Gaussian layering parameters; requires Delta_xi < 1/2."""

    xi: float
    kind: str = "disk"

    def __post_init__(self):
        if self.xi <= 0:
            raise InvalidQuery("xi must be positive")
        if self.dimension >= 0.5:
            raise InvalidQuery("Delta_xi must be < 1/2 for field construction")

    @property
    def dimension(self) -> float:
        return gaussian_dimension(self.kind, self.xi)


def gaussian_dimension(kind: str, xi: float) -> float:
    """Delta_xi: xi^2/20 for loop/massive, pi xi^2/4 for disk."""
    if kind == "disk":
        return np.pi * xi**2 / 4.0
    if kind in ("loop", "massive"):
        return xi**2 / 20.0
    raise InvalidQuery(f"unknown measure kind {kind!r}")


@dataclass
class KernelMatrix:
    grid: QuadratureGrid
    entries: np.ndarray
    delta: float
    methods: np.ndarray  # small-int codes per entry
    kind: str = "loop"
    jitter: float = 0.0

    METHOD_NAMES = ("closed_form_3f2", "quadrature", "monte_carlo")


def psd_repair(entries: np.ndarray) -> tuple[np.ndarray, float]:
    """Jitter policy: add eps*I with eps the smallest power of 10 at or
    above |most negative eigenvalue|, capped at 1e-6 trace/size."""
    eig = np.linalg.eigvalsh(entries)
    lo = float(eig.min())
    if lo >= 0.0:
        return entries, 0.0
    eps = 10.0 ** np.ceil(np.log10(-lo))
    cap = JITTER_CAP_FRACTION * float(np.trace(entries)) / len(entries)
    if eps > cap:
        raise NotPositiveSemidefinite(
            f"repair {eps:.3g} exceeds the jitter cap {cap:.3g}")
    return entries + eps * np.eye(len(entries)), eps


def kernel_matrix(grid: QuadratureGrid, delta: float, kind: str = "loop",
                  budget: Budget | None = None,
                  mass_bound: float | None = None,
                  rng: np.random.Generator | int | None = None,
                  repair: bool = True) -> KernelMatrix:
    """Assemble alpha*_{delta,D} over the grid nodes, D the unit disk."""
    if delta < 0:
        raise InvalidQuery("delta must be >= 0")
    budget = budget or Budget()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    measure = MeasureKind(kind, mass_bound)
    z = grid.nodes
    n = len(z)
    out = np.zeros((n, n))
    meth = np.zeros((n, n), dtype=np.int8)
    # one-point diagonal cache keyed by the boundary distance (the disk
    # is rotation invariant, so ring grids need one evaluation per ring)
    diag_cache: dict[float, float] = {}
    for i in range(n):
        if delta == 0.0:
            out[i, i] = np.inf
            continue
        d_z = round(float(dist_to_boundary(z[i])), 15)
        if d_z not in diag_cache:
            diag_cache[d_z] = _diagonal(z[i], delta, measure, budget, rng)
        out[i, i] = diag_cache[d_z]
        meth[i, i] = 1 if kind == "disk" else 2
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(z[i] - z[j])
            if kind == "loop" and gap >= delta:
                val, m = kernel_loop_disk(z[i], z[j]), 0
            else:
                q = AlphaQuery("two_point_domain", z[i], w=z[j], delta=delta)
                a = alpha(q, measure, budget, rng)
                val, m = a.value, 1 if kind == "disk" else 2
            out[i, j] = out[j, i] = val
            meth[i, j] = meth[j, i] = m
    jit = 0.0
    if repair and delta > 0.0:
        out, jit = psd_repair(out)
    return KernelMatrix(grid, out, delta, meth, kind, jit)


def _diagonal(zi: complex, delta: float, measure: MeasureKind,
              budget: Budget, rng) -> float:
    d_z = float(dist_to_boundary(zi))
    if measure.kind == "disk":
        q = AlphaQuery("in_domain", zi, delta=delta)
        return alpha(q, measure, budget, rng).value
    if measure.kind == "loop" and d_z > delta:
        # exact scale-invariant split keeps the Monte Carlo part small
        q = AlphaQuery("in_domain", zi, delta=d_z)
        tail = alpha(q, measure, budget, rng).value
        return 0.2 * np.log(d_z / delta) + tail
    q = AlphaQuery("in_domain", zi, delta=delta)
    return alpha(q, measure, budget, rng).value


def kernel_to_csv(K: KernelMatrix, path: str) -> None:
    """CSV of (i, j, value, method) plus a JSON sidecar of metadata."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "value", "method"])
        n = len(K.entries)
        for i in range(n):
            for j in range(i, n):
                w.writerow([i, j, format(K.entries[i, j], ".17g"),
                            K.METHOD_NAMES[K.methods[i, j]]])
    side = {
        "delta": K.delta,
        "kind": K.kind,
        "jitter": K.jitter,
        "size": len(K.entries),
        "grid": {
            "center": [K.grid.center.real, K.grid.center.imag],
            "radius": K.grid.radius,
            "nodes_re": K.grid.nodes.real.tolist(),
            "nodes_im": K.grid.nodes.imag.tolist(),
            "weights": K.grid.weights.tolist(),
        },
    }
    with open(path + ".json", "w") as fh:
        json.dump(side, fh)


def kernel_from_csv(path: str) -> KernelMatrix:
    with open(path + ".json") as fh:
        side = json.load(fh)
    n = side["size"]
    g = side["grid"]
    grid = QuadratureGrid(
        nodes=np.asarray(g["nodes_re"]) + 1j * np.asarray(g["nodes_im"]),
        weights=np.asarray(g["weights"]),
        center=complex(g["center"][0], g["center"][1]),
        radius=g["radius"],
    )
    entries = np.zeros((n, n))
    meth = np.zeros((n, n), dtype=np.int8)
    names = list(KernelMatrix.METHOD_NAMES)
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        next(rd)
        for i, j, v, m in rd:
            i, j = int(i), int(j)
            entries[i, j] = entries[j, i] = float(v)
            meth[i, j] = meth[j, i] = names.index(m)
    return KernelMatrix(grid, entries, side["delta"], meth, side["kind"],
                        side["jitter"])
