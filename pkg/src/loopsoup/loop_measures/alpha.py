"""Alpha quantities: measures of covering/containment loop sets.

Closed forms where they exist (annulus queries), deterministic
quadrature for every disk-kind query, importance-sampled Monte Carlo
for the Brownian loop and massive kinds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergentQuery, InvalidQuery
from ..geometry import Domain, UNIT_DISK, dist_to_boundary
from .loops import MeasureKind
from .montecarlo import LoopEventSpec, loop_event_mc
from . import disk_model

__all__ = ["AlphaQuery", "AlphaValue", "Budget", "alpha", "alpha_hat",
           "psi_star", "concentration_check"]

FORMS = (
    "annulus",            # alpha*_{delta,R}(z)
    "in_domain",          # alpha*_{delta,V}(z)
    "two_point_band",     # alpha*_{delta',delta,V}(z,w)
    "not_in_u_in_v",      # alpha*_{U,V}(z)
    "two_point_domain",   # alpha*_{delta,D}(z,t) (delta=0 allowed)
    "exclusive",          # alpha*_{delta,D}(z|t)
    "not_in_v",           # alpha*_{notV}(z)
    "not_in_v_exclusive", # alpha*_{notV}(z|w)
)

DISK_V = (0j, 1.0)  # the unit disk as a containment set


@dataclass(frozen=True)
class AlphaQuery:
    """Symbolic description of a loop set.

    Containment sets U, V are disks given as (center, radius); V=None
    means the unit disk where a containment set is required.
    """

    form: str
    z: complex
    w: complex | None = None
    delta: float = 0.0
    delta_prime: float = 0.0
    R: float | None = None
    U: tuple | None = None
    V: tuple | None = None

    def __post_init__(self):
        if self.form not in FORMS:
            raise InvalidQuery(f"unknown alpha form {self.form!r}")
        if self.form in ("two_point_band", "two_point_domain", "exclusive",
                         "not_in_v_exclusive") and self.w is None:
            raise InvalidQuery(f"form {self.form} needs a second point")
        if self.delta < 0 or self.delta_prime < 0:
            raise InvalidQuery("cutoffs must be nonnegative")


@dataclass
class AlphaValue:
    value: float
    std_error: float
    method: str  # 'closed_form' | 'quadrature' | 'monte_carlo'
    n_samples: int = 0
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Budget:
    """Monte Carlo effort: total intensity (soup count times lambda),
    covering raster resolution (None couples it to the refinement
    depth), refinement quality, and the delta floor for hat-alpha
    extrapolations."""

    lam_total: float = 2000.0
    resolution: int | None = None
    delta_floor: float = 0.05
    kappa: float = 10.0
    refine_mult: int = 16


def _constraints(q: AlphaQuery):
    """Translate a query into the common constraint vocabulary.

    Returns dict with keys cover, avoid, diam_min, diam_max, inside,
    not_inside.  Raises DivergentQuery for sets of infinite measure.
    """
    V = q.V if q.V is not None else DISK_V
    c: dict = {"cover": (q.z,), "avoid": (), "diam_min": q.delta,
               "diam_max": None, "inside": None, "not_inside": None}
    if q.form == "annulus":
        if q.R is None:
            raise InvalidQuery("annulus needs R")
        c["diam_max"] = q.R
    elif q.form == "in_domain":
        c["inside"] = V
    elif q.form == "two_point_band":
        c["cover"] = (q.z, q.w)
        c["diam_min"] = q.delta_prime
        c["diam_max"] = q.delta
        c["inside"] = V
    elif q.form == "not_in_u_in_v":
        if q.U is None:
            raise InvalidQuery("not_in_u_in_v needs U")
        c["not_inside"] = q.U
        c["inside"] = V
    elif q.form == "two_point_domain":
        c["cover"] = (q.z, q.w)
        c["inside"] = V
    elif q.form == "exclusive":
        c["avoid"] = (q.w,)
        c["inside"] = V
    elif q.form == "not_in_v":
        c["not_inside"] = V
    elif q.form == "not_in_v_exclusive":
        c["avoid"] = (q.w,)
        c["not_inside"] = V
    # escaping a set from a covered interior point forces a minimum diameter
    if c["not_inside"] is not None:
        ctr, rho = c["not_inside"]
        reach = rho - abs(q.z - complex(ctr))
        if reach > 0:
            c["diam_min"] = max(c["diam_min"], reach)
    # two covered points force diameter >= their distance
    if len(c["cover"]) == 2:
        c["diam_min"] = max(c["diam_min"], abs(c["cover"][0] - c["cover"][1]))
    if c["diam_min"] <= 0 and c["diam_max"] is None and c["inside"] is not None:
        raise DivergentQuery("covering a point with no cutoff has infinite mass")
    return c


def alpha(query: AlphaQuery, measure: MeasureKind,
          budget: Budget | None = None,
          rng: np.random.Generator | int | None = None) -> AlphaValue:
    """Evaluate the measure of the loop set described by ``query``."""
    budget = budget or Budget()
    # closed forms: annulus queries for loop and disk kinds
    if query.form == "annulus" and measure.kind in ("loop", "disk"):
        if query.R is None:
            raise InvalidQuery("annulus needs R")
        if query.delta <= 0:
            raise DivergentQuery("annulus with delta=0 has infinite measure")
        if query.R < query.delta:
            raise InvalidQuery("annulus needs delta <= R")
        eta = 0.2 if measure.kind == "loop" else np.pi
        return AlphaValue(eta * np.log(query.R / query.delta), 0.0, "closed_form")

    c = _constraints(query)
    if measure.kind == "disk":
        val, err = disk_model.alpha_quad(
            delta=c["diam_min"], R=c["diam_max"], cover=c["cover"],
            avoid=c["avoid"], inside=c["inside"], not_inside=c["not_inside"])
        return AlphaValue(val, 0.0, "quadrature", detail={"quad_error": err})

    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    inside = c["inside"]
    spec = LoopEventSpec(
        cover=c["cover"], avoid=c["avoid"], diam_min=c["diam_min"],
        diam_max=c["diam_max"],
        in_domain=inside == DISK_V,
        in_disk=None if inside in (None, DISK_V) else inside,
        not_in_disk=c["not_inside"],
    )
    weight = None
    if measure.kind == "massive":
        m2 = measure.m2
        weight = lambda t: np.exp(-m2 * t)  # noqa: E731
    res = loop_event_mc(spec, budget.lam_total, rng, kappa=budget.kappa,
                        weight_fn=weight, resolution=budget.resolution,
                        refine_mult=budget.refine_mult)
    return AlphaValue(res.value, res.std_error, "monte_carlo",
                      n_samples=res.n_candidates,
                      detail={"n_qualifying": res.n_qualifying,
                              "n_accepted": res.n_accepted})


def alpha_hat(z: complex, R_or_domain, mass_bound: float,
              budget: Budget | None = None,
              rng: np.random.Generator | int | None = None) -> AlphaValue:
    """hat-alpha_{0,R}(z) or hat-alpha_{0,D}(z): the massive deficit
    measure, i.e. the mu-hat mass of loops covering z (diam <= R, or
    contained in the domain).

    Monte Carlo with survival weights 1 - e^{-m^2 t} at two delta
    floors, Richardson-extrapolated in delta^2 (the missing small-loop
    mass scales like delta^2 because of the weight).
    """
    if mass_bound == 0:
        return AlphaValue(0.0, 0.0, "closed_form")
    budget = budget or Budget()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    m2 = mass_bound**2
    weight = lambda t: -np.expm1(-m2 * t)  # noqa: E731
    if isinstance(R_or_domain, Domain):
        base = dict(cover=(z,), in_domain=True)
    else:
        base = dict(cover=(z,), diam_max=float(R_or_domain))
    vals, errs = [], []
    for floor in (budget.delta_floor, budget.delta_floor / 2.0):
        spec = LoopEventSpec(diam_min=floor, **base)
        res = loop_event_mc(spec, budget.lam_total, rng, kappa=budget.kappa,
                            weight_fn=weight, resolution=budget.resolution,
                        refine_mult=budget.refine_mult)
        vals.append(res.value)
        errs.append(res.std_error)
    # error ~ delta^2: eliminate the leading term between floors d and d/2
    value = vals[1] + (vals[1] - vals[0]) / 3.0
    se = float(np.sqrt((4 * errs[1] / 3) ** 2 + (errs[0] / 3) ** 2))
    return AlphaValue(value, se, "monte_carlo",
                      detail={"floors": (budget.delta_floor,
                                         budget.delta_floor / 2),
                              "raw": vals})


def psi_star(z: complex, measure: MeasureKind, domain: Domain = UNIT_DISK,
             budget: Budget | None = None,
             rng: np.random.Generator | int | None = None) -> AlphaValue:
    """Two-point-limit constant Psi*(z, D) via the identity

        Psi*(z,D) = mu*(z in hull, loop not inside B(z, d_z), loop in D)
                    - alpha*_{not B(0,1)}(0 | (0,1));

    the massive kind subtracts hat-alpha_{0,D}(z) from the loop value.
    """
    budget = budget or Budget()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if measure.kind == "massive":
        base = psi_star(z, MeasureKind("loop"), domain, budget, rng)
        hat = alpha_hat(z, domain, measure.mass_bound, budget, rng)
        return AlphaValue(base.value - hat.value,
                          float(np.hypot(base.std_error, hat.std_error)),
                          "monte_carlo", detail={"loop_psi": base.value,
                                                 "alpha_hat": hat.value})
    d_z = float(dist_to_boundary(z))
    q1 = AlphaQuery("not_in_u_in_v", z, U=(z, d_z))
    q2 = AlphaQuery("not_in_v_exclusive", 0j, w=1j, V=(0j, 1.0))
    a1 = alpha(q1, measure, budget, rng)
    a2 = alpha(q2, measure, budget, rng)
    return AlphaValue(a1.value - a2.value,
                      float(np.hypot(a1.std_error, a2.std_error)),
                      a1.method, detail={"term_escape": a1.value,
                                         "term_reference": a2.value})


def concentration_check(a: float, b: float, T: float,
                        budget: Budget | None = None,
                        rng: np.random.Generator | int | None = None):
    """Estimate mu^{loop}(0 in hull, a < diam <= b, t > T) against the
    bound b^2 / (2T).  Returns (estimate AlphaValue, bound)."""
    if not (0 < a <= b) or T <= 0:
        raise InvalidQuery("need 0 < a <= b and T > 0")
    budget = budget or Budget()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    spec = LoopEventSpec(cover=(0j,), diam_min=a, diam_max=b, t_floor=T)
    res = loop_event_mc(spec, budget.lam_total, rng, kappa=budget.kappa,
                        resolution=budget.resolution,
                        refine_mult=budget.refine_mult)
    est = AlphaValue(res.value, res.std_error, "monte_carlo",
                     n_samples=res.n_candidates,
                     detail={"n_qualifying": res.n_qualifying})
    return est, b**2 / (2.0 * T)
