"""Acceptance suite: ten end-to-end criteria at stated budgets.

Each test prints one PASS/FAIL line.  These runs are heavier than the
unit tests (the full suite takes tens of minutes); budgets and
tolerances follow the project acceptance targets.
"""

import time

import numpy as np
import pytest

from loopsoup.chaos_convergence import (ChaosLab, cil_diagnostic,
                                        fdd_convergence_test,
                                        permutation_test,
                                        variance_identity_check)
from loopsoup.gaussian_gmc import (kernel_loop_disk, kernel_matrix,
                                   kernel_residual, sample_gaussian_vectors)
from loopsoup.geometry import (Bump, MoebiusMap, UNIT_DISK, gauss_ring_grid)
from loopsoup.integrability_checks import (check_concentration,
                                           check_conformal_covariance_disk,
                                           check_disk_triple_integral,
                                           check_massive_bounds,
                                           massive_deficit_curve)
from loopsoup.layering_fields import (conformal_dimension,
                                      disk_layering_numbers,
                                      n_point_estimate)
from loopsoup.loop_measures import (AlphaQuery, Budget, LoopEventSpec,
                                    MeasureKind, alpha, disk_annulus_mc,
                                    loop_event_mc, sample_disk_soups_pooled)
from loopsoup.sobolev import build_basis, cauchy_diagnostic, grieser_fit


def _report(num, name, passed):
    print(f"\n[acceptance] criterion {num:2d} ({name}): "
          f"{'PASS' if passed else 'FAIL'}", flush=True)
    assert passed, f"criterion {num} ({name}) failed"


# ------------------------------------------------------------ criterion 1
def test_criterion_01_alpha_closed_forms():
    rng = np.random.default_rng(101)
    ok = True
    details = []
    # loop kind: hull-covering annulus events, 1/5 log(R/delta)
    for (delta, R), lam in (((0.1, 1.0), 1800.0), ((0.2, 0.8), 7000.0)):
        t0 = time.time()
        spec = LoopEventSpec(cover=(0j,), diam_min=delta, diam_max=R)
        res = loop_event_mc(spec, lam, rng, refine_mult=16)
        elapsed = time.time() - t0
        target = 0.2 * np.log(R / delta)
        dev = abs(res.value - target) / res.std_error
        here = dev <= 3.0 and res.n_accepted >= 100_000 and elapsed <= 300
        ok = ok and here
        details.append((("loop", delta, R), res.value, target, dev,
                        res.n_accepted, round(elapsed, 1), here))
    # disk kind: circle annuli, pi log(R/delta)
    for (delta, R) in ((0.1, 1.0), (0.2, 0.8)):
        t0 = time.time()
        res = disk_annulus_mc(0j, delta, R, 30000.0, rng)
        elapsed = time.time() - t0
        target = np.pi * np.log(R / delta)
        dev = abs(res.value - target) / res.std_error
        here = dev <= 3.0 and res.n_qualifying >= 100_000 and elapsed <= 300
        ok = ok and here
        details.append((("disk", delta, R), res.value, target, dev,
                        res.n_qualifying, round(elapsed, 1), here))
    for d in details:
        print(d, flush=True)
    _report(1, "annulus alpha closed forms", ok)


# ------------------------------------------------------------ criterion 2
def test_criterion_02_one_point_functions():
    lam, beta, delta = 1.0, np.pi / 2, 0.3
    cost = lam * (1.0 - np.cos(beta))
    rng = np.random.default_rng(202)
    ok = True
    # disk kind at three interior points against the quadrature oracle
    for z in (0j, 0.3 + 0j, 0.4j):
        dim = conformal_dimension("disk", lam, beta).value
        a = alpha(AlphaQuery("in_domain", z, delta=delta),
                  MeasureKind("disk"))
        theory = delta ** (-2.0 * dim) * np.exp(-cost * a.value)
        est, se = n_point_estimate([z], lam, beta, delta,
                                   MeasureKind("disk"), UNIT_DISK,
                                   10_000, rng)
        dev = abs(est.real - theory) / se
        print(("disk", z, est.real, theory, dev), flush=True)
        ok = ok and dev <= 3.0
    # loop kind at the center, alpha itself by Monte Carlo
    z = 0j
    dim = conformal_dimension("loop", lam, beta).value
    a = alpha(AlphaQuery("in_domain", z, delta=delta), MeasureKind("loop"),
              Budget(lam_total=4000.0), rng)
    norm = delta ** (-2.0 * dim)
    theory = norm * np.exp(-cost * a.value)
    est, se = n_point_estimate([z], lam, beta, delta, MeasureKind("loop"),
                               UNIT_DISK, 10_000, rng)
    combined = np.hypot(se, theory * cost * a.std_error)
    dev = abs(est.real - theory) / combined
    print(("loop", z, est.real, theory, dev), flush=True)
    ok = ok and dev <= 3.0
    _report(2, "one-point functions", ok)


# ------------------------------------------------------------ criterion 3
def test_criterion_03_hypergeometric_kernel():
    rng = np.random.default_rng(303)
    pairs = [(0.1 + 0j, 0.3 + 0j),
             (-0.2 + 0.1j, 0.2 + 0.3j),
             (0j, 0.55 + 0j),
             (0.3j, -0.3j),
             (-0.4 + 0j, 0.4 + 0j)]
    ok = True
    for z, w in pairs:
        k = kernel_loop_disk(z, w)
        mc = alpha(AlphaQuery("two_point_domain", z, w=w),
                   MeasureKind("loop"), Budget(lam_total=3000.0), rng)
        dev = abs(mc.value - k) / mc.std_error
        print((abs(z - w), k, mc.value, dev), flush=True)
        ok = ok and dev <= 3.0
    # short-distance residual bounded and continuous over two decades
    z0 = 0.1 + 0j
    seps = np.logspace(-1, -3, 9)
    g = np.array([kernel_residual(z0, z0 + s) for s in seps])
    bounded = np.all(np.isfinite(g)) and np.max(np.abs(g)) < 1.0
    continuous = np.max(np.abs(np.diff(g))) < 5e-2
    print(("residual", g.round(4).tolist()), flush=True)
    ok = ok and bounded and continuous
    _report(3, "hypergeometric kernel vs soup MC", ok)


# ------------------------------------------------------------ criterion 4
def test_criterion_04_gaussian_identities():
    rng = np.random.default_rng(404)
    grid = gauss_ring_grid(4, 8)
    K = kernel_matrix(grid, 0.2, "disk")
    xi = 0.4
    n = 100_000
    g = sample_gaussian_vectors(K, n, rng)
    w = np.exp(1j * xi * g)
    target = np.exp(-0.5 * xi**2 * np.diag(K.entries))
    dev_re = np.abs(w.real.mean(axis=0) - target) \
        / (w.real.std(axis=0, ddof=1) / np.sqrt(n))
    dev_im = np.abs(w.imag.mean(axis=0)) \
        / (w.imag.std(axis=0, ddof=1) / np.sqrt(n))
    means_ok = np.max(dev_re) <= 3.0 and np.max(dev_im) <= 3.0
    # entrywise covariance recovery
    emp = g.T @ g / n
    Kd = np.diag(K.entries)
    se = np.sqrt((np.outer(Kd, Kd) + K.entries**2) / n)
    cov_dev = np.abs(emp - K.entries) / se
    cov_ok = float(np.max(cov_dev)) <= 3.0
    print(("means max dev", float(np.max(dev_re)), float(np.max(dev_im)),
           "cov max dev", float(np.max(cov_dev))), flush=True)
    _report(4, "Gaussian one-point and covariance", means_ok and cov_ok)


# ------------------------------------------------------------ criterion 5
def test_criterion_05_chaos_isometry():
    t0 = time.time()
    lab = ChaosLab(gauss_ring_grid(10, 20), delta=0.2, kind="disk")
    out = variance_identity_check(Bump(0j, 0.8), 0.2, 1.0, np.pi / 2,
                                  n_soups=10_000, q_max=16, lab=lab,
                                  rng=np.random.default_rng(505))
    elapsed = time.time() - t0
    dev = out["residual"] / out["mc_std_error"]
    print((out["mc_variance"], out["chaos_sum"], out["tail"], dev,
           round(elapsed, 1)), flush=True)
    _report(5, "chaos isometry variance identity",
            dev <= 3.0 and elapsed <= 900)


# ------------------------------------------------------------ criterion 6
def test_criterion_06_clt_convergence():
    xi = np.sqrt(0.2)
    delta = 0.15
    schedule = [4.0, 16.0, 64.0, 256.0]
    grid = gauss_ring_grid(8, 16)
    phi = Bump(0j, 0.8)
    lab = ChaosLab(grid, delta=delta, kind="disk")
    reports = cil_diagnostic(xi, schedule, phi, delta, kind="disk",
                             q_max=4, lab=lab)
    gaps = [r.mean_gap for r in reports]
    cross = [sum(t.cross_l2_gap for t in r.terms) for r in reports]
    mono = all(a > b for a, b in zip(gaps, gaps[1:]))
    cross_ok = all(c >= -1e-12 for c in cross) and \
        cross[0] >= 4.0 * cross[-1]
    print(("mean gaps", gaps), flush=True)
    print(("cross gaps", cross), flush=True)

    rng = np.random.default_rng(606)
    results = fdd_convergence_test(xi, schedule, [phi], delta,
                                   n_soups=10_000, n_perm=500, grid=grid,
                                   subsample=1000, rng=rng)
    dists = [r["distance"] for r in results]
    dist_ok = all(a > b for a, b in zip(dists, dists[1:]))
    print(("energy distances", dists,
           "p-values", [r["p_value"] for r in results]), flush=True)

    # the soup laws at the two endpoint intensities differ significantly
    def pairings(lam, n_samples=1000, block=50):
        beta = xi / np.sqrt(lam)
        dim = conformal_dimension("disk", lam, beta).value
        test = np.asarray([phi(z) for z in grid.nodes]) * grid.weights
        vals = np.empty(n_samples, dtype=complex)
        for lo in range(0, n_samples, block):
            nb = min(block, n_samples - lo)
            sid, c, r, m = sample_disk_soups_pooled(lam, delta, nb, rng)
            nmat = disk_layering_numbers(sid, c, r, m, grid, nb)
            vals[lo:lo + nb] = np.exp(1j * beta * nmat) @ test
        vals *= delta ** (-2.0 * dim)
        return np.column_stack([vals.real, vals.imag])

    _, p_end = permutation_test(pairings(schedule[0]),
                                pairings(schedule[-1]), 500, rng)
    print(("endpoint permutation p", p_end), flush=True)
    _report(6, "central limit trend",
            mono and cross_ok and dist_ok and p_end < 0.05)


# ------------------------------------------------------------ criterion 7
def test_criterion_07_massive_bounds():
    ok = True
    for i, (m_bar, R) in enumerate([(0.5, 0.25), (0.5, 0.5),
                                    (1.0, 0.25), (1.0, 0.5)]):
        res = check_massive_bounds(m_bar, R, budget=Budget(lam_total=1000.0),
                                   rng=700 + i)
        here = res.passed and res.details["pathwise_violations"] == 0
        print(((m_bar, R), res.computed, res.bound_or_reference,
               res.details["pathwise_violations"], here), flush=True)
        ok = ok and here
    curve = massive_deficit_curve([0.5, 1.0, 2.0], 0.5,
                                  budget=Budget(lam_total=500.0), rng=77)
    ok = ok and all(a <= b for a, b in zip(curve, curve[1:]))
    _report(7, "massive one-point bounds", ok)


# ------------------------------------------------------------ criterion 8
def test_criterion_08_sobolev_cauchy():
    basis = build_basis(400)
    grid = gauss_ring_grid(64, 96)
    # eigenbasis health: orthonormality and the sup-norm growth fit
    modes = basis.evaluate(grid)
    gram = (modes * grid.weights) @ modes.T
    ortho = float(np.max(np.abs(gram - np.eye(basis.count))))
    fit = grieser_fit(basis, grid)
    rows = cauchy_diagnostic(0.25, np.pi / 2, [0.4, 0.2, 0.1, 0.05],
                             alpha=2.0, kind="disk", n_soups=2000,
                             basis=basis, grid=grid,
                             rng=np.random.default_rng(808))
    norms = [r.mean_sq_norm for r in rows]
    decreasing = all(a > b for a, b in zip(norms, norms[1:]))
    print(("pair norms", norms, "ortho", ortho, "grieser c", fit["c"]),
          flush=True)
    _report(8, "Sobolev Cauchy diagnostic",
            decreasing and ortho < 1e-6 and 0.3 < fit["c"] < 1.5)


# ------------------------------------------------------------ criterion 9
def test_criterion_09_conformal_covariance():
    phi = Bump(0j, 0.9)
    ident = check_conformal_covariance_disk(MoebiusMap(0j, 0.0), phi)
    moved = check_conformal_covariance_disk(MoebiusMap(0.3 + 0j, 0.0), phi)
    print((ident.details["relative_gap"], moved.details["relative_gap"]),
          flush=True)
    _report(9, "conformal covariance of means", ident.passed and moved.passed)


# ----------------------------------------------------------- criterion 10
def test_criterion_10_auxiliary_lemmas():
    ok = True
    for a, b, c in ((0.5, 0.3, 0.3), (0.8, 0.4, 0.4), (0.95, 0.1, 0.1)):
        res = check_disk_triple_integral(a, b, c, resolution=96)
        print(((a, b, c), res.computed, res.details["relative_change"],
               res.passed), flush=True)
        ok = ok and res.passed
    conc = check_concentration(0.25, 0.5, 1.0,
                               budget=Budget(lam_total=300.0), rng=1000)
    print(("concentration", conc.computed, conc.bound_or_reference,
           conc.passed), flush=True)
    _report(10, "auxiliary integrability lemmas", ok and conc.passed)
