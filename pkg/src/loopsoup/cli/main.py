"""Command-line front end.

Subcommands: sample-soup, alpha, one-point, two-point, kernel,
gmc-sample, chaos, converge, sobolev, lemma-check.  Every run writes
its result files plus a JSON manifest; exit codes are 0 (ok),
2 (configuration), 3 (numerical failure), 4 (budget), 5 (io).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from ..errors import (BudgetError, DivergentQuery, InvalidQuery,
                      LoopSoupError, NotPositiveSemidefinite,
                      NumericalFailure, ParameterOutOfRange)
from .config import ConfigError, RunManifest, csv_float, read_config

EXIT_CONFIG, EXIT_NUMERIC, EXIT_BUDGET, EXIT_IO = 2, 3, 4, 5


def _parse_point(text: str) -> complex:
    try:
        x, y = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"point {text!r} is not 'x,y'") from exc
    return complex(x, y)


def _measure(args):
    from ..loop_measures import MeasureKind
    return MeasureKind(args.kind, args.mass_bound)


def _budget(args):
    from ..loop_measures import Budget
    return Budget(lam_total=args.lam_total)


def _check_beta(beta: float):
    if not 0.0 <= beta < 2.0 * np.pi:
        raise ConfigError(f"beta = {beta} outside the window [0, 2*pi)")


def _check_dimension(kind: str, lam: float, beta: float):
    from ..layering_fields import conformal_dimension
    dim = conformal_dimension(kind, lam, beta).value
    if not dim < 0.5:
        raise ParameterOutOfRange(
            f"conformal dimension {dim:.4f} >= 1/2")
    return dim


def _write_rows(path: str, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ------------------------------------------------------------- commands
def cmd_sample_soup(args, manifest):
    from ..loop_measures import sample_soup, write_soup
    soup = sample_soup(args.lam, args.delta, _measure(args), rng=args.seed)
    write_soup(soup, args.out)
    manifest.add_bias("t_min_truncation", soup.bias_report)
    manifest.add_file(args.out)


def cmd_alpha(args, manifest):
    from ..loop_measures import AlphaQuery, alpha
    query = AlphaQuery(args.form, _parse_point(args.z), delta=args.delta,
                       R=args.R,
                       w=_parse_point(args.w) if args.w else None)
    value = alpha(query, _measure(args), _budget(args),
                  np.random.default_rng(args.seed))
    closed = ""
    if args.form == "annulus" and args.kind in ("loop", "disk"):
        eta = 0.2 if args.kind == "loop" else np.pi
        closed = csv_float(eta * np.log(args.R / args.delta))
    _write_rows(args.out,
                ["form", "kind", "value", "std_error", "method",
                 "closed_form"],
                [[args.form, args.kind, csv_float(value.value),
                  csv_float(value.std_error), value.method, closed]])
    manifest.add_file(args.out)


def cmd_one_point(args, manifest):
    from ..layering_fields import n_point_estimate
    from ..geometry import UNIT_DISK
    _check_beta(args.beta)
    z = _parse_point(args.z)
    value, err = n_point_estimate([z], args.lam, args.beta, args.delta,
                                  _measure(args), UNIT_DISK, args.soups,
                                  np.random.default_rng(args.seed))
    _write_rows(args.out,
                ["z", "estimate_re", "estimate_im", "std_error", "soups"],
                [[args.z, csv_float(value.real), csv_float(value.imag),
                  csv_float(err), args.soups]])
    manifest.add_file(args.out)


def cmd_two_point(args, manifest):
    from ..layering_fields import n_point_estimate
    from ..geometry import UNIT_DISK
    _check_beta(args.beta)
    pts = [_parse_point(args.z), _parse_point(args.w)]
    value, err = n_point_estimate(pts, args.lam, args.beta, args.delta,
                                  _measure(args), UNIT_DISK, args.soups,
                                  np.random.default_rng(args.seed))
    _write_rows(args.out,
                ["z", "w", "estimate_re", "estimate_im", "std_error",
                 "soups"],
                [[args.z, args.w, csv_float(value.real),
                  csv_float(value.imag), csv_float(err), args.soups]])
    manifest.add_file(args.out)


def cmd_kernel(args, manifest):
    from ..gaussian_gmc import kernel_matrix, kernel_to_csv
    from ..geometry import gauss_ring_grid
    grid = gauss_ring_grid(args.radial, args.angular)
    km = kernel_matrix(grid, args.delta, args.kind, _budget(args),
                       args.mass_bound, np.random.default_rng(args.seed))
    kernel_to_csv(km, args.out)
    manifest.add_bias("psd_jitter", km.jitter)
    manifest.add_file(args.out)


def cmd_gmc_sample(args, manifest):
    from ..gaussian_gmc import (kernel_from_csv, kernel_matrix,
                                sample_gaussian_field)
    from ..geometry import gauss_ring_grid
    if args.kernel:
        km = kernel_from_csv(args.kernel)
    else:
        km = kernel_matrix(gauss_ring_grid(args.radial, args.angular),
                           args.delta, args.kind, _budget(args),
                           args.mass_bound, np.random.default_rng(args.seed))
    field = sample_gaussian_field(km, args.xi,
                                  np.random.default_rng(args.seed))
    from ..layering_fields import field_to_csv
    field_to_csv(field, args.out)
    manifest.add_bias("psd_jitter", km.jitter)
    manifest.add_file(args.out)


def cmd_chaos(args, manifest):
    from ..chaos_convergence import cil_diagnostic, report_to_json
    from ..geometry import Bump
    _check_beta(args.beta)
    _check_dimension(args.kind, args.lam, args.beta)
    reports = cil_diagnostic(args.xi, [(args.lam, args.beta)], Bump(0j, 0.8),
                             args.delta, kind=args.kind, q_max=args.q_max,
                             budget=_budget(args),
                             rng=np.random.default_rng(args.seed),
                             beyond_proof=True)
    report_to_json(reports, args.out, meta={"command": "chaos",
                                            "seed": args.seed})
    manifest.add_file(args.out)


def cmd_converge(args, manifest):
    from ..chaos_convergence import cil_diagnostic, report_to_json
    from ..geometry import Bump
    schedule = [float(s) for s in args.schedule.split(",")]
    reports = cil_diagnostic(args.xi, schedule, Bump(0j, 0.8), args.delta,
                             kind=args.kind, q_max=args.q_max,
                             budget=_budget(args),
                             rng=np.random.default_rng(args.seed),
                             beyond_proof=args.beyond_proof)
    report_to_json(reports, args.out,
                   meta={"command": "converge", "xi": args.xi,
                         "seed": args.seed})
    manifest.add_file(args.out)


def cmd_sobolev(args, manifest):
    from ..sobolev import cauchy_diagnostic
    _check_beta(args.beta)
    deltas = [float(d) for d in args.deltas.split(",")]
    rows = cauchy_diagnostic(args.lam, args.beta, deltas, alpha=args.alpha,
                             kind=args.kind, n_soups=args.soups,
                             rng=args.seed)
    _write_rows(args.out,
                ["delta_coarse", "delta_fine", "mean_sq_norm", "std_error",
                 "soups"],
                [[csv_float(r.delta_coarse), csv_float(r.delta_fine),
                  csv_float(r.mean_sq_norm), csv_float(r.std_error),
                  r.n_soups] for r in rows])
    manifest.add_file(args.out)


def cmd_lemma_check(args, manifest):
    from ..integrability_checks import (check_concentration,
                                        check_conformal_covariance_disk,
                                        check_disk_triple_integral,
                                        check_massive_bounds,
                                        result_to_json)
    from ..geometry import Bump, MoebiusMap
    if args.lemma == "triple-integral":
        result = check_disk_triple_integral(args.a, args.b, args.c)
    elif args.lemma == "massive-bounds":
        result = check_massive_bounds(args.mass_bound or 1.0, args.R or 0.5,
                                      budget=_budget(args), rng=args.seed)
    elif args.lemma == "conformal":
        result = check_conformal_covariance_disk(
            MoebiusMap(a=args.moebius_a), Bump(0j, 0.7),
            lam=args.lam, beta=args.beta)
    elif args.lemma == "concentration":
        result = check_concentration(args.a, args.b, args.T,
                                     budget=_budget(args), rng=args.seed)
    else:
        raise ConfigError(f"unknown lemma {args.lemma!r}")
    result_to_json(result, args.out)
    manifest.add_file(args.out)


COMMANDS = {
    "sample-soup": cmd_sample_soup,
    "alpha": cmd_alpha,
    "one-point": cmd_one_point,
    "two-point": cmd_two_point,
    "kernel": cmd_kernel,
    "gmc-sample": cmd_gmc_sample,
    "chaos": cmd_chaos,
    "converge": cmd_converge,
    "sobolev": cmd_sobolev,
    "lemma-check": cmd_lemma_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopsoup",
        description="Loop-soup layering fields and Gaussian chaos "
                    "experiments on the unit disk")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **extra):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="key=value file; flags override it")
        p.add_argument("--out", default=None,
                       help="output file (default from LOOPSOUP_OUT)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--kind", default="loop",
                       choices=["loop", "disk", "massive"])
        p.add_argument("--mass-bound", type=float, default=None)
        p.add_argument("--lam-total", type=float, default=2000.0,
                       help="Monte Carlo intensity budget")
        for flag, kw in extra.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kw)
        return p

    fl = {"type": float}
    add("sample-soup", lam={"type": float, "default": 1.0},
        delta={"type": float, "default": 0.1})
    add("alpha", form={"default": "annulus"}, z={"default": "0,0"},
        w={"default": None}, delta={"type": float, "default": 0.1},
        R={"type": float, "default": None})
    for name in ("one-point", "two-point"):
        add(name, z={"default": "0,0"}, w={"default": "0.3,0"},
            delta={"type": float, "default": 0.1},
            lam={"type": float, "default": 1.0, "dest": "lam"},
            beta={"type": float, "default": np.pi / 2},
            soups={"type": int, "default": 10000})
    add("kernel", delta={"type": float, "default": 0.1},
        radial={"type": int, "default": 8},
        angular={"type": int, "default": 16})
    add("gmc-sample", delta={"type": float, "default": 0.1},
        xi={"type": float, "default": 0.4}, kernel={"default": None},
        radial={"type": int, "default": 8},
        angular={"type": int, "default": 16})
    add("chaos", delta={"type": float, "default": 0.2},
        lam={"type": float, "default": 1.0},
        beta={"type": float, "default": np.pi / 2},
        xi={"type": float, "default": 0.4},
        q_max={"type": int, "default": 16})
    add("converge", delta={"type": float, "default": 0.15},
        xi={"type": float, "default": np.sqrt(0.2)},
        schedule={"default": "4,16,64,256"},
        q_max={"type": int, "default": 8},
        beyond_proof={"action": "store_true"})
    add("sobolev", lam={"type": float, "default": 0.25},
        beta={"type": float, "default": np.pi / 2},
        alpha=dict(fl, default=2.0),
        deltas={"default": "0.4,0.2,0.1,0.05"},
        soups={"type": int, "default": 2000})
    add("lemma-check", lemma={"default": "concentration"},
        a=dict(fl, default=0.25), b=dict(fl, default=0.5),
        c=dict(fl, default=0.0), T=dict(fl, default=1.0),
        R=dict(fl, default=None), moebius_a=dict(fl, default=0.3),
        lam=dict(fl, default=1.0), beta=dict(fl, default=np.pi / 2))
    return parser


def _merge_config(parser, args, argv):
    """Apply config-file values for flags not given on the command line."""
    if not args.config:
        return args
    file_values = read_config(args.config)
    given = {a.lstrip("-").split("=")[0].replace("-", "_")
             for a in argv if a.startswith("--")}
    for key, value in file_values.items():
        if key in given or not hasattr(args, key):
            continue
        current = parser.parse_args([args.command, f"--{key.replace('_', '-')}",
                                     value])
        setattr(args, key, getattr(current, key))
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(parser, args, argv)
        if args.out is None:
            args.out = os.path.join(os.environ.get("LOOPSOUP_OUT", "."),
                                    f"{args.command}.csv")
        manifest = RunManifest(args.command, vars(args))
        COMMANDS[args.command](args, manifest)
        manifest.write(args.out + ".manifest.json")
        print(f"wrote {args.out}")
        return 0
    except (ConfigError, InvalidQuery, ParameterOutOfRange) as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"error[budget]: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NumericalFailure, DivergentQuery, NotPositiveSemidefinite,
            FloatingPointError) as exc:
        print(f"error[numeric]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    except LoopSoupError as exc:
        print(f"error[numeric]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
