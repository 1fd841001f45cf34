"""Command-line interface: hulls, simulations, and experiments.

Exit codes: 0 success, 2 configuration or input validation error,
3 statistical check failure under --check.  Outputs are written
atomically (temporary file plus rename); floats are serialized with 17
significant digits so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile

import numpy as np

from .bodies import body_from_json, body_to_json
from .empirical import (dual_cone_intensity_experiment,
                        inclusion_functional_estimate,
                        so2_square_experiment, translation_box_experiment)
from .hulls import (FAMILY_PRESETS, hull_full_affine, hull_linear_ball,
                    hull_translations_scalings, k_hull_translations,
                    positive_hull, spherical_hull_halfball)
from .poisson import sample_PK
from .zerocell import (CONE_PRESETS, build_zero_cell, cone_preset,
                       is_bounded, reflected_recession_in_cone)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK = 3


class ConfigError(Exception):
    pass


def _fmt(x):
    return float(f"{float(x):.17g}")


def _atomic_write(path, writer):
    """Write via a sibling temp file and rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, doc):
    _atomic_write(path, lambda fh: json.dump(doc, fh, indent=2,
                                             sort_keys=True))


def _write_csv(path, header, rows):
    def writer(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v
                        for v in row])
    _atomic_write(path, writer)


def _load_body(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"body file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed body JSON {path}: line {exc.lineno} "
                          f"column {exc.colno}: {exc.msg}")
    try:
        return body_from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid body description in {path}: {exc}")


def _load_points(path):
    try:
        pts = np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError:
        raise ConfigError(f"points file not found: {path}")
    except ValueError as exc:
        raise ConfigError(f"malformed points CSV {path}: {exc}")
    return pts


def _hull_to_json(result):
    body = result.body
    doc = {"exact": bool(result.exact)}
    if result.epsilon is not None:
        doc["epsilon"] = _fmt(result.epsilon)
    try:
        doc.update(body_to_json(body))
    except TypeError:
        doc["kind"] = type(body).__name__.lower()
    return doc


def cmd_hull(args):
    family = args.family
    points = _load_points(args.points)
    if family == "k-hull":
        body = _load_body(args.body)
        result = k_hull_translations(body, points)
    elif family == "translations-scalings":
        body = _load_body(args.body)
        result = hull_translations_scalings(body, points)
    elif family == "full-affine":
        result = hull_full_affine(points)
    elif family == "linear-ball":
        result = hull_linear_ball(points)
    elif family == "positive":
        result = positive_hull(points)
    elif family == "spherical":
        result = spherical_hull_halfball(points)
    else:
        raise ConfigError(f"unknown hull family: {family}")
    _write_json(args.out, _hull_to_json(result))
    return EXIT_OK


def cmd_simulate_pk(args):
    body = _load_body(args.body)
    if args.tmax <= 0:
        raise ConfigError("--tmax must be positive")
    sample = sample_PK(body, args.tmax, seed=args.seed)
    d = body.dim
    header = (["t"] + [f"eta_{i + 1}" for i in range(d)]
              + [f"u_{i + 1}" for i in range(d)])
    rows = [[m.t, *map(float, m.eta), *map(float, m.u)]
            for m in sample.marks]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_simulate_zerocell(args):
    body = _load_body(args.body)
    if args.window <= 0:
        raise ConfigError("--window must be positive")
    if args.cone not in CONE_PRESETS:
        raise ConfigError(f"unknown cone preset: {args.cone}")
    system = build_zero_cell(body, args.window, seed=args.seed)
    doc = {
        "body": body_to_json(body),
        "cone": args.cone,
        "window_radius": _fmt(args.window),
        "seed": args.seed,
        "constraints": [
            {"normal": [_fmt(v) for v in n], "offset": _fmt(t)}
            for n, t in zip(system.normals, system.offsets)],
        "marks": [
            {"t": _fmt(m.t), "eta": [_fmt(v) for v in m.eta],
             "u": [_fmt(v) for v in m.u]}
            for m in system.sample.marks],
    }
    _write_json(args.out, doc)
    return EXIT_OK


def _write_report(args, report, sidecar_columns=None):
    if args.out:
        _write_json(args.out, report.to_json())
    if getattr(args, "samples_out", None) and sidecar_columns:
        header, rows = sidecar_columns
        _write_csv(args.samples_out, header, rows)


def cmd_experiment_so2(args):
    report = so2_square_experiment(n=args.n, replicates=args.reps,
                                   limit_replicates=args.limit_reps,
                                   seed=args.seed)
    zp = report.samples["limit_plus"]
    zm = report.samples["limit_minus"]
    rows = [[float(a), float(b)] for a, b in zip(zp, zm)]
    _write_report(args, report, (["zeta_plus", "zeta_minus"], rows))
    if args.check:
        s = report.statistics
        ok = (s["ks_two_sample_plus"] < 0.05
              and s["ks_two_sample_minus"] < 0.05
              and abs(s["endpoint_rank_correlation"]) < 0.03
              and s["ks_limit_plus_vs_fitted_exponential"] < 0.02)
        if not ok:
            return EXIT_CHECK
    return EXIT_OK


def cmd_experiment_box(args):
    report = translation_box_experiment(n=args.n, replicates=args.reps,
                                        seed=args.seed)
    ext = report.samples["limit_extents"]
    rows = [[float(v) for v in row] for row in ext]
    _write_report(args, report,
                  (["plus_x", "minus_x", "plus_y", "minus_y"], rows))
    if args.check:
        s = report.statistics
        ok = (max(s["ks_limit_vs_exp_half"]) < 0.02
              and s["max_abs_correlation"] < 0.03
              and max(s["ks_two_sample"]) < 0.05)
        if not ok:
            return EXIT_CHECK
    return EXIT_OK


def cmd_experiment_inclusion(args):
    body = _load_body(args.body)
    if args.cone not in CONE_PRESETS:
        raise ConfigError(f"unknown cone preset: {args.cone}")
    cone = cone_preset(args.cone, body.dim)
    pts = _load_points(args.points)
    if pts.shape[1] != cone.n_params:
        raise ConfigError(f"points must have {cone.n_params} columns for "
                          f"the {args.cone} preset")
    report = inclusion_functional_estimate(body, cone, pts, n=args.n,
                                           replicates=args.reps,
                                           seed=args.seed)
    _write_report(args, report)
    if args.check and report.statistics["difference"] > 0.03:
        return EXIT_CHECK
    return EXIT_OK


def cmd_experiment_recession(args):
    body = _load_body(args.body)
    if args.cone not in CONE_PRESETS:
        raise ConfigError(f"unknown cone preset: {args.cone}")
    cone = cone_preset(args.cone, body.dim)
    bounded, witness = is_bounded(body, cone)
    doc = {"body": body_to_json(body), "cone": args.cone,
           "bounded": bool(bounded)}
    if witness is not None:
        doc["unbounded_direction"] = [_fmt(v) for v in witness]
    try:
        rows = reflected_recession_in_cone(body, cone)
        doc["reflected_recession_facets"] = [[_fmt(v) for v in r]
                                             for r in rows]
    except (TypeError, ValueError):
        pass
    if args.out:
        _write_json(args.out, doc)
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_experiment_dualcone(args):
    report = dual_cone_intensity_experiment(d=args.d,
                                            target_points=args.n,
                                            seed=args.seed)
    _write_report(args, report)
    if args.check:
        if abs(report.statistics["slope"] + args.d) > 0.1:
            return EXIT_CHECK
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="khull",
        description="Generalized hulls, Poisson normal-bundle processes, "
                    "and limiting zero cells.")
    sub = p.add_subparsers(dest="command", required=True)

    hull = sub.add_parser("hull", help="compute a generalized hull")
    hull.add_argument("--body", help="body JSON file")
    hull.add_argument("--family", required=True,
                      choices=["k-hull", "translations-scalings",
                               "full-affine", "linear-ball", "positive",
                               "spherical"])
    hull.add_argument("--points", required=True, help="CSV, one point/row")
    hull.add_argument("--out", required=True)
    hull.set_defaults(func=cmd_hull, needs_body=("k-hull",
                                                 "translations-scalings"))

    sim = sub.add_parser("simulate", help="run a simulation")
    simsub = sim.add_subparsers(dest="sim_command", required=True)

    pk = simsub.add_parser("pk", help="sample the normal-bundle process")
    pk.add_argument("--body", required=True)
    pk.add_argument("--tmax", type=float, required=True)
    pk.add_argument("--seed", type=int, default=0)
    pk.add_argument("--out", required=True)
    pk.set_defaults(func=cmd_simulate_pk)

    zc = simsub.add_parser("zerocell", help="build a truncated zero cell")
    zc.add_argument("--body", required=True)
    zc.add_argument("--cone", default="full")
    zc.add_argument("--window", type=float, required=True)
    zc.add_argument("--seed", type=int, default=0)
    zc.add_argument("--out", required=True)
    zc.set_defaults(func=cmd_simulate_zerocell)

    exp = sub.add_parser("experiment", help="run a verification experiment")
    expsub = exp.add_subparsers(dest="experiment_command", required=True)

    so2 = expsub.add_parser("so2-square")
    so2.add_argument("--n", type=int, default=2000)
    so2.add_argument("--reps", type=int, default=2000)
    so2.add_argument("--limit-reps", type=int, default=10000,
                     dest="limit_reps")
    so2.add_argument("--seed", type=int, default=0)
    so2.add_argument("--threads", type=int, default=1)
    so2.add_argument("--check", action="store_true")
    so2.add_argument("--out")
    so2.add_argument("--samples-out", dest="samples_out")
    so2.set_defaults(func=cmd_experiment_so2)

    box = expsub.add_parser("translation-box")
    box.add_argument("--n", type=int, default=5000)
    box.add_argument("--reps", type=int, default=10000)
    box.add_argument("--seed", type=int, default=0)
    box.add_argument("--threads", type=int, default=1)
    box.add_argument("--check", action="store_true")
    box.add_argument("--out")
    box.add_argument("--samples-out", dest="samples_out")
    box.set_defaults(func=cmd_experiment_box)

    inc = expsub.add_parser("inclusion")
    inc.add_argument("--body", required=True)
    inc.add_argument("--cone", default="skew")
    inc.add_argument("--points", required=True)
    inc.add_argument("--n", type=int, default=2000)
    inc.add_argument("--reps", type=int, default=2000)
    inc.add_argument("--seed", type=int, default=0)
    inc.add_argument("--threads", type=int, default=1)
    inc.add_argument("--check", action="store_true")
    inc.add_argument("--out")
    inc.set_defaults(func=cmd_experiment_inclusion)

    rec = expsub.add_parser("recession")
    rec.add_argument("--body", required=True)
    rec.add_argument("--cone", required=True)
    rec.add_argument("--out")
    rec.set_defaults(func=cmd_experiment_recession)

    dual = expsub.add_parser("dual-cone")
    dual.add_argument("--d", type=int, default=2, choices=[2, 3])
    dual.add_argument("--n", type=int, default=100000)
    dual.add_argument("--seed", type=int, default=0)
    dual.add_argument("--check", action="store_true")
    dual.add_argument("--out")
    dual.set_defaults(func=cmd_experiment_dualcone)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches our contract.
        return int(exc.code) if exc.code else 0
    if getattr(args, "needs_body", None) and args.family in args.needs_body \
            and not args.body:
        sys.stderr.write("error: --body is required for this family\n")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
