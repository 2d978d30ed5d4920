"""``turanlab`` command line.

Exit codes: 0 every check passed, 1 some check failed, 2 usage or parameter
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import constants as C
from .errors import ObjectiveFailure, QuadratureNoConvergence, TuranLabError
from .extremal import SearchConfig, loglog_slope, minimize_ratio, rebuild
from .families import FamilySpec, Kind, generate, qn_closed_norms
from .inequalities import IDS, PROVEN_IDS, RULES, check, sweep
from .measure import LEMMA_VARIANTS, layer_cake_check, lemma9_check, sublevel_measure_halfdisk, sublevel_measure_segment
from .norms import NormSpec, Weight, lp_integral
from .polycore import PolyClass, make_root_poly
from .serialize import csv_text, dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SEARCH_SLACK = 1e-6
LAYER_CAKE_RTOL = 1e-4
SLOPE_TOL = 0.05


class UsageError(Exception):
    pass


def real(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        v = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(v):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return v


def real_list(text: str) -> list[float]:
    return [real(t) for t in text.split(",") if t.strip()]


def int_range(text: str) -> range:
    try:
        a, b = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"need 1 <= a <= b, got {text!r}")
    return range(a, b + 1)


def root_list(text: str) -> list[complex]:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse roots {text!r}") from None


def default_seed() -> int:
    raw = os.environ.get("TURANLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TURANLAB_SEED must be an integer, got {raw!r}") from None


def _common(sp: argparse.ArgumentParser, csv_ok: bool = True) -> None:
    sp.add_argument("--format", choices=("json", "csv") if csv_ok else ("json",), default="json")
    sp.add_argument("--output", help="write to this file instead of stdout")
    sp.add_argument("--seed", type=int, default=None, help="default: $TURANLAB_SEED or 0")


def _poly_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", choices=[k.value for k in Kind])
    g.add_argument("--roots", type=root_list, help="comma-separated, e.g. 0.5,-1,0.2+0.3j")
    sp.add_argument("--n", type=int, help="family index (Qn has degree 2n)")
    sp.add_argument("--class", dest="class_tag", choices=[c.value for c in PolyClass])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="turanlab", description="Numerical checks of Turan-type polynomial inequalities.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check one inequality on one polynomial")
    v.add_argument("--ineq", required=True, choices=IDS)
    _poly_args(v)
    v.add_argument("--p", type=real)
    v.add_argument("--q", type=real)
    v.add_argument("--lemma-variant", choices=LEMMA_VARIANTS)
    _common(v)

    s = sub.add_parser("sweep", help="run checkers over seeded families")
    s.add_argument("--ineq", required=True, help="comma-separated ids, or 'proven' / 'all'")
    s.add_argument("--family", choices=[k.value for k in Kind], default=Kind.RANDOM_SEGMENT.value)
    s.add_argument("--n-range", type=int_range, required=True)
    s.add_argument("--p-grid", type=real_list, default=[])
    s.add_argument("--q-grid", type=real_list, default=[])
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    s.add_argument("--keep-range-errors", action="store_true", help="report grid cells outside an inequality's range")
    s.add_argument("--summary", action="store_true", help="omit per-polynomial reports from JSON output")
    _common(s)

    e = sub.add_parser("extremal", help="search for the smallest ratio")
    e.add_argument("--ineq", required=True, choices=IDS)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=real)
    e.add_argument("--q", type=real)
    e.add_argument("--class", dest="class_tag", choices=[c.value for c in PolyClass], default=PolyClass.SEGMENT.value)
    e.add_argument("--starts", type=int, default=50)
    e.add_argument("--max-iters", type=int, default=2000)
    _common(e)

    a = sub.add_parser("asymptote", help="log-log slope of Qn integrals")
    a.add_argument("--family", choices=[Kind.QN.value], default=Kind.QN.value)
    a.add_argument("--deriv", type=int, choices=(0, 1, 2), required=True)
    a.add_argument("--p", type=real, required=True)
    a.add_argument("--n-range", type=int_range, required=True)
    _common(a, csv_ok=False)

    m = sub.add_parser("measure", help="sublevel-set measures, layer cake, lemma")
    m.add_argument("--variant", choices=("segment", "halfdisk", "layercake", "lemma9"), required=True)
    _poly_args(m)
    m.add_argument("--alpha", type=real_list, default=[0.01, 0.1, 0.5, 1.0])
    m.add_argument("--q", type=real, default=2.0)
    m.add_argument("--lemma-variant", choices=LEMMA_VARIANTS)
    _common(m, csv_ok=False)

    c = sub.add_parser("constants", help="evaluate a named constant")
    c.add_argument("--name", required=True, choices=C.CONSTANT_NAMES)
    c.add_argument("--n", type=int)
    c.add_argument("--p", type=real)
    c.add_argument("--q", type=real)
    _common(c, csv_ok=False)
    return ap


def _polynomial(args, seed: int):
    if args.roots is not None:
        if args.n is not None and args.n != len(args.roots):
            raise UsageError(f"--n {args.n} disagrees with {len(args.roots)} roots")
        roots = np.asarray(args.roots, complex)
        tag = args.class_tag or (PolyClass.SEGMENT if np.all(roots.imag == 0) else PolyClass.HALFDISK)
        return make_root_poly(roots, tag)
    if args.n is None:
        raise UsageError("--family needs --n")
    P = generate(FamilySpec(args.family, args.n, seed))
    if args.class_tag and args.class_tag != P.class_tag.value:
        P = make_root_poly(P.roots, args.class_tag)
    return P


def _ids(text: str) -> list[str]:
    if text == "proven":
        return list(PROVEN_IDS)
    if text == "all":
        return list(IDS)
    ids = [t.strip() for t in text.split(",") if t.strip()]
    bad = [i for i in ids if i not in RULES]
    if bad:
        raise UsageError(f"unknown inequality ids: {', '.join(bad)}")
    return ids


def _fit(ns, values):
    slope = loglog_slope(ns, values)
    lx = np.log(np.asarray(ns, float))
    intercept = float(np.mean(np.log(values)) - slope * np.mean(lx))
    fitted = [math.exp(intercept + slope * x) for x in lx]
    return slope, intercept, fitted


def cmd_verify(args, seed):
    P = _polynomial(args, seed)
    r = check(args.ineq, P, args.p, args.q, lemma_variant=args.lemma_variant)
    return r.to_dict(), [r], r.passed is not False


def cmd_sweep(args, seed):
    if args.trials < 1 or args.jobs < 1:
        raise UsageError("--trials and --jobs must be positive")
    res = sweep(
        _ids(args.ineq),
        args.family,
        args.n_range,
        args.p_grid,
        args.q_grid,
        trials=args.trials,
        seed=seed,
        jobs=args.jobs,
        admissible_only=not args.keep_range_errors,
    )
    numeric = [e for e in res.errors if e.error == QuadratureNoConvergence.__name__]
    if numeric:
        raise QuadratureNoConvergence(f"{len(numeric)} cells failed to converge")
    doc = {
        "seed": seed,
        "family": args.family,
        "trials": args.trials,
        "polynomials": len({tuple(map(tuple, r.poly_digest)) for r in res.reports}),
        "violations": len(res.failures),
        "summaries": res.summaries,
        "errors": res.errors,
    }
    if not args.summary:
        doc["reports"] = res.reports
    return doc, res.reports, not res.failures


def cmd_extremal(args, seed):
    cfg = SearchConfig(args.ineq, args.n, args.p, args.q, args.class_tag, args.starts, args.max_iters, seed)
    res = minimize_ratio(cfg)
    report = check(args.ineq, rebuild(res, args.class_tag), args.p, args.q)
    doc = res.to_dict()
    doc["report"] = report
    sound = RULES[args.ineq].strict is None or res.best_ratio >= 1.0 - SEARCH_SLACK
    doc["sound"] = sound
    return doc, [report], sound


def cmd_asymptote(args, seed):
    p, k = args.p, args.deriv
    if not 0 < p < math.inf:
        raise UsageError("--p must be positive and finite")
    if k == 2 and args.n_range[0] < 2:
        raise UsageError("the second derivative needs n >= 2")
    ns = list(args.n_range)
    values = [lp_integral(generate(FamilySpec(Kind.QN, n)), NormSpec(p, Weight.NONE, k)) for n in ns]
    slope, intercept, fitted = _fit(ns, values)
    doc = {"deriv": k, "p": p, "slope": slope, "intercept": intercept}
    if k == 2:
        bounds = [qn_closed_norms(n, p, 2).value for n in ns]
        expected = p - 0.5
        ok = slope <= expected + SLOPE_TOL and all(v <= b for v, b in zip(values, bounds))
        doc["rows"] = [{"n": n, "value": v, "fit": f, "bound": b} for n, v, f, b in zip(ns, values, fitted, bounds)]
        doc["bound_slope"] = loglog_slope(ns, bounds)
        doc["expected"] = {"relation": "<=", "slope": expected}
    else:
        expected = -0.5 if k == 0 else (p - 1.0) / 2.0
        ok = abs(slope - expected) <= SLOPE_TOL
        doc["rows"] = [{"n": n, "value": v, "fit": f} for n, v, f in zip(ns, values, fitted)]
        doc["expected"] = {"relation": "=", "slope": expected}
    doc["tolerance"] = SLOPE_TOL
    doc["pass"] = ok
    return doc, None, ok


def cmd_measure(args, seed):
    P = _polynomial(args, seed)
    if args.variant in ("segment", "halfdisk"):
        fn = sublevel_measure_segment if args.variant == "segment" else sublevel_measure_halfdisk
        ests = [fn(P, a) for a in args.alpha]
        return {"variant": args.variant, "poly_digest": P.digest(), "estimates": ests}, None, all(e.passed for e in ests)
    if args.variant == "layercake":
        lhs, rhs = layer_cake_check(P, args.q)
        rel = abs(lhs - rhs) / abs(lhs)
        ok = rel <= LAYER_CAKE_RTOL
        doc = {"variant": "layercake", "q": args.q, "lhs": lhs, "rhs": rhs, "relative_difference": rel, "pass": ok}
        doc["poly_digest"] = P.digest()
        return doc, None, ok
    r = lemma9_check(P, args.q, args.lemma_variant)
    return r.to_dict(), None, r.passed is not False


def cmd_constants(args, seed):
    value = C.eval_constant(args.name, args.n, args.p, args.q)
    return {"name": args.name, "n": args.n, "p": args.p, "q": args.q, "value": value}, None, True


COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "extremal": cmd_extremal,
    "asymptote": cmd_asymptote,
    "measure": cmd_measure,
    "constants": cmd_constants,
}


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        seed = args.seed if args.seed is not None else default_seed()
        doc, reports, ok = COMMANDS[args.command](args, seed)
    except UsageError as exc:
        print(f"turanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureNoConvergence, ObjectiveFailure) as exc:
        print(f"turanlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except TuranLabError as exc:
        print(f"turanlab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = csv_text(reports, seed) if args.format == "csv" else dumps(doc)
    _write(text, args.output)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())
