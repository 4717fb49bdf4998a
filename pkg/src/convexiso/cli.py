"""Command-line interface: construct, count, verify, sweep, plot, search.

Exit status: 0 success, 1 usage or input error, 2 a proven bound was violated
(the counterexample polygon is written next to the report).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import constructions as cons
from .battery import run_suite
from .bounds import persist_counterexample, verify_report
from .counting import (
    DistanceClasses,
    count_isosceles,
    count_regular_kgons,
    count_unit_distances,
    diagonal_sums,
    distinct_distance_stats,
    find_centroid_circles,
)
from .formats import PolygonFileError, dump_report, read_polygon, report_doc, to_plain, write_polygon
from .geom import DEFAULT_TOL, ConvexityError, ToleranceContext
from .plot import render_svg
from .search import OBJECTIVES, SearchConfig, anneal, run_chains

log = logging.getLogger("convexiso")

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

CONSTRUCT_KINDS = ("fan-unit", "centered-fan", "regular", "kgon-packing", "near-segment", "random-convex")


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("CEL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CEL_SEED must be an integer, got {raw!r}") from None


def _tol(args) -> ToleranceContext:
    try:
        return ToleranceContext(rel=args.rel_tol, abs=args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _seed(args) -> int:
    return default_seed() if args.seed is None else args.seed


def build(kind: str, n: int, k=None, eps=None, arc=None, seed=0, mode="lower"):
    if kind == "fan-unit":
        return cons.fan_unit_construction(n)
    if kind == "centered-fan":
        return cons.centered_fan(n, cons.DEFAULT_FAN_ARC if arc is None else arc)
    if kind == "regular":
        return cons.regular_polygon(n)
    if kind == "kgon-packing":
        if k is None:
            raise UsageError("kgon-packing needs --k")
        return cons.kgon_packing(n, k, seed)
    if kind == "near-segment":
        if eps is None:
            raise UsageError("near-segment needs --eps")
        return cons.near_segment(n, eps, mode)
    if kind == "random-convex":
        return cons.random_convex(n, seed)
    raise UsageError(f"unknown construction {kind!r}")


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- commands -----------------------------------------------------------------

def cmd_construct(args) -> int:
    seed = _seed(args)
    poly = build(args.kind, args.n, args.k, args.eps, args.arc, seed, args.mode)
    meta = {"kind": args.kind, "n": args.n}
    for key in ("k", "eps", "arc"):
        if getattr(args, key) is not None:
            meta[key] = getattr(args, key)
    if args.kind in ("kgon-packing", "random-convex"):
        meta["seed"] = seed
    if args.kind == "near-segment":
        meta["mode"] = args.mode
    out = args.out or f"{args.kind}_n{args.n}.json"
    write_polygon(out, poly, meta)
    print(f"wrote {poly.n} vertices, perimeter {poly.perimeter():.12g} to {out}")
    return EXIT_OK


def census_document(poly, tol: ToleranceContext, unit: float, k: int | None) -> dict:
    dc = DistanceClasses(poly, tol)
    circles, pairs = find_centroid_circles(poly, tol, classes=dc)
    total, g = count_unit_distances(poly, unit, tol, classes=dc)
    body = {
        "tolerance": {"rel": tol.rel, "abs": tol.abs},
        "n": poly.n,
        "triangles": to_plain(count_isosceles(poly, tol, unit=unit, classes=dc)),
        "unit_distances": {"unit": unit, "total": total, "degree": list(g)},
        "centroid_circles": to_plain(circles),
        "intersecting_pairs": [list(p) for p in pairs],
        "distance_stats": to_plain(distinct_distance_stats(poly, tol, unit=unit, classes=dc)),
        "diagonal_sums": to_plain(diagonal_sums(poly)),
    }
    if k is not None:
        body["regular_kgons"] = {"k": k, "count": count_regular_kgons(poly, k, tol)}
    return report_doc("census", body)


def cmd_count(args) -> int:
    poly, _ = read_polygon(args.input)
    doc = census_document(poly, _tol(args), args.unit, args.k)
    _write_text(args.out, dump_report(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite:
        results = run_suite(args.suite, args.counterexample_dir)
        doc = report_doc("suite", {"size": args.suite, "criteria": [
            {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
            for r in results
        ]})
        if args.out:
            _write_text(args.out, dump_report(doc))
        return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    if not args.input:
        raise UsageError("verify needs a polygon file or --suite")
    poly, meta = read_polygon(args.input)
    pid = Path(args.input).stem
    report = verify_report(poly, _tol(args), unit=args.unit, polygon_id=pid)
    doc = report_doc("bound_report", report.to_dict())
    _write_text(args.out, dump_report(doc))
    for c in report.checks:
        log.info("%-40s %-15s %s", c.name, c.status, c.note)
    if report.violations:
        path = persist_counterexample(report, args.counterexample_dir or Path(args.input).parent)
        print(f"bound violated: {[c.name for c in report.violations]}; counterexample written to {path}",
              file=sys.stderr)
        return EXIT_VIOLATION
    if report.errors:
        print(f"inconclusive: {[c.name for c in report.errors]} hit a tolerance failure", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def sweep_row(kind: str, n: int, k: int | None, seed: int, tol: ToleranceContext = DEFAULT_TOL) -> dict | None:
    if kind == "fan-unit":
        if n < 4:
            return None
        got = count_isosceles(cons.fan_unit_construction(n), tol, unit=1.0).unit_isosceles
        hub = (n * n - 3 * n + 2) // 2
        floor_f, ceil_f = hub + (n - 1) // 3, hub - (-(n - 1) // 3)
        return {"n": n, "measured": got, "formula": floor_f, "discrepancy": got - floor_f,
                "ceil_formula": ceil_f, "ceil_discrepancy": got - ceil_f}
    if kind == "centered-fan":
        if n < 4:
            return None
        got = count_isosceles(cons.centered_fan(n), tol).distinct_isosceles
        f = (3 * n * n - 11 * n + 8 + 2 * (n // 2)) // 4
        row = {"n": n, "measured": got, "formula": f, "discrepancy": got - f}
        row["odd_case_as_printed"] = (3 * n * n - 10 + 7) / 4 if n % 2 else ""
        return row
    if kind == "kgon-packing":
        if k is None:
            raise UsageError("kgon-packing sweep needs --k")
        if n < k:
            return None
        got = count_regular_kgons(cons.kgon_packing(n, k, seed), k, tol)
        return {"n": n, "k": k, "measured": got, "formula": n // k, "discrepancy": got - n // k}
    if kind == "regular":
        got = count_isosceles(cons.regular_polygon(n), tol).apex_pairs
        f = n * ((n - 1) // 2)
        return {"n": n, "measured": got, "formula": f, "discrepancy": got - f}
    if kind in ("near-segment-lower", "near-segment-upper"):
        mode = kind.rsplit("-", 1)[1]
        got = diagonal_sums(cons.near_segment(n, 1e-6, mode)).s_n
        f = (n - 1) / 2 if mode == "lower" else ((n + 1) // 2) * (n // 2) / 2
        return {"n": n, "measured": got, "formula": f, "discrepancy": got - f}
    raise UsageError(f"unknown sweep kind {kind!r}")


def _sweep_job(a):
    return sweep_row(*a)


def cmd_sweep(args) -> int:
    if args.n_min > args.n_max or args.n_min < 3:
        raise UsageError("need 3 <= --n-min <= --n-max")
    seed = _seed(args)
    tol = _tol(args)
    jobs = [(args.kind, n, args.k, seed, tol) for n in range(args.n_min, args.n_max + 1, args.step)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(j) for j in jobs]
    rows = [r for r in rows if r is not None]
    if not rows:
        raise UsageError("range contains no valid n for this construction")
    fields = list(dict.fromkeys(key for r in rows for key in r))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_plot(args) -> int:
    poly, _ = read_polygon(args.input)
    svg = render_svg(poly, _tol(args), circles=not args.no_circles, kgon_orders=tuple(args.k or ()),
                     unit=args.unit)
    _write_text(args.out, svg + "\n")
    return EXIT_OK


def cmd_search(args) -> int:
    seed = _seed(args)
    if args.seed_polygon:
        initial, _ = read_polygon(args.seed_polygon)
    else:
        initial = build(args.init, args.n, k=4, seed=seed)
    try:
        cfg = SearchConfig(
            n=args.n, objective=args.objective, tau_obj=args.tau_obj, tau_strict=args.tau_strict,
            steps=args.steps, t0=args.t0, decay=args.decay, move_scale=args.move_scale,
            unit=args.unit, seed=seed, progress_every=args.progress_every,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if initial.n != cfg.n:
        raise UsageError(f"initial polygon has {initial.n} vertices but --n is {cfg.n}")
    if args.chains == 1:
        best = anneal(cfg, initial, progress=lambda rec: log.info(json.dumps(rec)))
    else:
        best = run_chains(cfg, initial, chains=args.chains, jobs=args.jobs)
    for step, val in best.history:
        log.info("step %d: best loose score %d", step, val)
    meta = {"search": {"objective": cfg.objective, "seed": cfg.seed, "steps": cfg.steps, "chains": args.chains},
            "verified_score": best.verified_score, "loose_score": best.loose_score}
    write_polygon(args.out, best.polygon, meta)
    doc = report_doc("search", {
        "config": to_plain(cfg),
        "loose_score": best.loose_score,
        "verified_score": best.verified_score,
        "verified_census": to_plain(best.verified_census),
        "accepted": best.accepted,
        "rejected": best.rejected,
        "history": [list(h) for h in best.history],
        "bound_report": best.report.to_dict() if best.report else None,
    })
    report_path = args.report or str(Path(args.out).with_suffix(".report.json"))
    _write_text(report_path, dump_report(doc))
    print(f"verified {cfg.objective} = {best.verified_score} (loose {best.loose_score}); wrote {args.out}")
    if best.report and best.report.violations:
        path = persist_counterexample(best.report, Path(args.out).parent)
        print(f"bound violated: counterexample written to {path}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_tol(p):
    p.add_argument("--rel-tol", type=float, default=DEFAULT_TOL.rel, help="relative threshold on squared distances")
    p.add_argument("--abs-tol", type=float, default=DEFAULT_TOL.abs, help="absolute threshold on squared distances")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convexiso", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a construction to a polygon file")
    p.add_argument("kind", choices=CONSTRUCT_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--arc", type=float, help="centered-fan arc in radians")
    p.add_argument("--mode", choices=("lower", "upper"), default="lower")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("count", help="full census of a polygon file")
    p.add_argument("input")
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--k", type=int)
    p.add_argument("--out", "-o")
    _add_tol(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="check a polygon against every bound, or run the acceptance suite")
    p.add_argument("input", nargs="?")
    p.add_argument("--suite", choices=("quick", "full"))
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--counterexample-dir")
    p.add_argument("--out", "-o")
    _add_tol(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV of measured counts beside closed forms over a range of n")
    p.add_argument("kind", choices=("fan-unit", "centered-fan", "kgon-packing", "regular",
                                    "near-segment-lower", "near-segment-upper"))
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", "-o")
    _add_tol(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="SVG rendering with overlays")
    p.add_argument("input")
    p.add_argument("--out", "-o")
    p.add_argument("--k", type=int, action="append", help="highlight regular k-gons (repeatable)")
    p.add_argument("--unit", type=float, help="draw unit edges of this length")
    p.add_argument("--no-circles", action="store_true")
    _add_tol(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("search", help="anneal for polygons with many isosceles or equilateral triangles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", choices=OBJECTIVES, default="isosceles_distinct")
    p.add_argument("--steps", type=int, default=200_000)
    p.add_argument("--init", choices=CONSTRUCT_KINDS, default="centered-fan")
    p.add_argument("--seed-polygon", help="start from this polygon file instead of --init")
    p.add_argument("--seed", type=int)
    p.add_argument("--tau-obj", type=float, default=1e-4)
    p.add_argument("--tau-strict", type=float, default=1e-9)
    p.add_argument("--t0", type=float, default=2.0)
    p.add_argument("--decay", type=float, default=0.999)
    p.add_argument("--move-scale", type=float, default=0.05)
    p.add_argument("--unit", type=float, default=1.0)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--progress-every", type=int, default=0)
    p.add_argument("--out", "-o", default="search_best.json")
    p.add_argument("--report")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, PolygonFileError, ConvexityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
