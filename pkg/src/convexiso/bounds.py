"""Closed-form bound table and per-polygon verification report.

Each bound carries a ``kind``:

* ``theorem``     a proven statement; ``violated`` is a genuine counterexample.
* ``asymptotic``  proven only for large n; an exceedance is informational.
* ``conjecture``  reported as ``exceeded`` / ``not-exceeded``, never a failure.
* ``info``        a ratio or construction value tracked without judgement.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .counting import (
    DistanceClasses,
    count_isosceles,
    count_regular_kgons,
    count_unit_distances,
    diagonal_sums,
    distinct_distance_stats,
    find_centroid_circles,
    repeated_distances,
)
from .formats import to_plain
from .geom import DEFAULT_TOL, ConvexPolygon, ToleranceContext, ToleranceError

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"
EXCEEDED = "exceeded"
NOT_EXCEEDED = "not-exceeded"
INFO = "informational"
ERROR = "tolerance-error"


def _log2(n: int) -> float:
    return math.log2(n)


@dataclass(frozen=True)
class BoundTable:
    """Every closed-form bound as a function of ``n`` (and ``k`` where noted).

    Integral formulas are ``int``, rational ones ``Fraction``, the logarithmic
    ones ``float``.
    """

    n: int
    k: int | None
    unit_isosceles_upper: float  # n^2/2 + 4n log2 n + 20n + 8, large n only
    unit_isosceles_construction: int  # (n^2 - 3n + 2)/2 + floor((n-1)/3)
    unit_isosceles_construction_ceil: int  # same with ceil((n-1)/3)
    isosceles_conjectured: Fraction  # 3n^2/4
    isosceles_noncrossing_upper: Fraction  # 3(n+1)^2/4
    isosceles_sparse_crossing_leading: Fraction  # 3n^2/4 + o(n^2)
    apex_no_centroid_upper: int  # n floor((n-1)/2)
    isosceles_construction: Fraction  # (3n^2 - 11n + 8 + 2 floor(n/2))/4
    isosceles_upper: Fraction  # (11n^2 - 18n)/12
    equilateral_upper: int  # n - 2
    unit_equilateral_upper: int  # floor(2(n-1)/3)
    unit_distance_upper: float  # n log2 n + 4n
    unit_distance_older_upper: float  # 2 pi n log2 n - pi n, superseded
    distinct_distance_lower: int  # floor(n/2)
    vertex_distinct_lower: int  # ceil((13n - 6)/36)
    vertex_distinct_conditional: Fraction  # 5n/12, conditional on the conjecture
    regular_kgon_upper: int | None  # floor(n/k)
    distance_sum_lower: Fraction  # (n-1)/2 at unit perimeter
    distance_sum_upper: Fraction  # ceil(n/2) floor(n/2) / 2 at unit perimeter


def evaluate_bounds(n: int, k: int | None = None) -> BoundTable:
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if k is not None and k < 4:
        raise ValueError(f"k must be at least 4, got {k}")
    lg = _log2(n)
    hub = (n * n - 3 * n + 2) // 2
    return BoundTable(
        n=n,
        k=k,
        unit_isosceles_upper=n * n / 2 + 4 * n * lg + 20 * n + 8,
        unit_isosceles_construction=hub + (n - 1) // 3,
        unit_isosceles_construction_ceil=hub + -(-(n - 1) // 3),
        isosceles_conjectured=Fraction(3 * n * n, 4),
        isosceles_noncrossing_upper=Fraction(3 * (n + 1) ** 2, 4),
        isosceles_sparse_crossing_leading=Fraction(3 * n * n, 4),
        apex_no_centroid_upper=n * ((n - 1) // 2),
        isosceles_construction=Fraction(3 * n * n - 11 * n + 8 + 2 * (n // 2), 4),
        isosceles_upper=Fraction(11 * n * n - 18 * n, 12),
        equilateral_upper=n - 2,
        unit_equilateral_upper=(2 * (n - 1)) // 3,
        unit_distance_upper=n * lg + 4 * n,
        unit_distance_older_upper=2 * math.pi * n * lg - math.pi * n,
        distinct_distance_lower=n // 2,
        vertex_distinct_lower=-(-(13 * n - 6) // 36),
        vertex_distinct_conditional=Fraction(5 * n, 12),
        regular_kgon_upper=None if k is None else n // k,
        distance_sum_lower=Fraction(n - 1, 2),
        distance_sum_upper=Fraction(((n + 1) // 2) * (n // 2), 2),
    )


@dataclass
class BoundCheck:
    name: str
    kind: str
    measured: float | None
    bound: float | None
    relation: str
    status: str
    note: str = ""


@dataclass
class BoundReport:
    polygon_id: str
    n: int
    vertices: list[list[float]]
    census: dict
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def violations(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.kind == "theorem" and c.status == VIOLATED]

    @property
    def errors(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.status == ERROR]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.errors

    def check(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        checks = [BoundCheck(**c) for c in data.get("checks", [])]
        return cls(
            polygon_id=data["polygon_id"],
            n=data["n"],
            vertices=[list(v) for v in data["vertices"]],
            census=data["census"],
            checks=checks,
        )


def _num(x) -> float | int:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return x


def _upper(name, kind, measured, bound, applicable=True, note="") -> BoundCheck:
    if not applicable:
        return BoundCheck(name, kind, _num(measured), _num(bound), "<=", NOT_APPLICABLE, note)
    ok = measured <= bound
    if kind == "conjecture":
        status = NOT_EXCEEDED if ok else EXCEEDED
    elif kind == "asymptotic":
        status = HOLDS if ok else INFO
        if not ok:
            note = (note + "; " if note else "") + "exceeded at small n (bound is for large n)"
    else:
        status = HOLDS if ok else VIOLATED
    return BoundCheck(name, kind, _num(measured), _num(bound), "<=", status, note)


def _lower(name, kind, measured, bound, note="") -> BoundCheck:
    ok = measured >= bound
    if kind == "info":
        status = INFO
    else:
        status = HOLDS if ok else VIOLATED
    return BoundCheck(name, kind, _num(measured), _num(bound), ">=", status, note)


def verify_report(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    unit: float = 1.0,
    kgon_orders: tuple[int, ...] = (4, 5, 6),
    polygon_id: str = "polygon",
) -> BoundReport:
    """Run every census on ``poly`` and compare it against every applicable bound.

    Applicability gates: the no-centroid apex bound needs zero centroid-circles,
    the non-crossing bound needs pairwise non-intersecting circles. Unit-length
    bounds are checked both at ``unit`` and at the most repeated distance, since
    they hold for every choice of unit. Distance-sum bounds use the polygon
    rescaled to unit perimeter.
    """
    n = poly.n
    dc = DistanceClasses(poly, tol)
    census = count_isosceles(poly, tol, unit=unit, classes=dc)
    circles, crossings = find_centroid_circles(poly, tol, classes=dc)
    stats = distinct_distance_stats(poly, tol, unit=unit, classes=dc)
    unit_total, _ = count_unit_distances(poly, unit, tol, classes=dc)
    rep = repeated_distances(poly, tol, classes=dc)
    ds = diagonal_sums(poly)
    bt = evaluate_bounds(n)
    kgons: dict[int, int | None] = {}
    kgon_errors: dict[int, str] = {}
    for k in kgon_orders:
        if k <= n:
            try:
                kgons[k] = count_regular_kgons(poly, k, tol)
            except ToleranceError as exc:
                kgons[k] = None
                kgon_errors[k] = str(exc)

    no_circles = not circles
    noncrossing = not crossings
    circle_note = f"{len(circles)} centroid-circle(s), {len(crossings)} intersecting pair(s)"
    checks: list[BoundCheck] = []
    add = checks.append

    add(_upper("isosceles_upper", "theorem", census.distinct_isosceles, bt.isosceles_upper))
    add(_upper("equilateral_upper", "theorem", census.equilateral, bt.equilateral_upper))
    add(_upper("unit_equilateral_upper", "theorem", census.unit_equilateral, bt.unit_equilateral_upper,
               note=f"unit={unit}"))
    add(_upper("unit_equilateral_upper[any unit]", "theorem", rep.max_unit_equilateral,
               bt.unit_equilateral_upper))
    add(_upper("unit_distance_upper", "theorem", unit_total, bt.unit_distance_upper, note=f"unit={unit}"))
    add(_upper("unit_distance_upper[any unit]", "theorem", rep.max_multiplicity, bt.unit_distance_upper))
    add(_upper("unit_distance_older_upper[any unit]", "theorem", rep.max_multiplicity,
               bt.unit_distance_older_upper, note="superseded, tabulated only"))
    add(_upper("unit_isosceles_upper", "asymptotic", census.unit_isosceles, bt.unit_isosceles_upper,
               note=f"unit={unit}"))
    add(_upper("unit_isosceles_upper[any unit]", "asymptotic", rep.max_unit_isosceles,
               bt.unit_isosceles_upper))
    add(_upper("apex_no_centroid_upper", "theorem", census.apex_pairs, bt.apex_no_centroid_upper,
               applicable=no_circles, note=circle_note))
    add(_upper("isosceles_noncrossing_upper", "theorem", census.distinct_isosceles,
               bt.isosceles_noncrossing_upper, applicable=noncrossing, note=circle_note))
    add(_upper("isosceles_noncrossing_upper[apex]", "theorem", census.apex_pairs,
               bt.isosceles_noncrossing_upper, applicable=noncrossing, note=circle_note))
    add(_upper("isosceles_conjectured", "conjecture", census.distinct_isosceles, bt.isosceles_conjectured))
    add(_upper("equilateral_conjectured", "conjecture", census.equilateral, bt.unit_equilateral_upper))
    add(BoundCheck("isosceles_per_n2", "info", census.distinct_isosceles / (n * n), 0.75, "~", INFO,
                   f"{len(crossings)} intersecting pair(s); leading term only"))
    add(_lower("distinct_distance_lower", "theorem", stats.global_distinct, bt.distinct_distance_lower))
    add(_lower("vertex_distinct_lower", "theorem", stats.max_distinct, bt.vertex_distinct_lower))
    add(_lower("vertex_distinct_conditional", "info", stats.max_distinct, bt.vertex_distinct_conditional,
               note="holds" if stats.max_distinct >= bt.vertex_distinct_conditional else "below 5n/12"))
    for k, count in kgons.items():
        if count is None:
            add(BoundCheck(f"regular_kgon_upper[k={k}]", "theorem", None, n // k, "<=", ERROR, kgon_errors[k]))
        else:
            add(_upper(f"regular_kgon_upper[k={k}]", "theorem", count, n // k))
    min_d2 = float(dc.d2[np.triu_indices(n, 1)].min())
    floor_active = tol.abs > tol.rel * min_d2
    add(BoundCheck("tolerance_floor", "info", min_d2, tol.abs / tol.rel, ">=", INFO,
                   "absolute floor dominates for the smallest distances; tiny-scale equalities may be spurious"
                   if floor_active else "relative threshold governs every comparison"))

    s_unit = ds.s_n / ds.perimeter
    add(_lower("distance_sum_lower", "theorem", s_unit, bt.distance_sum_lower))
    add(_upper("distance_sum_upper", "theorem", s_unit, bt.distance_sum_upper))
    checks.extend(_diagonal_checks(ds.u, n))

    census_dict = {
        "triangles": asdict(census),
        "unit": unit,
        "unit_distances": unit_total,
        "repeated": asdict(rep),
        "centroid_circles": [
            {"center_index": c.center_index, "radius": c.radius, "member_indices": sorted(c.member_indices)}
            for c in circles
        ],
        "intersecting_pairs": [list(p) for p in crossings],
        "distance_stats": asdict(stats),
        "diagonal_sums": asdict(ds),
        "s_n_unit_perimeter": s_unit,
        "regular_kgons": {str(k): v for k, v in kgons.items()},
    }
    return BoundReport(
        polygon_id=polygon_id,
        n=n,
        vertices=[[p.x, p.y] for p in poly.vertices],
        census=to_plain(census_dict),
        checks=checks,
    )


def _diagonal_checks(u: tuple[float, ...], n: int) -> list[BoundCheck]:
    """Strict increase and subadditivity of the diagonal sums.

    For even ``n`` the last entry double counts the long diagonals; comparisons
    that involve it are reported separately as informational.
    """
    m = len(u)
    even = n % 2 == 0
    core = m - 1 if even else m  # number of entries safe to compare
    mono_bad = [(i + 1, j + 1) for i in range(core) for j in range(i + 1, core) if not u[i] < u[j]]
    sub_bad = [
        (j, k)
        for j in range(1, m + 1)
        for k in range(j, m + 1)
        if j + k <= m and not (u[j - 1] + u[k - 1] > u[j + k - 1])
    ]
    out = [
        BoundCheck("diagonal_sums_increasing", "theorem", len(mono_bad), 0, "==",
                   HOLDS if not mono_bad else VIOLATED,
                   "" if not mono_bad else f"failing (i, j): {mono_bad[:5]}"),
        BoundCheck("diagonal_sums_subadditive", "theorem", len(sub_bad), 0, "==",
                   HOLDS if not sub_bad else VIOLATED,
                   "" if not sub_bad else f"failing (j, k): {sub_bad[:5]}"),
    ]
    if even and m >= 2:
        last_ok = all(u[i] < u[m - 1] for i in range(m - 1))
        out.append(BoundCheck("diagonal_sums_increasing[j=n/2]", "info", float(u[m - 1]), float(u[m - 2]),
                              ">", INFO, "increasing" if last_ok else "not increasing at j=n/2"))
    return out


def persist_counterexample(report: BoundReport, directory: str | Path) -> Path:
    """Write the report (with full coordinates) of a violating polygon and return its path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = "-".join(sorted({c.name.split("[")[0] for c in report.violations})) or "report"
    path = directory / f"counterexample_{report.polygon_id}_{names}.json"
    payload = {
        "schema_version": 1,
        "vertices": report.vertices,
        "meta": {"polygon_id": report.polygon_id, "violations": [asdict(c) for c in report.violations]},
        "report": report.to_dict(),
    }
    path.write_text(json.dumps(payload, indent=2))
    return path
