"""The ten acceptance criteria as runnable checks.

``run_suite("full")`` runs them at their stated sizes; ``"quick"`` shrinks the
ranges for a smoke run. Every criterion returns a ``CriterionResult``; a
violation of a proven bound also persists a counterexample file when a
directory is given.
"""
from __future__ import annotations

import functools
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import BoundReport, persist_counterexample, verify_report
from .constructions import (
    centered_fan,
    fan_unit_construction,
    kgon_packing,
    near_segment,
    random_convex,
    regular_polygon,
)
from .counting import count_isosceles, count_regular_kgons, diagonal_sums, find_centroid_circles
from .formats import polygon_to_doc, to_plain
from .geom import DEFAULT_TOL, ConvexPolygon, ToleranceContext
from .oracles import brute_force_census, regular_kgons_by_subsets
from .search import SearchConfig, anneal

# cluster points of near-segment polygons are ~1e-7 apart, so the absolute
# floor would merge every tiny distance; compare them relatively only
SEGMENT_TOL = ToleranceContext(rel=DEFAULT_TOL.rel, abs=0.0)
UNIT_SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    records: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f}s) {self.detail}"


@dataclass(frozen=True)
class Sizes:
    max_n: int
    random_count: int
    random_max_n: int
    kgon_max_n: int
    search_steps: int


SIZES = {
    "full": Sizes(max_n=40, random_count=500, random_max_n=50, kgon_max_n=30, search_steps=50_000),
    "quick": Sizes(max_n=14, random_count=40, random_max_n=16, kgon_max_n=14, search_steps=2_000),
}


def random_suite_params(count: int, max_n: int) -> list[tuple[int, int]]:
    """(seed, n) pairs cycling n through 4..max_n."""
    span = max_n - 3
    return [(seed, 4 + seed % span) for seed in range(count)]


@functools.lru_cache(maxsize=4)
def _random_polygons(count: int, max_n: int) -> tuple[tuple[str, ConvexPolygon], ...]:
    return tuple((f"random_n{n}_seed{s}", random_convex(n, s)) for s, n in random_suite_params(count, max_n))


@functools.lru_cache(maxsize=4)
def _construction_polygons(max_n: int, kgon_max_n: int) -> tuple[tuple[str, ConvexPolygon, ToleranceContext], ...]:
    out = [("unit_square", UNIT_SQUARE, DEFAULT_TOL)]
    out += [(f"fan_unit_n{n}", fan_unit_construction(n), DEFAULT_TOL) for n in range(4, max_n + 1)]
    out += [(f"centered_fan_n{n}", centered_fan(n), DEFAULT_TOL) for n in range(4, max_n + 1)]
    out += [(f"regular_n{n}", regular_polygon(n), DEFAULT_TOL) for n in range(3, max_n + 1)]
    out += [
        (f"kgon_packing_n{n}_k{k}", kgon_packing(n, k), DEFAULT_TOL)
        for k in (4, 5, 6)
        for n in range(k, kgon_max_n + 1)
    ]
    out += [
        (f"near_segment_{m}_n{n}", near_segment(n, 1e-6, m), SEGMENT_TOL)
        for m in ("lower", "upper")
        for n in range(4, 13)
    ]
    return tuple(out)


class Battery:
    def __init__(self, size: str = "full", counterexample_dir: str | Path | None = None):
        if size not in SIZES:
            raise ValueError(f"suite size must be one of {sorted(SIZES)}")
        self.size = size
        self.sz = SIZES[size]
        self.counterexample_dir = counterexample_dir
        self._reports: dict[str, BoundReport] | None = None

    def randoms(self):
        return _random_polygons(self.sz.random_count, self.sz.random_max_n)

    def everything(self) -> list[tuple[str, ConvexPolygon, ToleranceContext]]:
        cons = list(_construction_polygons(self.sz.max_n, self.sz.kgon_max_n))
        return cons + [(pid, p, DEFAULT_TOL) for pid, p in self.randoms()]

    def reports(self) -> dict[str, BoundReport]:
        if self._reports is None:
            self._reports = {
                pid: verify_report(p, tol, polygon_id=pid) for pid, p, tol in self.everything()
            }
        return self._reports

    def _persist(self, report: BoundReport) -> str:
        if self.counterexample_dir is None:
            return ""
        return str(persist_counterexample(report, self.counterexample_dir))

    # -- criteria ---------------------------------------------------------

    def c1_unit_isosceles_construction(self) -> CriterionResult:
        bad, ceil_gap, slow, recs = [], [], [], []
        for n in range(4, self.sz.max_n + 1):
            t = time.perf_counter()
            got = count_isosceles(fan_unit_construction(n), unit=1.0).unit_isosceles
            dt = time.perf_counter() - t
            hub = (n * n - 3 * n + 2) // 2
            floor_f, ceil_f = hub + (n - 1) // 3, hub + -(-(n - 1) // 3)
            recs.append({"n": n, "count": got, "floor_formula": floor_f, "ceil_formula": ceil_f, "seconds": dt})
            if got != floor_f:
                bad.append(n)
            if got != ceil_f:
                ceil_gap.append(n)
            if dt >= 1.0:
                slow.append(n)
        detail = f"floor formula mismatches: {bad or 'none'}; ceiling variant differs at {len(ceil_gap)} n (e.g. {ceil_gap[:4]}); slow n: {slow or 'none'}"
        return CriterionResult(1, "unit isosceles fan construction", not bad and not slow, detail, records=recs)

    def c2_isosceles_construction(self) -> CriterionResult:
        bad, odd_recs = [], []
        for n in range(4, self.sz.max_n + 1):
            got = count_isosceles(centered_fan(n)).distinct_isosceles
            if n % 2 == 0:
                if 4 * got != 3 * n * n - 10 * n + 8:
                    bad.append(n)
            else:
                odd_recs.append({
                    "n": n,
                    "count": got,
                    "general_formula": (3 * n * n - 11 * n + 8 + 2 * (n // 2)) / 4,
                    "odd_case_as_printed": (3 * n * n - 10 + 7) / 4,
                })
        odd_general = all(r["count"] == r["general_formula"] for r in odd_recs)
        odd_printed = sum(r["count"] == r["odd_case_as_printed"] for r in odd_recs)
        detail = (f"even mismatches: {bad or 'none'}; odd n match general formula: {odd_general}, "
                  f"match odd case as printed: {odd_printed}/{len(odd_recs)}")
        return CriterionResult(2, "centered fan isosceles count", not bad, detail, records=odd_recs)

    def c3_regular_kgons(self) -> CriterionResult:
        bad, oracle_bad = [], []
        for k in (4, 5, 6):
            for n in range(k, self.sz.kgon_max_n + 1):
                p = kgon_packing(n, k)
                got = count_regular_kgons(p, k)
                if got != n // k:
                    bad.append((n, k, got))
                if n <= 12 and regular_kgons_by_subsets(p.vertices, k) != got:
                    oracle_bad.append(("kgon_packing", n, k))
        small = [(f"regular_n{n}", regular_polygon(n)) for n in range(3, 13)]
        small += [(f"random_n{n}", random_convex(n, 100 + n)) for n in range(4, 13)]
        small += [("unit_square", UNIT_SQUARE)]
        for pid, p in small:
            for k in range(3, min(p.n, 12) + 1):
                if count_regular_kgons(p, k) != regular_kgons_by_subsets(p.vertices, k):
                    oracle_bad.append((pid, k))
        detail = f"packing mismatches: {bad or 'none'}; detector vs subset oracle mismatches: {oracle_bad or 'none'}"
        return CriterionResult(3, "regular k-gon packing and oracle agreement", not bad and not oracle_bad, detail)

    def c4_distance_sums(self) -> CriterionResult:
        bad = []
        for pid, p in self.randoms():
            ds = diagonal_sums(p)
            s = ds.s_n / ds.perimeter
            n = p.n
            if not ((n - 1) / 2 <= s <= ((n + 1) // 2) * (n // 2) / 2):
                bad.append(pid)
        worst, miss = 0.0, []
        for m in ("lower", "upper"):
            for n in range(4, 13):
                s = diagonal_sums(near_segment(n, 1e-6, m)).s_n
                target = (n - 1) / 2 if m == "lower" else ((n + 1) // 2) * (n // 2) / 2
                worst = max(worst, abs(s - target))
                if abs(s - target) > 1e-3:
                    miss.append((m, n))
        detail = f"random violations: {len(bad)}; near-segment misses: {miss or 'none'} (worst gap {worst:.2e})"
        return CriterionResult(4, "distance sum bounds", not bad and not miss, detail)

    def c5_diagonal_sums(self) -> CriterionResult:
        mono, sub, half_fail, half_total = [], [], 0, 0
        for pid, p in self.randoms():
            u = diagonal_sums(p).u
            n = p.n
            m = len(u)
            core = m - 1 if n % 2 == 0 else m
            if any(not u[i] < u[j] for i in range(core) for j in range(i + 1, core)):
                mono.append(pid)
            if any(not u[j - 1] + u[k - 1] > u[j + k - 1] for j in range(1, m + 1) for k in range(j, m + 1 - j)):
                sub.append(pid)
            if n % 2 == 0:
                half_total += 1
                half_fail += not all(u[i] < u[m - 1] for i in range(m - 1))
        detail = (f"monotonicity violations: {len(mono)}; subadditivity violations: {len(sub)}; "
                  f"j=n/2 comparison fails on {half_fail}/{half_total} even-n polygons (reported only)")
        return CriterionResult(5, "diagonal sums increase and are subadditive", not mono and not sub, detail)

    def c6_distinct_distances(self) -> CriterionResult:
        bad = [pid for pid, r in self._random_reports() if r.check("distinct_distance_lower").status != "holds"]
        return CriterionResult(6, "distinct distances at least floor(n/2)", not bad, f"violations: {len(bad)}")

    def _random_reports(self):
        reps = self.reports()
        return [(pid, reps[pid]) for pid, _ in self.randoms()]

    def c7_centroid_circles(self) -> CriterionResult:
        bad = []
        for n in range(5, self.sz.max_n + 1):
            circles, pairs = find_centroid_circles(centered_fan(n))
            if len(circles) != 1 or len(circles[0].member_indices) != n - 1 or circles[0].center_index != 0 or pairs:
                bad.append(n)
        empty = {name: len(find_centroid_circles(p)[0]) for name, p in
                 (("regular_hexagon", regular_polygon(6)), ("unit_square", UNIT_SQUARE))}
        applicable = violated = 0
        for pid, r in self.reports().items():
            for name in ("isosceles_noncrossing_upper", "isosceles_noncrossing_upper[apex]"):
                st = r.check(name).status
                if st != "not-applicable":
                    applicable += name == "isosceles_noncrossing_upper"
                    violated += st == "violated"
        ok = not bad and not any(empty.values()) and not violated
        detail = (f"centered fan failures: {bad or 'none'}; circles on hexagon/square: {empty}; "
                  f"non-crossing bound checked on {applicable} polygons, violations: {violated}")
        return CriterionResult(7, "centroid-circle machinery", ok, detail)

    def c8_census_identity(self) -> CriterionResult:
        bad = []
        for pid, r in self.reports().items():
            t = r.census["triangles"]
            if t["apex_pairs"] != t["distinct_isosceles"] + 2 * t["equilateral"]:
                bad.append(pid)
        return CriterionResult(8, "apex pairs = distinct + 2 * equilateral", not bad,
                               f"{len(self.reports())} polygons, failures: {bad or 'none'}")

    UPPER_CHECKS = (
        "isosceles_upper",
        "equilateral_upper",
        "unit_equilateral_upper",
        "unit_equilateral_upper[any unit]",
        "unit_distance_upper",
        "unit_distance_upper[any unit]",
        "apex_no_centroid_upper",
    )

    def c9_upper_bounds(self) -> CriterionResult:
        failing, saved = [], []
        for pid, r in self.reports().items():
            names = [c for c in self.UPPER_CHECKS if r.check(c).status == "violated"]
            if names or r.errors:
                failing.append((pid, names + [c.name for c in r.errors]))
                if r.violations:
                    saved.append(self._persist(r))
        detail = f"{len(self.reports())} polygons, failures: {failing or 'none'}"
        if saved and saved[0]:
            detail += f"; counterexamples written: {saved}"
        return CriterionResult(9, "upper-bound battery", not failing, detail)

    def c10_search(self) -> CriterionResult:
        seed_poly = centered_fan(12)
        seed_count = brute_force_census(seed_poly.vertices)["distinct_isosceles"]
        cfg = SearchConfig(n=12, objective="isosceles_distinct", steps=self.sz.search_steps, seed=2024)
        t = time.perf_counter()
        a = anneal(cfg, seed_poly)
        b = anneal(cfg, seed_poly)
        dt = time.perf_counter() - t

        def blob(c):
            return json.dumps({"polygon": polygon_to_doc(c.polygon), "census": to_plain(c.verified_census),
                               "loose": c.loose_score}, sort_keys=True).encode()

        same = blob(a) == blob(b)
        ok = a.verified_score >= seed_count and same and dt < 300 and not a.report.violations
        detail = (f"seed count {seed_count}, returned verified {a.verified_score} (loose {a.loose_score}); "
                  f"byte-identical rerun: {same}; two runs took {dt:.1f}s")
        return CriterionResult(10, "search sanity", ok, detail)

    CRITERIA = (
        c1_unit_isosceles_construction,
        c2_isosceles_construction,
        c3_regular_kgons,
        c4_distance_sums,
        c5_diagonal_sums,
        c6_distinct_distances,
        c7_centroid_circles,
        c8_census_identity,
        c9_upper_bounds,
        c10_search,
    )

    def run(self, number: int) -> CriterionResult:
        t = time.perf_counter()
        res = self.CRITERIA[number - 1](self)
        res.seconds = time.perf_counter() - t
        return res


def run_suite(size: str = "full", counterexample_dir: str | Path | None = None, echo=print) -> list[CriterionResult]:
    battery = Battery(size, counterexample_dir)
    results = []
    for i in range(1, len(Battery.CRITERIA) + 1):
        res = battery.run(i)
        if echo:
            echo(res.line())
        results.append(res)
    return results
