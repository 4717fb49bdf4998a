"""Slow reference counters that share no code path with ``counting``.

They compare side lengths pairwise with ``ToleranceContext.close`` instead of
clustering, and find regular k-gons by enumerating vertex subsets.
"""
from __future__ import annotations

import itertools
import math

from .geom import DEFAULT_TOL, ToleranceContext


def _d2(p, q) -> float:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def brute_force_census(points, tol: ToleranceContext = DEFAULT_TOL, unit: float | None = None) -> dict:
    """Triple scan returning distinct/apex/equilateral/unit counts as a dict."""
    pts = [tuple(map(float, p)) for p in points]
    distinct = apex = equi = unit_iso = unit_equi = 0
    u2 = None if unit is None else unit * unit
    for a, b, c in itertools.combinations(range(len(pts)), 3):
        ab, ac, bc = _d2(pts[a], pts[b]), _d2(pts[a], pts[c]), _d2(pts[b], pts[c])
        eqs = [tol.close(ab, ac), tol.close(ab, bc), tol.close(ac, bc)]
        m = sum(eqs)
        if m:
            distinct += 1
            apex += 3 if m == 3 else 1
        if m == 3:
            equi += 1
        if u2 is not None:
            units = sum(tol.close(x, u2) for x in (ab, ac, bc))
            unit_iso += units >= 2
            unit_equi += units == 3
    out = {"distinct_isosceles": distinct, "apex_pairs": apex, "equilateral": equi}
    if unit is not None:
        out["unit_isosceles"] = unit_iso
        out["unit_equilateral"] = unit_equi
    return out


def brute_force_unit_distances(points, unit: float, tol: ToleranceContext = DEFAULT_TOL) -> int:
    pts = [tuple(map(float, p)) for p in points]
    return sum(tol.close(_d2(p, q), unit * unit) for p, q in itertools.combinations(pts, 2))


def is_regular_polygon(points, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """All vertices equidistant from the centroid and equally spaced in angle order."""
    k = len(points)
    cx = sum(p[0] for p in points) / k
    cy = sum(p[1] for p in points) / k
    ordered = sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    r2 = [_d2(p, (cx, cy)) for p in ordered]
    sides = [_d2(ordered[i], ordered[(i + 1) % k]) for i in range(k)]
    if not all(tol.close(r2[0], r) for r in r2) or not all(tol.close(sides[0], s) for s in sides):
        return False
    # side of a regular k-gon is 2 r sin(pi/k); rules out equal-sided stars and wraps
    return tol.close(sides[0], 4.0 * r2[0] * math.sin(math.pi / k) ** 2)


def regular_kgons_by_subsets(points, k: int, tol: ToleranceContext = DEFAULT_TOL) -> int:
    pts = [tuple(map(float, p)) for p in points]
    return sum(is_regular_polygon(list(sub), tol) for sub in itertools.combinations(pts, k))
