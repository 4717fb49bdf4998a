"""Censuses over the vertices of a convex polygon.

Every census starts from one global clustering of the C(n, 2) squared pair
distances (see ``DistanceClasses``). Equality of two distances always means
"same class", which keeps the equality relation transitive: a triple has
either 0, 1 or 3 equal side pairs, never 2, and the identity
``apex_pairs == distinct_isosceles + 2 * equilateral`` holds exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .geom import (
    DEFAULT_TOL,
    ConvexPolygon,
    ToleranceContext,
    ToleranceError,
    cluster_values,
    pairwise_squared_distances,
)


@dataclass(frozen=True)
class TriangleCensus:
    """Isosceles triangle counts of one polygon.

    ``apex_pairs`` counts each isosceles triangle once per apex, so an
    equilateral triangle contributes three. ``unit_isosceles`` and
    ``unit_equilateral`` are None unless a unit length was supplied.
    """

    n: int
    distinct_isosceles: int
    apex_pairs: int
    equilateral: int
    unit_isosceles: int | None = None
    unit_equilateral: int | None = None
    per_vertex_apex: tuple[int, ...] = ()


@dataclass(frozen=True)
class CentroidCircle:
    center_index: int
    radius: float
    member_indices: frozenset[int]

    def intersects(self, other: "CentroidCircle") -> bool:
        return bool(self.member_indices & other.member_indices)


@dataclass(frozen=True)
class DistanceStats:
    per_vertex_distinct: tuple[int, ...]
    max_distinct: int
    global_distinct: int
    unit_degree: tuple[int, ...]


@dataclass(frozen=True)
class RepeatedDistances:
    """Worst case over all distance classes, i.e. treating each as "the unit".

    Unit-distance style bounds are scale-free, so they must hold for every
    choice of unit; these maxima are what the bound checks compare against.
    """

    max_multiplicity: int
    max_unit_isosceles: int
    max_unit_equilateral: int


@dataclass(frozen=True)
class DiagonalSums:
    u: tuple[float, ...]
    s_n: float
    perimeter: float


@dataclass
class DistanceClasses:
    """Global equality classes of the squared pair distances of a polygon."""

    poly: ConvexPolygon
    tol: ToleranceContext = DEFAULT_TOL
    d2: np.ndarray = field(init=False, repr=False)
    labels: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.poly.n
        self.d2 = pairwise_squared_distances(self.poly.coords)
        iu = np.triu_indices(n, 1)
        cls = cluster_values(self.d2[iu], self.tol)
        labels = np.full((n, n), -1, dtype=np.int64)
        labels[iu] = cls
        labels[(iu[1], iu[0])] = cls
        self.labels = labels
        self._pair_cls = cls
        self._pair_vals = self.d2[iu]

    @property
    def n(self) -> int:
        return self.poly.n

    @cached_property
    def num_classes(self) -> int:
        return int(self._pair_cls.max()) + 1 if self._pair_cls.size else 0

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self._pair_cls, minlength=self.num_classes)

    @cached_property
    def class_values(self) -> np.ndarray:
        """Mean squared distance of each class."""
        sums = np.bincount(self._pair_cls, weights=self._pair_vals, minlength=self.num_classes)
        return sums / np.maximum(self.class_sizes, 1)

    @cached_property
    def degree(self) -> np.ndarray:
        """``degree[v, c]`` = number of vertices in class ``c`` seen from ``v``."""
        n = self.n
        deg = np.zeros((n, self.num_classes), dtype=np.int64)
        rows = np.repeat(np.arange(n), n)
        lab = self.labels.ravel()
        keep = lab >= 0
        np.add.at(deg, (rows[keep], lab[keep]), 1)
        return deg

    @cached_property
    def equilateral_classes(self) -> np.ndarray:
        """Class label of the common side of every equilateral triple."""
        n = self.n
        found = []
        lab = self.labels
        for i in range(n - 2):
            row = lab[i, i + 1:]
            sub = lab[i + 1:, i + 1:]
            eq = (row[:, None] == row[None, :]) & (sub == row[:, None])
            jj, kk = np.nonzero(np.triu(eq, 1))
            if jj.size:
                found.append(row[jj])
        return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)

    def unit_class(self, unit: float) -> int | None:
        """Class whose members lie nearest ``unit**2``, if within tolerance of it."""
        if self.num_classes == 0:
            return None
        target = float(unit) ** 2
        dev = np.abs(self._pair_vals - target)
        ok = dev <= np.maximum(self.tol.abs, self.tol.rel * np.maximum(self._pair_vals, target))
        if not ok.any():
            return None
        idx = np.flatnonzero(ok)
        return int(self._pair_cls[idx[np.argmin(dev[idx])]])


def _classes(poly: ConvexPolygon, tol: ToleranceContext, classes: DistanceClasses | None) -> DistanceClasses:
    if classes is not None:
        return classes
    if not isinstance(poly, ConvexPolygon):
        raise TypeError(f"expected ConvexPolygon, got {type(poly).__name__}")
    return DistanceClasses(poly, tol)


def count_isosceles(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    unit: float | None = None,
    classes: DistanceClasses | None = None,
) -> TriangleCensus:
    """Count isosceles, equilateral and (optionally) unit isosceles vertex triples.

    Per apex ``v`` the triangles it owns are the pairs drawn from one distance
    class around ``v``; summing gives ``apex_pairs``. Equilateral triples are
    enumerated directly, and ``distinct_isosceles = apex_pairs - 2 * equilateral``.
    A triple is unit isosceles when at least two of its sides lie in the class
    of ``unit``.
    """
    dc = _classes(poly, tol, classes)
    deg = dc.degree
    per_apex = (deg * (deg - 1) // 2).sum(axis=1)
    apex_pairs = int(per_apex.sum())
    eq_cls = dc.equilateral_classes
    equilateral = int(eq_cls.size)
    unit_iso = unit_eq = None
    if unit is not None:
        c = dc.unit_class(unit)
        if c is None:
            unit_iso = unit_eq = 0
        else:
            g = deg[:, c]
            unit_eq = int(np.count_nonzero(eq_cls == c))
            unit_iso = int((g * (g - 1) // 2).sum()) - 2 * unit_eq
    return TriangleCensus(
        n=dc.n,
        distinct_isosceles=apex_pairs - 2 * equilateral,
        apex_pairs=apex_pairs,
        equilateral=equilateral,
        unit_isosceles=unit_iso,
        unit_equilateral=unit_eq,
        per_vertex_apex=tuple(int(x) for x in per_apex),
    )


def count_unit_distances(
    poly: ConvexPolygon,
    unit: float = 1.0,
    tol: ToleranceContext = DEFAULT_TOL,
    classes: DistanceClasses | None = None,
) -> tuple[int, tuple[int, ...]]:
    """Number of vertex pairs at distance ``unit`` and the per-vertex unit degree."""
    if not unit > 0:
        raise ValueError(f"unit must be positive, got {unit}")
    dc = _classes(poly, tol, classes)
    c = dc.unit_class(unit)
    if c is None:
        return 0, (0,) * dc.n
    g = dc.degree[:, c]
    return int(g.sum()) // 2, tuple(int(x) for x in g)


def repeated_distances(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    classes: DistanceClasses | None = None,
) -> RepeatedDistances:
    dc = _classes(poly, tol, classes)
    if dc.num_classes == 0:
        return RepeatedDistances(0, 0, 0)
    deg = dc.degree
    eq_per_class = np.bincount(dc.equilateral_classes, minlength=dc.num_classes)
    unit_iso = (deg * (deg - 1) // 2).sum(axis=0) - 2 * eq_per_class
    return RepeatedDistances(
        max_multiplicity=int(dc.class_sizes.max()),
        max_unit_isosceles=int(unit_iso.max()),
        max_unit_equilateral=int(eq_per_class.max()),
    )


def find_centroid_circles(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    classes: DistanceClasses | None = None,
) -> tuple[list[CentroidCircle], list[tuple[int, int]]]:
    """Centroid-circles and the index pairs of circles sharing a polygon vertex.

    Each distance class holding at least three vertices around some vertex
    ``v`` is one centroid-circle centred at ``v``.
    """
    dc = _classes(poly, tol, classes)
    circles: list[CentroidCircle] = []
    lab = dc.labels
    for v in range(dc.n):
        for c in np.flatnonzero(dc.degree[v] >= 3):
            members = frozenset(int(i) for i in np.flatnonzero(lab[v] == c))
            radius = float(np.sqrt(dc.d2[v, sorted(members)].mean()))
            circles.append(CentroidCircle(v, radius, members))
    pairs = [
        (a, b)
        for a in range(len(circles))
        for b in range(a + 1, len(circles))
        if circles[a].intersects(circles[b])
    ]
    return circles, pairs


def distinct_distance_stats(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    unit: float = 1.0,
    classes: DistanceClasses | None = None,
) -> DistanceStats:
    dc = _classes(poly, tol, classes)
    per_vertex = tuple(int(x) for x in np.count_nonzero(dc.degree, axis=1))
    _, g = count_unit_distances(poly, unit, tol, classes=dc)
    return DistanceStats(
        per_vertex_distinct=per_vertex,
        max_distinct=max(per_vertex),
        global_distinct=dc.num_classes,
        unit_degree=g,
    )


def diagonal_sums(poly: ConvexPolygon) -> DiagonalSums:
    """Cyclic diagonal sums ``u[j] = sum_i d(v_i, v_{i+j})`` for ``1 <= j <= n // 2``.

    ``u[0]`` in the returned tuple is the perimeter (j = 1). For even ``n`` the
    last entry counts every long diagonal twice. ``s_n`` is the plain sum over
    all unordered vertex pairs.
    """
    c = poly.coords
    n = poly.n
    u = []
    for j in range(1, n // 2 + 1):
        diff = np.roll(c, -j, axis=0) - c
        u.append(float(np.hypot(diff[:, 0], diff[:, 1]).sum()))
    d = np.sqrt(pairwise_squared_distances(c))
    s_n = float(d[np.triu_indices(n, 1)].sum())
    return DiagonalSums(u=tuple(u), s_n=s_n, perimeter=u[0])


def _match_radius(edge: float, tol: ToleranceContext) -> float:
    """Position slack that moves a squared distance ``edge**2`` by about one threshold."""
    return max(tol.abs / (2.0 * edge), tol.rel * edge / 2.0)


def find_regular_kgons(
    poly: ConvexPolygon, k: int, tol: ToleranceContext = DEFAULT_TOL
) -> list[tuple[int, ...]]:
    """Vertex index sets (sorted) of every regular k-gon among the polygon's vertices.

    Each ordered vertex pair ``(a, b)`` is taken as one counterclockwise edge;
    the remaining ``k - 2`` corners are synthesised by rotating about the implied
    centre and looked up in a grid whose cell size is the largest match radius.
    A corner matches when it is within the slack that changes the squared side
    length by one tolerance threshold.
    Every k-gon is found once per edge, so the raw tally must divide by ``k``.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    n = poly.n
    if k > n:
        return []
    coords = poly.coords
    d = np.sqrt(pairwise_squared_distances(coords)[np.triu_indices(n, 1)])
    rho = max(_match_radius(float(d.min()), tol), _match_radius(float(d.max()), tol))
    grid: dict[tuple[int, int], list[int]] = {}
    cells = np.floor(coords / rho).astype(np.int64)
    for i, (cx, cy) in enumerate(cells):
        grid.setdefault((int(cx), int(cy)), []).append(i)

    def lookup(x: float, y: float, rho2: float) -> int | None:
        cx, cy = math.floor(x / rho), math.floor(y / rho)
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                for i in grid.get((gx, gy), ()):
                    dx, dy = coords[i, 0] - x, coords[i, 1] - y
                    if dx * dx + dy * dy <= rho2:
                        return i
        return None

    half_cot = 0.5 / math.tan(math.pi / k)
    rots = [(math.cos(2 * math.pi * m / k), math.sin(2 * math.pi * m / k)) for m in range(2, k)]
    hits = 0
    found: set[tuple[int, ...]] = set()
    for a in range(n):
        ax, ay = coords[a]
        for b in range(n):
            if a == b:
                continue
            bx, by = coords[b]
            ex, ey = bx - ax, by - ay
            # centre lies to the left of the directed edge a -> b
            ox = ax + 0.5 * ex - half_cot * ey
            oy = ay + 0.5 * ey + half_cot * ex
            rx, ry = ax - ox, ay - oy
            slack = _match_radius(math.hypot(ex, ey), tol)
            members = [a, b]
            for c, s in rots:
                idx = lookup(ox + c * rx - s * ry, oy + s * rx + c * ry, slack * slack)
                if idx is None or idx in members:
                    break
                members.append(idx)
            else:
                hits += 1
                found.add(tuple(sorted(members)))
    if hits % k or hits // k != len(found):
        raise ToleranceError(
            f"regular {k}-gon tally {hits} is inconsistent with {len(found)} distinct k-gons; "
            "tolerance too loose or too tight"
        )
    return sorted(found)


def count_regular_kgons(poly: ConvexPolygon, k: int, tol: ToleranceContext = DEFAULT_TOL) -> int:
    return len(find_regular_kgons(poly, k, tol))
