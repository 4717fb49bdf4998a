"""Planar primitives: points, convexity predicates, distances, value clustering.

Orientation signs are computed with a floating-point filter backed by exact
rational arithmetic, so polygon validation does not depend on any tolerance.
Distance equality, on the other hand, is always a tolerance decision and is
made on squared distances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

# Shewchuk's error bound for the 2x2 orientation determinant.
_ORIENT_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


class ConvexityError(ValueError):
    """Raised when a vertex list is not in strictly convex counterclockwise position.

    ``index`` names the offending vertex when one can be singled out.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ToleranceError(ArithmeticError):
    """A tally that must be exact came out inconsistent under the current tolerance."""


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ToleranceContext:
    """Equality thresholds for squared distances.

    Two squared distances ``a <= b`` are treated as equal when
    ``b - a <= max(abs, rel * b)``.
    """

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (0.0 < self.rel < 1.0):
            raise ValueError(f"rel must lie in (0, 1), got {self.rel}")
        if not self.abs >= 0.0:
            raise ValueError(f"abs must be non-negative, got {self.abs}")

    def threshold(self, magnitude: float) -> float:
        return max(self.abs, self.rel * abs(magnitude))

    def close(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.threshold(max(abs(a), abs(b)))


DEFAULT_TOL = ToleranceContext()


def _exact_cross(p, q, r) -> int:
    px, py = Fraction(p[0]), Fraction(p[1])
    det = (Fraction(q[0]) - px) * (Fraction(r[1]) - py) - (Fraction(q[1]) - py) * (Fraction(r[0]) - px)
    return (det > 0) - (det < 0)


def orientation(p, q, r, tol: ToleranceContext | None = None) -> int:
    """Sign of twice the signed area of triangle ``pqr``.

    +1 for a counterclockwise turn, -1 for clockwise, 0 for collinear. Without
    ``tol`` the sign is exact for the given floating-point inputs. With ``tol``
    the triple is reported collinear when ``|cross| <= tol.abs``.
    """
    acx, acy = p[0] - r[0], p[1] - r[1]
    bcx, bcy = q[0] - r[0], q[1] - r[1]
    left = acx * bcy
    right = acy * bcx
    det = left - right
    if tol is not None and abs(det) <= tol.abs:
        return 0
    if abs(det) > _ORIENT_ERRBOUND * (abs(left) + abs(right)):
        return 1 if det > 0 else -1
    return _exact_cross(p, q, r)


def _check_finite(points: Sequence) -> None:
    for i, p in enumerate(points):
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise ConvexityError(f"vertex {i} has a non-finite coordinate: {tuple(p)}", i)


def convexity_defect(points: Sequence, tol: ToleranceContext | None = None) -> tuple[str, int | None] | None:
    """Return ``(reason, vertex index)`` if ``points`` is not strictly convex, else None.

    Either orientation is accepted; the returned index is the middle vertex of
    the first bad triple, or None when the defect is global (winding).
    """
    n = len(points)
    if n < 3:
        return ("fewer than 3 vertices", None)
    signs = [orientation(points[i - 1], points[i], points[(i + 1) % n], tol) for i in range(n)]
    for i, s in enumerate(signs):
        if s == 0:
            return ("collinear or repeated vertex", i)
    # Cyclically a sign change first appears where signs[i] differs from signs[0].
    for i, s in enumerate(signs):
        if s != signs[0]:
            return ("reflex vertex", i)
    turning = 0.0
    for i in range(n):
        a, b, c = points[i - 1], points[i], points[(i + 1) % n]
        h1 = math.atan2(b[1] - a[1], b[0] - a[0])
        h2 = math.atan2(c[1] - b[1], c[0] - b[0])
        d = (h2 - h1 + math.pi) % (2.0 * math.pi) - math.pi
        turning += d
    if round(abs(turning) / (2.0 * math.pi)) != 1:
        return ("boundary winds more than once", None)
    return None


def is_strictly_convex(points: Sequence, tol: ToleranceContext | None = None) -> bool:
    """True iff consecutive triples share one nonzero orientation and the boundary winds once."""
    return convexity_defect(points, tol) is None


def squared_distance(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def pairwise_squared_distances(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def cluster_values(values: Iterable[float], tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Partition ``values`` into equality classes by a sorted single-link sweep.

    Consecutive sorted values share a class when their gap is at most
    ``max(tol.abs, tol.rel * larger_value)``. Returns the class index of each
    input value; classes are numbered in increasing order of value.
    """
    vals = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float).ravel()
    if vals.size == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(vals, kind="stable")
    s = vals[order]
    gaps = np.diff(s)
    thresh = np.maximum(tol.abs, tol.rel * np.maximum(np.abs(s[1:]), np.abs(s[:-1])))
    breaks = np.concatenate(([0], np.cumsum(gaps > thresh)))
    labels = np.empty(vals.size, dtype=np.int64)
    labels[order] = breaks
    return labels


class ConvexPolygon:
    """Counterclockwise vertex list in strictly convex position.

    Construction validates finiteness, vertex count, distinctness and strict
    convexity and raises ``ConvexityError`` naming the offending vertex.
    """

    def __init__(self, vertices: Iterable):
        pts = tuple(Point2(float(p[0]), float(p[1])) for p in vertices)
        self.vertices: tuple[Point2, ...] = pts
        self._validate()
        self._coords = np.array(pts, dtype=float).reshape(-1, 2)
        self._coords.setflags(write=False)

    def _validate(self) -> None:
        pts = self.vertices
        _check_finite(pts)
        if len(pts) < 3:
            raise ConvexityError(f"a polygon needs at least 3 vertices, got {len(pts)}")
        seen: dict[Point2, int] = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise ConvexityError(f"vertex {i} coincides with vertex {seen[p]}", i)
            seen[p] = i
        defect = convexity_defect(pts)
        if defect is not None:
            reason, idx = defect
            where = f" at vertex {idx}" if idx is not None else ""
            raise ConvexityError(f"not strictly convex: {reason}{where}", idx)
        if orientation(pts[-1], pts[0], pts[1]) < 0:
            raise ConvexityError("vertices are in clockwise order", 0)

    @classmethod
    def from_any_orientation(cls, points: Iterable) -> "ConvexPolygon":
        pts = [tuple(p) for p in points]
        if len(pts) >= 3 and is_strictly_convex(pts) and orientation(pts[-1], pts[0], pts[1]) < 0:
            pts.reverse()
        return cls(pts)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def coords(self) -> np.ndarray:
        """Read-only ``(n, 2)`` array of vertex coordinates."""
        return self._coords

    def perimeter(self) -> float:
        c = self._coords
        return float(np.sum(np.hypot(*(np.roll(c, -1, axis=0) - c).T)))

    def diameter(self) -> float:
        return float(math.sqrt(pairwise_squared_distances(self._coords).max()))

    def scaled(self, factor: float) -> "ConvexPolygon":
        return ConvexPolygon(self._coords * factor)

    def rotated_list(self, shift: int) -> "ConvexPolygon":
        """Same polygon with the vertex list cyclically shifted by ``shift``."""
        return ConvexPolygon(np.roll(self._coords, -shift, axis=0))

    def transformed(self, angle: float, dx: float = 0.0, dy: float = 0.0) -> "ConvexPolygon":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return ConvexPolygon(self._coords @ rot.T + np.array([dx, dy]))

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon(n={self.n})"
