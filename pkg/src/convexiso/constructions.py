"""Generators for the extremal configurations and for random convex polygons."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import ConvexPolygon, ConvexityError, is_strictly_convex

# 0.9*pi makes a spoke coincide with a chord at n = 29 (ten steps of pi/30
# span pi/3); an arc that is an irrational multiple of pi never does.
DEFAULT_FAN_ARC = 2.8

KINDS = (
    "fan_unit",
    "centered_fan",
    "regular",
    "kgon_packing",
    "near_segment_lower",
    "near_segment_upper",
    "random_convex",
)


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int
    k: int | None = None
    eps: float | None = None
    arc: float | None = None
    seed: int | None = None

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if kind.startswith("near_segment") and not (self.eps is not None and self.eps > 0):
            raise ValueError("near_segment constructions need eps > 0")
        if kind == "kgon_packing" and self.k is None:
            raise ValueError("kgon_packing needs k")
        if self.arc is not None and not (0 < self.arc < math.pi):
            raise ValueError(f"arc must lie in (0, pi), got {self.arc}")

    def build(self) -> ConvexPolygon:
        kind = self.kind
        if kind == "fan_unit":
            return fan_unit_construction(self.n)
        if kind == "centered_fan":
            return centered_fan(self.n, DEFAULT_FAN_ARC if self.arc is None else self.arc)
        if kind == "regular":
            return regular_polygon(self.n)
        if kind == "kgon_packing":
            return kgon_packing(self.n, self.k, 0 if self.seed is None else self.seed)
        if kind == "near_segment_lower":
            return near_segment(self.n, self.eps, "lower")
        if kind == "near_segment_upper":
            return near_segment(self.n, self.eps, "upper")
        return random_convex(self.n, 0 if self.seed is None else self.seed)


def _hub_and_arc(angles: np.ndarray, radius: float = 1.0) -> ConvexPolygon:
    pts = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    return ConvexPolygon(np.vstack([[0.0, 0.0], pts]))


def fan_unit_construction(n: int) -> ConvexPolygon:
    """Hub at the origin plus ``n - 1`` vertices on the unit circle around it.

    With ``k = n // 3`` the arc vertices are spaced ``pi / (3k)`` apart, so every
    spoke and every chord ``v_i v_{i+k}`` has unit length. When ``n % 3 == 2`` the
    uniform layout would span exactly ``pi``; the last vertex is then placed half
    a step past its predecessor, which keeps every unit chord and creates none.
    """
    if n < 4:
        raise ValueError(f"fan_unit_construction needs n >= 4, got {n}")
    k = n // 3
    step = math.pi / (3 * k)
    idx = np.arange(n - 1, dtype=float)
    if n % 3 == 2:
        idx[-1] = idx[-2] + 0.5
    span = idx[-1] * step
    if span >= math.pi:
        raise ConvexityError(f"fan arc {span:.6f} reaches pi for n={n}")
    return _hub_and_arc(math.pi / 2 - span / 2 + idx * step)


def centered_fan(n: int, arc: float = DEFAULT_FAN_ARC, radius: float = 1.0) -> ConvexPolygon:
    """Hub plus ``n - 1`` vertices equally spaced over ``arc`` on a circle around it."""
    if n < 4:
        raise ValueError(f"centered_fan needs n >= 4, got {n}")
    if not (0 < arc < math.pi):
        raise ValueError(f"arc must lie in (0, pi), got {arc}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    angles = math.pi / 2 - arc / 2 + np.arange(n - 1) * (arc / (n - 2))
    return _hub_and_arc(angles, radius)


def regular_polygon(n: int, circumradius: float = 1.0) -> ConvexPolygon:
    if n < 3:
        raise ValueError(f"regular_polygon needs n >= 3, got {n}")
    t = 2 * math.pi * np.arange(n) / n
    return ConvexPolygon(np.column_stack([circumradius * np.cos(t), circumradius * np.sin(t)]))


def kgon_packing(n: int, k: int, seed: int = 0, max_tries: int = 100) -> ConvexPolygon:
    """Regular ``qk``-gon (``q = n // k``) plus ``n % k`` extra vertices on its circumcircle.

    The extra vertices sit at seeded random angles kept away from the lattice
    vertices; a draw that completes any further regular k-gon is redrawn.
    """
    # local import: counting depends on geom only, constructions on both
    from .counting import count_regular_kgons

    if k < 4:
        raise ValueError(f"kgon_packing needs k >= 4, got {k}")
    if n < k:
        raise ValueError(f"kgon_packing needs n >= k, got n={n}, k={k}")
    q, r = divmod(n, k)
    base = 2 * math.pi * np.arange(q * k) / (q * k)
    rng = np.random.default_rng(seed)
    gap = 2 * math.pi / (q * k)
    for _ in range(max_tries):
        extra: list[float] = []
        while len(extra) < r:
            t = float(rng.uniform(0.0, 2 * math.pi))
            taken = np.concatenate([base, extra])
            sep = np.abs((taken - t + math.pi) % (2 * math.pi) - math.pi)
            if sep.min() > 0.05 * gap:
                extra.append(t)
        angles = np.sort(np.concatenate([base, extra]))
        poly = ConvexPolygon(np.column_stack([np.cos(angles), np.sin(angles)]))
        if count_regular_kgons(poly, k) == q:
            return poly
    raise RuntimeError(f"could not place {r} generic extra vertices after {max_tries} draws")


def _arc_cluster(center: tuple[float, float], radius: float, count: int, facing: float) -> np.ndarray:
    """``count`` points on a small circle, spread over +-pi/3 around direction ``facing``."""
    if count == 1:
        t = np.array([facing])
    else:
        t = facing + np.linspace(-math.pi / 3, math.pi / 3, count)
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


def near_segment(n: int, eps: float, mode: str = "lower") -> ConvexPolygon:
    """Unit-perimeter polygon hugging the segment from 0 to 1/2.

    ``lower``: one vertex at the origin, the other ``n - 1`` within ``eps`` of
    ``(1/2, 0)``. ``upper``: ``n // 2`` vertices within ``eps`` of the origin and
    the rest within ``eps`` of ``(1/2, 0)``. Each cluster lies on an outward-facing
    arc of radius ``eps / 2``, which keeps the vertices in strictly convex
    position with orientation determinants of order ``eps**2``.
    """
    if mode not in ("lower", "upper"):
        raise ValueError(f"mode must be 'lower' or 'upper', got {mode!r}")
    if n < 3:
        raise ValueError(f"near_segment needs n >= 3, got {n}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    rho = eps / 2
    left = 1 if mode == "lower" else n // 2
    right = n - left
    if mode == "lower":
        a = np.array([[0.0, 0.0]])
    else:
        a = _arc_cluster((0.0, 0.0), rho, left, math.pi)
    b = _arc_cluster((0.5, 0.0), rho, right, 0.0)
    pts = np.vstack([b, a])
    per = float(np.sum(np.hypot(*(np.roll(pts, -1, axis=0) - pts).T)))
    if abs(per - 1.0) > 0.1:
        raise ValueError(f"eps={eps} too large: perimeter {per:.4f} is not within 10% of 1")
    return ConvexPolygon(pts / per)


def random_convex(n: int, seed: int = 0, max_tries: int = 50) -> ConvexPolygon:
    """Random strictly convex n-gon by Valtr's random-vector-resorting method.

    Sorted random x and y coordinates are split into two monotone chains each,
    the resulting edge vectors are paired at random, sorted by angle and chained
    head to tail. Deterministic for a fixed seed.
    """
    if n < 3:
        raise ValueError(f"random_convex needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        xs = _chain_components(np.sort(rng.random(n)), rng)
        ys = _chain_components(np.sort(rng.random(n)), rng)
        rng.shuffle(ys)
        vecs = np.column_stack([xs, ys])
        vecs = vecs[np.argsort(np.arctan2(vecs[:, 1], vecs[:, 0]), kind="stable")]
        pts = np.cumsum(vecs, axis=0)
        pts -= pts.mean(axis=0)
        if is_strictly_convex(pts):
            try:
                return ConvexPolygon(pts)
            except ConvexityError:
                pass
    raise RuntimeError(f"random_convex failed to produce a strictly convex {n}-gon in {max_tries} tries")


def _chain_components(sorted_vals: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    lo, hi = sorted_vals[0], sorted_vals[-1]
    side = rng.random(len(sorted_vals) - 2) < 0.5
    comps = []
    last_a = last_b = lo
    for v, s in zip(sorted_vals[1:-1], side):
        if s:
            comps.append(v - last_a)
            last_a = v
        else:
            comps.append(last_b - v)
            last_b = v
    comps.append(hi - last_a)
    comps.append(last_b - hi)
    return np.array(comps)
