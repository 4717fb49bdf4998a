"""Simulated annealing over strictly convex n-gons, maximizing a triangle count.

The walk scores polygons at a loose tolerance so near-isosceles triples are
visible, then re-verifies record holders at the strict tolerance. Only
verified counts are reported.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .bounds import BoundReport, verify_report
from .counting import DistanceClasses, TriangleCensus, count_isosceles
from .geom import DEFAULT_TOL, ConvexityError, ConvexPolygon, ToleranceContext

log = logging.getLogger(__name__)

OBJECTIVES = ("isosceles_distinct", "isosceles_apex_pairs", "equilateral", "unit_isosceles")


@dataclass(frozen=True)
class SearchConfig:
    n: int
    objective: str = "isosceles_distinct"
    tau_obj: float = 1e-4
    tau_strict: float = 1e-9
    steps: int = 200_000
    t0: float = 2.0
    decay: float = 0.999
    move_scale: float = 0.05  # fraction of the initial diameter
    move_decay: float = 0.99995
    move_min: float = 1e-7
    polish_steps: int | None = None  # greedy finish; default steps // 10
    unit: float = 1.0
    seed: int = 0
    progress_every: int = 0

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}; choose from {', '.join(OBJECTIVES)}")
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if not self.tau_obj > self.tau_strict > 0:
            raise ValueError("need tau_obj > tau_strict > 0")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not 0 < self.decay < 1 or not 0 < self.move_decay <= 1:
            raise ValueError("decay factors must lie in (0, 1)")
        if self.t0 <= 0 or self.move_scale < 0:
            raise ValueError("t0 must be positive and move_scale non-negative")

    @property
    def loose_tol(self) -> ToleranceContext:
        return ToleranceContext(rel=self.tau_obj, abs=DEFAULT_TOL.abs)

    @property
    def strict_tol(self) -> ToleranceContext:
        return ToleranceContext(rel=self.tau_strict, abs=DEFAULT_TOL.abs)

    @property
    def total_polish(self) -> int:
        return self.steps // 10 if self.polish_steps is None else self.polish_steps


@dataclass
class Candidate:
    polygon: ConvexPolygon
    loose_score: int
    verified_census: TriangleCensus
    verified_score: int
    accepted: int = 0
    rejected: int = 0
    history: list[tuple[int, int]] = field(default_factory=list)  # (step, best loose score)
    report: BoundReport | None = None


def objective_value(census: TriangleCensus, objective: str) -> int:
    if objective == "isosceles_distinct":
        return census.distinct_isosceles
    if objective == "isosceles_apex_pairs":
        return census.apex_pairs
    if objective == "equilateral":
        return census.equilateral
    return census.unit_isosceles


def score(poly: ConvexPolygon, objective: str, tol: ToleranceContext, unit: float = 1.0) -> tuple[int, TriangleCensus]:
    census = count_isosceles(
        poly, tol, unit=unit if objective == "unit_isosceles" else None, classes=DistanceClasses(poly, tol)
    )
    return objective_value(census, objective), census


def perturb(poly: ConvexPolygon, scale: float, rng: np.random.Generator) -> tuple[ConvexPolygon, bool]:
    """Move one random vertex by a random vector of length at most ``scale``.

    Returns ``(polygon, accepted)``; a move that breaks strict convexity is
    rejected and the input polygon is returned unchanged. Exactly three random
    draws are consumed per call regardless of outcome.
    """
    i = int(rng.integers(poly.n))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    r = scale * math.sqrt(rng.random())
    if r == 0.0:
        return poly, True
    coords = poly.coords.copy()
    coords[i, 0] += r * math.cos(theta)
    coords[i, 1] += r * math.sin(theta)
    try:
        return ConvexPolygon(coords), True
    except ConvexityError:
        return poly, False


def anneal(
    config: SearchConfig,
    initial: ConvexPolygon,
    progress: Callable[[dict], None] | None = None,
) -> Candidate:
    """Metropolis walk followed by a greedy polish, deterministic for a fixed seed.

    Every polygon that reaches the best loose score seen so far is re-verified
    at the strict tolerance; the returned candidate is the one with the highest
    verified score among them (the initial polygon included, earliest on ties).
    """
    if not isinstance(initial, ConvexPolygon):
        raise TypeError("initial must be a ConvexPolygon")
    if initial.n != config.n:
        raise ValueError(f"initial polygon has {initial.n} vertices, config expects {config.n}")
    rng = np.random.default_rng(config.seed)
    loose, strict = config.loose_tol, config.strict_tol
    obj, unit = config.objective, config.unit

    cur = initial
    cur_score, _ = score(cur, obj, loose, unit)
    best_loose = cur_score
    v_score, v_census = score(cur, obj, strict, unit)
    best = Candidate(initial, cur_score, v_census, v_score)
    history = [(0, best_loose)]
    accepted = rejected = 0
    base = initial.diameter()
    scale = config.move_scale * base
    min_scale = config.move_min * base
    temp = config.t0
    total = config.steps + (config.total_polish if config.steps else 0)

    for step in range(1, total + 1):
        polishing = step > config.steps
        nxt, ok = perturb(cur, scale, rng)
        u = rng.random()
        if not ok:
            rejected += 1
        else:
            nxt_score, _ = score(nxt, obj, loose, unit)
            delta = nxt_score - cur_score
            if delta >= 0 or (not polishing and u < math.exp(delta / temp)):
                cur, cur_score = nxt, nxt_score
                accepted += 1
                if cur_score >= best_loose:
                    if cur_score > best_loose:
                        best_loose = cur_score
                        history.append((step, best_loose))
                    vs, vc = score(cur, obj, strict, unit)
                    if vs > best.verified_score or (vs == best.verified_score and cur_score > best.loose_score):
                        best = Candidate(cur, cur_score, vc, vs)
        if not polishing:
            temp *= config.decay
            scale = max(min_scale, scale * config.move_decay)
        elif step == config.steps + 1:
            cur, cur_score = best.polygon, best.loose_score
        if progress and config.progress_every and step % config.progress_every == 0:
            progress({"step": step, "temperature": temp, "scale": scale, "current": cur_score,
                      "best_loose": best_loose, "best_verified": best.verified_score})

    best.accepted, best.rejected, best.history = accepted, rejected, history
    best.report = verify_report(best.polygon, strict, unit=unit, polygon_id=f"search_seed{config.seed}")
    if best.report.violations:
        log.warning("candidate violates %s", [c.name for c in best.report.violations])
    return best


def _chain(args: tuple[SearchConfig, ConvexPolygon]) -> Candidate:
    config, initial = args
    return anneal(config, initial)


def run_chains(config: SearchConfig, initial: ConvexPolygon, chains: int = 1, jobs: int = 1) -> Candidate:
    """Independent chains with seeds ``seed, seed + 1, ...``; best verified score wins, lowest seed on ties."""
    configs = [(replace(config, seed=config.seed + i), initial) for i in range(chains)]
    if jobs > 1 and chains > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_chain, configs))
    else:
        results = [_chain(c) for c in configs]
    return max(enumerate(results), key=lambda ir: (ir[1].verified_score, -ir[0]))[1]
