import numpy as np
import pytest

from convexiso.constructions import centered_fan, fan_unit_construction, near_segment, regular_polygon
from convexiso.geom import is_strictly_convex
from convexiso.oracles import brute_force_census
from convexiso.search import SearchConfig, anneal, perturb, run_chains, score


def test_perturb_zero_scale_is_identity(hexagon):
    out, ok = perturb(hexagon, 0.0, np.random.default_rng(0))
    assert ok and out == hexagon


def test_perturb_tiny_scale_accepted(hexagon):
    rng = np.random.default_rng(1)
    for _ in range(20):
        out, ok = perturb(hexagon, 1e-9, rng)
        assert ok and is_strictly_convex(out.vertices)


def test_perturb_large_moves_on_degenerate_seed_mostly_rejected():
    poly = near_segment(6, 1e-6, "upper")
    rng = np.random.default_rng(2)
    rejected = sum(not perturb(poly, 1.0, rng)[1] for _ in range(200))
    assert rejected > 100


def test_perturb_consumes_fixed_draws(hexagon):
    a, b = np.random.default_rng(5), np.random.default_rng(5)
    perturb(hexagon, 0.0, a)
    perturb(hexagon, 10.0, b)
    assert a.random() == b.random()


def test_zero_steps_returns_seed_census():
    seed = centered_fan(12)
    cand = anneal(SearchConfig(n=12, steps=0), seed)
    assert cand.polygon == seed
    assert cand.verified_score == brute_force_census(seed.vertices)["distinct_isosceles"] == 80
    assert cand.accepted == cand.rejected == 0


def test_anneal_never_loses_seed_score():
    seed = centered_fan(10)
    base = brute_force_census(seed.vertices)["distinct_isosceles"]
    cand = anneal(SearchConfig(n=10, steps=400, seed=3), seed)
    assert cand.verified_score >= base
    assert cand.report is not None and not cand.report.violations


def test_equilateral_objective_keeps_fan_seed():
    cand = anneal(SearchConfig(n=10, objective="equilateral", steps=300, seed=1), fan_unit_construction(10))
    assert cand.verified_score >= 6


def test_anneal_deterministic():
    cfg = SearchConfig(n=8, steps=300, seed=11)
    a, b = anneal(cfg, regular_polygon(8)), anneal(cfg, regular_polygon(8))
    assert a.polygon == b.polygon and a.history == b.history and a.verified_census == b.verified_census


def test_progress_records():
    seen = []
    anneal(SearchConfig(n=7, steps=100, progress_every=25), regular_polygon(7), progress=seen.append)
    assert [r["step"] for r in seen[:4]] == [25, 50, 75, 100]


def test_run_chains_parallel_equals_serial():
    cfg = SearchConfig(n=7, steps=150, seed=4)
    serial = run_chains(cfg, regular_polygon(7), chains=3, jobs=1)
    parallel = run_chains(cfg, regular_polygon(7), chains=3, jobs=3)
    assert serial.polygon == parallel.polygon and serial.verified_score == parallel.verified_score


def test_score_strict_never_exceeds_loose():
    poly = centered_fan(9)
    cfg = SearchConfig(n=9)
    assert score(poly, "isosceles_distinct", cfg.strict_tol)[0] <= score(poly, "isosceles_distinct", cfg.loose_tol)[0]


@pytest.mark.parametrize("bad", [dict(objective="area"), dict(tau_obj=1e-12), dict(steps=-1), dict(decay=1.5),
                                 dict(n=2)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SearchConfig(**{"n": 8, **bad})


def test_anneal_rejects_wrong_size():
    with pytest.raises(ValueError):
        anneal(SearchConfig(n=9), regular_polygon(8))
