import math

import numpy as np
import pytest

from convexiso.constructions import (
    DEFAULT_FAN_ARC,
    ConstructionSpec,
    centered_fan,
    fan_unit_construction,
    kgon_packing,
    near_segment,
    random_convex,
    regular_polygon,
)
from convexiso.counting import (
    count_isosceles,
    count_regular_kgons,
    diagonal_sums,
    distinct_distance_stats,
    find_centroid_circles,
    repeated_distances,
)
from convexiso.geom import ConvexityError, ToleranceContext, is_strictly_convex
from convexiso.oracles import brute_force_census, regular_kgons_by_subsets

NO_FLOOR = ToleranceContext(rel=1e-9, abs=0.0)


def fan_formula(n):
    return (n * n - 3 * n + 2) // 2 + (n - 1) // 3


@pytest.mark.parametrize("n", range(4, 16))
def test_fan_unit_count(n):
    poly = fan_unit_construction(n)
    c = count_isosceles(poly, unit=1.0)
    assert c.unit_isosceles == fan_formula(n)
    assert c.unit_isosceles == brute_force_census(poly.vertices, unit=1.0)["unit_isosceles"]
    assert c.unit_equilateral == 2 * (n - 1) // 3


def test_fan_unit_rejects_small():
    with pytest.raises(ValueError):
        fan_unit_construction(3)


@pytest.mark.parametrize("n", range(4, 16))
def test_centered_fan_count(n):
    poly = centered_fan(n)
    got = count_isosceles(poly).distinct_isosceles
    assert got == brute_force_census(poly.vertices)["distinct_isosceles"]
    assert 4 * got == 3 * n * n - 11 * n + 8 + 2 * (n // 2)


def test_centered_fan_examples():
    assert count_isosceles(centered_fan(8, 0.9 * math.pi)).distinct_isosceles == 30
    assert count_isosceles(centered_fan(9, 0.9 * math.pi)).distinct_isosceles == 40
    circles, pairs = find_centroid_circles(centered_fan(8, 0.9 * math.pi))
    assert len(circles) == 1 and len(circles[0].member_indices) == 7 and not pairs


def test_centered_fan_rejects_half_turn():
    with pytest.raises(ValueError):
        centered_fan(8, math.pi)
    assert 0 < DEFAULT_FAN_ARC < math.pi


@pytest.mark.parametrize("n,apex", [(5, 10), (6, 12)])
def test_regular_apex_pairs(n, apex):
    assert count_isosceles(regular_polygon(n)).apex_pairs == apex == n * ((n - 1) // 2)


def test_regular_square_is_one_square():
    assert count_regular_kgons(regular_polygon(4), 4) == 1
    assert regular_polygon(7, circumradius=2.0).diameter() <= 4.0


@pytest.mark.parametrize("n,k,count", [(10, 4, 2), (12, 6, 2), (7, 5, 1), (11, 4, 2)])
def test_kgon_packing(n, k, count):
    poly = kgon_packing(n, k, seed=n)
    assert poly.n == n
    assert count_regular_kgons(poly, k) == count == regular_kgons_by_subsets(poly.vertices, k)


def test_kgon_packing_deterministic_and_validated():
    assert kgon_packing(13, 4, seed=5) == kgon_packing(13, 4, seed=5)
    with pytest.raises(ValueError):
        kgon_packing(3, 4)
    with pytest.raises(ValueError):
        kgon_packing(8, 3)


@pytest.mark.parametrize(
    "n,mode,target", [(6, "lower", 2.5), (6, "upper", 4.5), (5, "upper", 3.0), (9, "lower", 4.0)]
)
def test_near_segment_extremes(n, mode, target):
    poly = near_segment(n, 1e-6, mode)
    assert poly.n == n
    assert poly.perimeter() == pytest.approx(1.0, abs=1e-12)
    assert diagonal_sums(poly).s_n == pytest.approx(target, abs=1e-3)


def test_near_segment_rejects_bad_input():
    with pytest.raises(ValueError):
        near_segment(6, 0.0)
    with pytest.raises(ValueError):
        near_segment(6, 1e-6, "sideways")


def test_near_segment_census_needs_no_floor():
    # distances inside the clusters are ~1e-12 squared; an absolute floor would merge them
    poly = near_segment(8, 1e-6, "upper")
    c = count_isosceles(poly, NO_FLOOR)
    assert c.equilateral <= poly.n - 2


def test_random_convex_contract():
    a, b = random_convex(8, seed=1), random_convex(8, seed=1)
    assert a == b and is_strictly_convex(a.vertices)
    assert distinct_distance_stats(a).global_distinct >= 4
    assert random_convex(8, seed=2) != a
    assert np.isfinite(a.coords).all()


@pytest.mark.parametrize("n", [3, 50, 200])
def test_random_convex_sizes(n):
    assert random_convex(n, seed=9).n == n


def test_construction_spec():
    spec = ConstructionSpec("kgon-packing", 10, k=4, seed=3)
    assert spec.kind == "kgon_packing"
    assert count_regular_kgons(spec.build(), 4) == 2
    assert ConstructionSpec("near-segment-upper", 6, eps=1e-6).build().n == 6
    for bad in (dict(kind="hexagram", n=6), dict(kind="fan_unit", n=2), dict(kind="kgon_packing", n=9),
                dict(kind="near_segment_lower", n=5), dict(kind="centered_fan", n=6, arc=4.0)):
        with pytest.raises(ValueError):
            ConstructionSpec(**bad)


def test_fan_repeats_distances():
    # four spokes and chords all share the unit class
    rep = repeated_distances(fan_unit_construction(10))
    assert rep.max_multiplicity >= 9


def test_invalid_polygons_raise_convexity_error():
    with pytest.raises(ConvexityError):
        ConstructionSpec("regular", 3).build().scaled(0.0)
