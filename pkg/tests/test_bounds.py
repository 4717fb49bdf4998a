import json
import math
from fractions import Fraction

import pytest

from convexiso.bounds import BoundReport, evaluate_bounds, persist_counterexample, verify_report
from convexiso.constructions import centered_fan, near_segment, random_convex, regular_polygon
from convexiso.formats import polygon_from_doc
from convexiso.geom import ToleranceContext


def test_table_n7():
    bt = evaluate_bounds(7)
    assert bt.apex_no_centroid_upper == 21
    assert bt.distinct_distance_lower == 3
    assert bt.distance_sum_upper == 6


def test_table_n8():
    bt = evaluate_bounds(8)
    assert bt.isosceles_construction == 30
    assert bt.isosceles_conjectured == 48
    assert bt.isosceles_noncrossing_upper == Fraction(243, 4)


def test_table_kgon():
    assert evaluate_bounds(10, k=4).regular_kgon_upper == 2
    assert evaluate_bounds(10).regular_kgon_upper is None


def test_table_misc_values():
    bt = evaluate_bounds(16)
    assert bt.unit_distance_upper == pytest.approx(16 * 4 + 64)
    assert bt.isosceles_upper == Fraction(11 * 256 - 18 * 16, 12)
    assert bt.equilateral_upper == 14
    assert bt.unit_equilateral_upper == 10
    assert bt.vertex_distinct_lower == math.ceil((13 * 16 - 6) / 36)
    assert bt.unit_isosceles_construction_ceil - bt.unit_isosceles_construction in (0, 1)


@pytest.mark.parametrize("field", ["apex_no_centroid_upper", "isosceles_construction", "isosceles_upper",
                                   "equilateral_upper", "unit_distance_upper", "distinct_distance_lower",
                                   "distance_sum_lower", "distance_sum_upper", "unit_isosceles_construction"])
def test_table_monotone(field):
    vals = [getattr(evaluate_bounds(n), field) for n in range(4, 60)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_table_rejects_bad_input():
    with pytest.raises(ValueError):
        evaluate_bounds(2)
    with pytest.raises(ValueError):
        evaluate_bounds(8, k=3)


def test_square_all_hold(square):
    rep = verify_report(square)
    assert rep.ok
    assert rep.check("apex_no_centroid_upper").status == "holds"
    assert {c.status for c in rep.checks} <= {"holds", "not-exceeded", "informational", "not-applicable"}


def test_centered_fan_noncrossing_applies():
    rep = verify_report(centered_fan(8))
    c = rep.check("isosceles_noncrossing_upper")
    assert c.status == "holds" and c.measured == 30 and c.bound == pytest.approx(243 / 4)
    assert rep.check("apex_no_centroid_upper").status == "not-applicable"


def test_random_30_gon():
    rep = verify_report(random_convex(30, seed=7))
    assert rep.ok
    c = rep.check("diagonal_sums_increasing")
    assert c.status == "holds" and c.measured == 0
    assert rep.check("diagonal_sums_subadditive").status == "holds"
    assert rep.check("distance_sum_lower").status == "holds"
    assert rep.check("distance_sum_upper").status == "holds"


def test_regular_polygon_attains_apex_bound():
    rep = verify_report(regular_polygon(7))
    c = rep.check("isosceles_noncrossing_upper[apex]")
    assert rep.ok
    assert rep.check("apex_no_centroid_upper").status in ("holds", "not-applicable")
    assert c.status in ("holds", "not-applicable")


def test_report_round_trip(tmp_path):
    rep = verify_report(centered_fan(9), polygon_id="cf9")
    again = BoundReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert again == rep


def test_near_segment_tolerance_floor_flag():
    poly = near_segment(7, 1e-6, "upper")
    assert "floor dominates" in verify_report(poly).check("tolerance_floor").note
    rep = verify_report(poly, ToleranceContext(rel=1e-9, abs=0.0))
    assert rep.ok
    assert "relative threshold" in rep.check("tolerance_floor").note


def test_persist_counterexample(tmp_path, square):
    rep = verify_report(square, polygon_id="sq")
    rep.checks[0].status = "violated"
    path = persist_counterexample(rep, tmp_path / "cx")
    doc = json.loads(path.read_text())
    assert polygon_from_doc(doc) == square
    assert doc["meta"]["violations"][0]["name"] == rep.checks[0].name
