import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from convexiso import cli
from convexiso.bounds import verify_report
from convexiso.constructions import centered_fan, fan_unit_construction
from convexiso.counting import count_isosceles
from convexiso.formats import read_polygon, write_polygon

SVG = "{http://www.w3.org/2000/svg}"


def run(*argv):
    return cli.main([str(a) for a in argv])


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CEL_SEED", raising=False)
    return tmp_path


def construct(kind, *extra):
    out = f"{kind}.json"
    assert run("construct", kind, *extra, "--out", out) == 0
    return out


def census(path, capsys, *extra):
    capsys.readouterr()
    assert run("count", path, *extra) == 0
    return json.loads(capsys.readouterr().out)


def test_construct_prints_size_and_perimeter(work, capsys):
    construct("near-segment", "--n", 6, "--eps", 1e-6, "--mode", "upper")
    out = capsys.readouterr().out
    assert "6 vertices" in out and "perimeter 1" in out
    poly, meta = read_polygon("near-segment.json")
    assert poly.perimeter() == pytest.approx(1.0) and meta["mode"] == "upper"


def test_construct_kgon_packing(work):
    poly, meta = read_polygon(construct("kgon-packing", "--n", 10, "--k", 4, "--seed", 3))
    assert poly.n == 10 and meta["seed"] == 3


def test_construct_usage_errors(work, capsys):
    assert run("construct", "kgon-packing", "--n", 10) == 1
    assert run("construct", "near-segment", "--n", 6) == 1
    assert run("construct", "fan-unit", "--n", 2) == 1
    assert run("construct", "hexagram", "--n", 6) == 1
    assert "error" in capsys.readouterr().err


def test_count_examples(work, capsys):
    doc = census(construct("fan-unit", "--n", 7), capsys)
    assert doc["schema_version"] == 1 and doc["kind"] == "census"
    assert doc["triangles"]["unit_isosceles"] == 17
    assert doc["unit_distances"]["total"] == 10
    assert doc["diagonal_sums"]["u"][0] == pytest.approx(doc["diagonal_sums"]["perimeter"])

    (work / "sq.json").write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    assert census("sq.json", capsys)["triangles"]["distinct_isosceles"] == 4
    assert census(construct("regular", "--n", 12), capsys, "--k", 4)["regular_kgons"]["count"] == 3


def test_count_rejects_bad_files(work, capsys):
    (work / "bad.json").write_text(json.dumps({"vertices": [[0, 0], [1, 0], [0.5, 0.1], [1, 1]]}))
    assert run("count", "bad.json") == 1
    assert "vertex 2" in capsys.readouterr().err
    assert run("count", "missing.json") == 1
    assert run("count", "bad.json", "--rel-tol", 0) == 1


def test_file_round_trip_keeps_census(work):
    path = construct("random-convex", "--n", 17, "--seed", 4)
    poly, _ = read_polygon(path)
    write_polygon("again.json", poly)
    assert count_isosceles(read_polygon("again.json")[0]) == count_isosceles(poly)


def test_verify_exit_codes(work, capsys):
    assert run("verify", construct("centered-fan", "--n", 8), "--out", "v.json") == 0
    doc = json.loads((work / "v.json").read_text())
    statuses = {c["name"]: c["status"] for c in doc["checks"]}
    assert statuses["isosceles_noncrossing_upper"] == "holds"
    assert run("verify", construct("random-convex", "--n", 30, "--seed", 7), "--out", "r.json") == 0
    assert run("verify") == 1


def test_verify_violation_persists_counterexample(work, monkeypatch, capsys):
    def rigged(poly, tol, unit=1.0, polygon_id="p"):
        rep = verify_report(poly, tol, unit=unit, polygon_id=polygon_id)
        rep.check("isosceles_upper").status = "violated"
        return rep

    monkeypatch.setattr(cli, "verify_report", rigged)
    path = construct("regular", "--n", 7)
    assert run("verify", path, "--out", "v.json", "--counterexample-dir", "cx") == 2
    files = list((work / "cx").glob("counterexample_*.json"))
    assert len(files) == 1
    poly, _ = read_polygon(files[0])
    assert poly == read_polygon(path)[0]


def test_verify_quick_suite(work):
    assert run("verify", "--suite", "quick", "--out", "suite.json") == 0
    doc = json.loads((work / "suite.json").read_text())
    assert [c["number"] for c in doc["criteria"]] == list(range(1, 11))


def _sweep(capsys, *args):
    capsys.readouterr()
    assert run("sweep", *args) == 0
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


def test_sweep_tables(work, capsys):
    rows = _sweep(capsys, "fan-unit", "--n-min", 4, "--n-max", 20)
    assert len(rows) == 17 and all(r["discrepancy"] == "0" for r in rows)
    assert any(r["ceil_discrepancy"] != "0" for r in rows)
    rows = _sweep(capsys, "centered-fan", "--n-min", 4, "--n-max", 20, "--step", 2)
    assert all(4 * int(r["measured"]) == 3 * int(r["n"]) ** 2 - 10 * int(r["n"]) + 8 for r in rows)
    rows = _sweep(capsys, "kgon-packing", "--k", 5, "--n-min", 5, "--n-max", 25, "--jobs", 2)
    assert len(rows) == 21 and all(int(r["measured"]) == int(r["n"]) // 5 for r in rows)


def test_sweep_parallel_matches_serial(work, capsys):
    a = _sweep(capsys, "regular", "--n-min", 3, "--n-max", 15)
    b = _sweep(capsys, "regular", "--n-min", 3, "--n-max", 15, "--jobs", 3)
    assert a == b


def test_sweep_rejects_bad_range(work):
    assert run("sweep", "regular", "--n-min", 9, "--n-max", 4) == 1


def _svg(path):
    return ET.parse(path).getroot()


def test_plot_overlays(work):
    assert run("plot", construct("centered-fan", "--n", 8), "--out", "cf.svg") == 0
    root = _svg(work / "cf.svg")
    assert root.tag == SVG + "svg"
    assert len([e for e in root.iter(SVG + "circle") if e.get("class") == "centroid-circle"]) == 1
    assert run("plot", construct("kgon-packing", "--n", 10, "--k", 4), "--k", 4, "--out", "kp.svg") == 0
    squares = [e for e in _svg(work / "kp.svg").iter(SVG + "polygon") if "kgon" in (e.get("class") or "")]
    assert len(squares) == 2


def test_plot_unit_edges(work):
    assert run("plot", construct("fan-unit", "--n", 7), "--unit", 1, "--out", "f.svg") == 0
    groups = [g for g in _svg(work / "f.svg").iter(SVG + "g") if g.get("class") == "unit-edges"]
    assert len(groups) == 1 and len(list(groups[0])) == 10


def test_search_zero_steps_reports_seed_census(work, capsys):
    assert run("search", "--n", 12, "--objective", "isosceles_distinct", "--steps", 0,
               "--init", "centered-fan", "--out", "best.json") == 0
    report = json.loads((work / "best.report.json").read_text())
    assert report["verified_score"] == 80 == count_isosceles(centered_fan(12)).distinct_isosceles
    assert read_polygon("best.json")[0] == centered_fan(12)


def test_search_equilateral_from_fan(work):
    assert run("search", "--n", 10, "--objective", "equilateral", "--init", "fan-unit", "--steps", 500,
               "--out", "eq.json", "--report", "eq_report.json") == 0
    assert json.loads((work / "eq_report.json").read_text())["verified_score"] >= 6
    assert fan_unit_construction(10).n == 10


def test_search_is_deterministic(work):
    args = ["search", "--n", 9, "--steps", 300, "--seed", 5]
    assert run(*args, "--out", "a.json") == 0 and run(*args, "--out", "b.json") == 0
    assert (work / "a.json").read_bytes() == (work / "b.json").read_bytes()


def test_env_seed_with_flag_precedence(work, monkeypatch):
    monkeypatch.setenv("CEL_SEED", "5")
    construct("random-convex", "--n", 8)
    env = (work / "random-convex.json").read_bytes()
    assert run("construct", "random-convex", "--n", 8, "--seed", 5, "--out", "flag5.json") == 0
    assert run("construct", "random-convex", "--n", 8, "--seed", 6, "--out", "flag6.json") == 0
    assert env == (work / "flag5.json").read_bytes() != (work / "flag6.json").read_bytes()
    monkeypatch.setenv("CEL_SEED", "five")
    assert run("construct", "random-convex", "--n", 8) == 1


def test_search_usage_errors(work):
    assert run("search", "--n", 8, "--tau-obj", 1e-12) == 1
    write_polygon("seed.json", centered_fan(9))
    assert run("search", "--n", 8, "--seed-polygon", "seed.json") == 1


def test_module_entry_point(work):
    proc = subprocess.run([sys.executable, "-m", "convexiso", "construct", "regular", "--n", "5", "-o", "r.json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "5 vertices" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "convexiso"], capture_output=True, text=True)
    assert proc.returncode == 1
