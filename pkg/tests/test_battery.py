import json

from convexiso.battery import Battery, random_suite_params, run_suite


def test_random_suite_covers_sizes():
    params = random_suite_params(500, 50)
    assert len({seed for seed, _ in params}) == 500
    assert {n for _, n in params} == set(range(4, 51))


def test_quick_suite_passes():
    lines = []
    results = run_suite("quick", echo=lines.append)
    assert [r.number for r in results] == list(range(1, 11))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]
    assert all(line.startswith("[PASS]") for line in lines)


def test_upper_bound_violation_fails_and_persists(tmp_path):
    b = Battery("quick", counterexample_dir=tmp_path)
    rep = next(iter(b.reports().values()))
    rep.check("isosceles_upper").status = "violated"
    res = b.c9_upper_bounds()
    assert not res.passed
    files = list(tmp_path.glob("counterexample_*.json"))
    assert len(files) == 1 and json.loads(files[0].read_text())["vertices"] == rep.vertices
