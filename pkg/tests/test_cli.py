import json
import subprocess
import sys
from pathlib import Path

import pytest

from galcoh import cli
from galcoh.errors import CrossCheckError

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)["result"]


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc, encoding="utf-8")
    return str(p)


Z2 = {"named": "cyclic", "n": 2}
SPLIT_INERT = {"points": ["a", "b", "c"], "generator_images": [["b", "a", "c"]]}


class TestLocal:
    def test_pgl2_trivial_group(self, capsys, tmp_path):
        r = run_json(capsys, "local", "--input", write(tmp_path, {"lambda": {"catalog": "pgl", "n": 2}}))
        assert r["h1"]["torsion"] == [2] and r["basic_classes"]["pretty"] == "Z/2"

    def test_gl1(self, capsys, tmp_path):
        doc = {"group": {"named": "symmetric", "n": 3}, "lambda": {"catalog": "gl", "n": 1}}
        r = run_json(capsys, "local", "--input", write(tmp_path, doc))
        assert r["h1"]["pretty"] == "0" and r["basic_classes"]["pretty"] == "Z"

    def test_norm_one(self, capsys):
        r = run_json(capsys, "local", "--input", str(SCEN / "norm_one_local.json"))
        assert r["h1"]["torsion"] == [2]

    def test_explicit_root_datum(self, capsys, tmp_path):
        doc = {"group": Z2, "lambda": {"rank": 2, "coroots": [[1, -1], [-1, 1]], "action": [[[0, -1], [-1, 0]]]}}
        r = run_json(capsys, "local", "--input", write(tmp_path, doc))
        assert r["basic_classes"]["pretty"] == "Z/2"


class TestGlobal:
    def test_pgl2(self, capsys, tmp_path):
        doc = {"group": Z2, "places": SPLIT_INERT, "lambda": {"catalog": "pgl", "n": 2}}
        r = run_json(capsys, "global", "--input", write(tmp_path, doc))
        assert r["A"]["pretty"] == "Z/2" and r["A_tors"]["pretty"] == "Z/2"
        assert [l["representative"] for l in r["localizations"]] == ["a", "c"]

    def test_gl1(self, capsys):
        r = run_json(capsys, "global", "--input", str(SCEN / "split_inert_gl1.json"))
        assert r["A"]["pretty"] == "Z" and r["A_tors"]["pretty"] == "0"

    def test_single_place(self, capsys, tmp_path):
        doc = {"group": Z2, "places": {"points": ["p"], "generator_images": [["p"]]},
               "lambda": {"catalog": "pgl", "n": 3}}
        r = run_json(capsys, "global", "--input", write(tmp_path, doc))
        assert r["A"]["pretty"] == "0"


class TestObstruction:
    def _doc(self, locs):
        return {"group": Z2, "places": SPLIT_INERT, "lambda": {"catalog": "pgl", "n": 2}, "locals": locs}

    def test_not_in_image(self, capsys, tmp_path):
        r = run_json(capsys, "obstruction", "--input", write(tmp_path, self._doc({"0": [1], "1": [0]})))
        assert r["obstruction"]["in_image"] is False and r["obstruction"]["obstruction"] == [1]

    def test_in_image_with_certificate(self, capsys):
        r = run_json(capsys, "obstruction", "--input", str(SCEN / "split_inert_pgl2.json"))
        assert r["obstruction"]["in_image"] is True and r["obstruction"]["certificate"] == [1]

    def test_omitted_locals(self, capsys, tmp_path):
        doc = self._doc(None)
        del doc["locals"]
        r = run_json(capsys, "obstruction", "--input", write(tmp_path, doc))
        assert r["obstruction"]["in_image"] is True and r["obstruction"]["certificate"] == [0]

    def test_locals_by_point_label(self, capsys, tmp_path):
        r = run_json(capsys, "obstruction", "--input", write(tmp_path, self._doc({"b": [1]})))
        assert r["obstruction"]["locals"] == [[1], [0]]

    def test_out_of_range_coordinate(self, capsys, tmp_path):
        code, _, err = run(capsys, "obstruction", "--input", write(tmp_path, self._doc({"0": [3]})))
        assert code == cli.EXIT_INPUT and "out of range" in err


class TestTnTate:
    def test_cyclic_triple(self, capsys):
        r = run_json(capsys, "tn", "--input", str(SCEN / "cyclic_triple.json"))
        assert r["report"]["weak_tn"] is True and r["report"]["rigid"] is True
        assert r["report"]["window"] == [-2, 1]

    def test_zero_cocycle(self, capsys, tmp_path):
        z = {"trivial": {"free_rank": 1}}
        doc = {"group": Z2, "triple": {"x": z, "a": z, "alpha": [[[0]]] * 4}}
        r = run_json(capsys, "tn", "--input", write(tmp_path, doc))
        assert r["report"]["weak_tn"] is False

    def test_window_flag(self, capsys):
        r = run_json(capsys, "tn", "--input", str(SCEN / "cyclic_triple.json"), "--window", "0", "0")
        assert {row["degree"] for row in r["report"]["rows"]} == {0}

    def test_tate_z3(self, capsys):
        r = run_json(capsys, "tate", "--input", str(SCEN / "tate_z3.json"))
        assert r["cohomology"] == {"2": {"free_rank": 0, "pretty": "Z/3", "torsion": [3]}}

    def test_tate_window_default(self, capsys, tmp_path):
        doc = {"group": {"named": "cyclic", "n": 4}, "module": {"trivial": {"free_rank": 1}}}
        r = run_json(capsys, "tate", "--input", write(tmp_path, doc))
        assert {k: v["pretty"] for k, v in r["cohomology"].items()} == {
            "-3": "0", "-2": "Z/4", "-1": "0", "0": "Z/4", "1": "0", "2": "Z/4", "3": "0"}

    def test_degree_outside_window(self, capsys, tmp_path):
        doc = {"group": Z2, "module": {"trivial": {"free_rank": 1}}, "degree": 7}
        code, out, err = run(capsys, "tate", "--input", write(tmp_path, doc))
        assert code != 0 and out == "" and err


class TestTower:
    def test_quadratic_reports_finding(self, capsys):
        r = run_json(capsys, "tower", "--input", str(SCEN / "tower_quadratic.json"))
        assert r["relative_degree"] == 2 and r["bijective"] is False
        assert r["pushforward_bijective"] is True
        assert any("not bijective" in f for f in r["findings"])


class TestErrors:
    def test_missing_input(self, capsys):
        code, out, err = run(capsys, "global")
        assert code == cli.EXIT_INPUT and out == ""

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "global", "--input", str(tmp_path / "nope.json"))
        assert code == cli.EXIT_INPUT

    def test_bad_json_reports_line(self, capsys, tmp_path):
        code, _, err = run(capsys, "global", "--input", write(tmp_path, '{\n  "group": ,\n}'))
        assert code == cli.EXIT_INPUT and ":2:" in err

    def test_field_locus(self, capsys, tmp_path):
        doc = {"group": Z2, "places": {"points": ["a", "b"], "generator_images": [["a", "z"]]},
               "lambda": {"catalog": "gl", "n": 1}}
        code, _, err = run(capsys, "global", "--input", write(tmp_path, doc))
        assert code == cli.EXIT_INPUT and "places.generator_images[0]" in err

    def test_lambda_locus(self, capsys, tmp_path):
        doc = {"group": Z2, "places": SPLIT_INERT, "lambda": {"rank": 1, "action": [[[2]]]}}
        code, _, err = run(capsys, "global", "--input", write(tmp_path, doc))
        assert code == cli.EXIT_INPUT and err.startswith("input error: lambda")

    def test_size_guard(self, capsys, tmp_path):
        doc = {"group": {"named": "symmetric", "n": 4}, "lambda": {"catalog": "gl", "n": 1}}
        path = write(tmp_path, doc)
        code, out, err = run(capsys, "local", "--input", path, "--max-group-order", "12")
        assert code == cli.EXIT_SIZE and out == ""
        assert run(capsys, "local", "--input", path)[0] == 0

    def test_reversed_window(self, capsys):
        code, _, _ = run(capsys, "tn", "--input", str(SCEN / "cyclic_triple.json"), "--window", "1", "0")
        assert code == cli.EXIT_INPUT

    def test_cross_check_failure_exit(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise CrossCheckError("forced")

        monkeypatch.setitem(cli.COMMANDS, "global", boom)
        code, out, err = run(capsys, "global", "--input", str(SCEN / "split_inert_gl1.json"))
        assert code == cli.EXIT_INTERNAL and out == "" and "forced" in err


class TestDocument:
    def test_envelope(self, capsys):
        code, out, _ = run(capsys, "global", "--input", str(SCEN / "split_inert_gl1.json"), "--json")
        doc = json.loads(out)
        assert set(doc) == {"tool", "version", "command", "input", "window", "max_group_order", "result"}
        assert doc["command"] == "global" and doc["max_group_order"] == 24

    def test_human_output(self, capsys):
        code, out, _ = run(capsys, "global", "--input", str(SCEN / "split_inert_gl1.json"))
        assert code == 0 and "A: Z" in out.splitlines()

    def test_selftest(self, capsys):
        r = run_json(capsys, "selftest", "--samples", "10", "--seed", "3")
        assert r["smith_checks"] == 10 and r["exactness_checks"] == 10


@pytest.mark.parametrize("cmd,name", [
    ("local", "norm_one_local"), ("global", "split_inert_gl1"), ("obstruction", "split_inert_pgl2"),
    ("tn", "cyclic_triple"), ("tate", "tate_z3"), ("tower", "tower_quadratic"),
])
def test_byte_identical_across_processes(cmd, name):
    argv = [sys.executable, "-m", "galcoh", cmd, "--input", str(SCEN / f"{name}.json"), "--json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
