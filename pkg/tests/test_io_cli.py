import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GOLDEN
from wassmodel import QuadraticNumber, ValidationError, hardy_weinberg, wasserstein
from wassmodel.cli import main
from wassmodel.exact import exact_from_json, exact_to_json
from wassmodel.io import parse_problem, parse_result_distance, problem_to_json

F = Fraction
Qn = QuadraticNumber
PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
HW = str(PROBLEMS / "hardy_weinberg_discrete3.json")
HW_PARAM = str(PROBLEMS / "hardy_weinberg_parametric.json")
FIG = str(PROBLEMS / "independence_hamming.json")
CURVE = str(PROBLEMS / "elliptic_curve_discrete3.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# -- distance --------------------------------------------------------------------

def test_distance_examples(capsys):
    doc = run_json(capsys, "distance", "discrete:3", "--mu", "1/3,1/3,1/3", "--nu", "1/3,1/3,1/3")
    assert doc["distance"]["text"] == "0"
    doc = run_json(capsys, "distance", "discrete:3", "--mu", "1/2,1/7,5/14", "--nu", "1/2,5/14,1/7")
    assert doc["distance"]["text"] == "3/14"
    assert exact_from_json(doc["distance"]["exact"]) == F(3, 14)
    doc = run_json(capsys, "distance", "hamming_2bit", "--mu", "1,0,0,0", "--nu", "0,0,0,1")
    assert doc["distance"]["text"] == "2"
    assert doc["plan"] == [[4, 1, "1"]]


def test_distance_plan_is_feasible(capsys):
    doc = run_json(capsys, "distance", "discrete:3", "--mu", "1/2,1/7,5/14", "--nu", "1/2,5/14,1/7")
    mu = [F(1, 2), F(1, 7), F(5, 14)]
    nu = [F(1, 2), F(5, 14), F(1, 7)]
    col = [F(0)] * 3
    row = [F(0)] * 3
    for i, j, v in doc["plan"]:
        row[i - 1] += F(v)
        col[j - 1] += F(v)
    assert col == mu and row == nu


# -- triangulate -----------------------------------------------------------------

def test_triangulate_formats(capsys, tmp_path):
    _, out, _ = run(capsys, "triangulate", "discrete:3", "--format", "ideal")
    assert out == (GOLDEN / "discrete3_ideal.txt").read_text(encoding="utf-8")
    _, out, _ = run(capsys, "triangulate", "discrete:4", "--format", "cells")
    assert len(out.splitlines()) == 14
    metric = tmp_path / "d.json"
    metric.write_text(json.dumps({"n": 3, "d": [["0", "3/2", "5"], ["3/2", "0", "7/3"], ["5", "7/3", "0"]]}))
    _, out, _ = run(capsys, "triangulate", str(metric), "--format", "trees")
    assert len(out.splitlines()) == 6
    doc = run_json(capsys, "triangulate", "hamming_2bit", "--format", "json")
    assert len(doc["simplices"]) == 20 and doc["perturbed"] is True


# -- model-distance --------------------------------------------------------------

@pytest.mark.parametrize("path", [HW, HW_PARAM])
def test_model_distance_headline(capsys, path):
    doc = run_json(capsys, "model-distance", path)
    assert doc["distance"]["text"] == "-8/7 + 1·√2"
    assert abs(doc["distance"]["float"] - 0.2713564195) < 1e-10
    assert parse_result_distance(doc) == Qn(F(-8, 7), 1, 2)
    assert doc["cell_ids"] == [3, 4]
    assert len(doc["cells"]) == doc["triangulation_meta"]["simplices"] == 6
    assert doc["cells"][4]["status"] == "infeasible" and doc["cells"][4]["minimum"] is None


def test_model_distance_two_minimizers(capsys):
    doc = run_json(capsys, "model-distance", FIG)
    a, b = doc["theta_star"]
    assert [exact_from_json(x) for x in a] == [exact_from_json(x) for x in reversed(b)]
    assert parse_result_distance(doc) == Qn(-1, F(2, 5), 10)


def test_model_distance_on_model(capsys, tmp_path):
    doc = json.loads(Path(HW).read_text())
    doc["mu"] = ["1/4", "1/2", "1/4"]
    path = tmp_path / "on_model.json"
    path.write_text(json.dumps(doc))
    out = run_json(capsys, "model-distance", str(path))
    assert out["distance"]["text"] == "0"


def test_model_distance_numeric_and_table(capsys):
    doc = run_json(capsys, "model-distance", HW, "--engine", "numeric")
    assert doc["distance"]["exact"] is None
    assert abs(doc["distance"]["float"] - 0.2713564195) < 1e-9
    code, out, _ = run(capsys, "model-distance", HW, "--format", "table")
    assert code == 0
    assert "null set" in out and "-8/7 + 1·√2 *" in out


def test_model_distance_implicit_curve(capsys):
    doc = run_json(capsys, "model-distance", CURVE)
    assert doc["distance"]["exact"] is None and doc["heuristic"] is True
    nu = doc["nu_star"][0]
    assert abs(sum(nu) - 1) < 1e-12
    assert abs(nu[0] ** 3 + nu[1] ** 3 + nu[2] ** 3 - 4 * nu[0] * nu[1] * nu[2]) < 1e-10


def test_output_flag(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["model-distance", HW, "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["cell_ids"] == [3, 4]


# -- heatmap ---------------------------------------------------------------------

def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_heatmap_two_parameters(capsys):
    code, out, _ = run(capsys, "heatmap", FIG, "--grid", "50")
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 2500
    lowest = min(F(r["value_exact"]) for r in rows)
    assert Qn._coerce(Qn(-1, F(2, 5), 10)) <= lowest


def test_heatmap_one_parameter(capsys):
    _, out, _ = run(capsys, "heatmap", HW, "--grid", "101")
    rows = _rows(out)
    assert len(rows) == 101
    assert rows[0]["p_exact"] == "0" and rows[0]["value_exact"] == "9/14"
    p = F(rows[37]["p_exact"])
    assert F(rows[37]["value_exact"]) == wasserstein(
        parse_problem(json.loads(Path(HW).read_text())).d, (F(1, 2), F(1, 7), F(5, 14)), hardy_weinberg()((p,)))[0]


def test_heatmap_single_point(capsys):
    _, out, _ = run(capsys, "heatmap", FIG, "--grid", "1")
    rows = _rows(out)
    assert len(rows) == 1 and rows[0]["p_exact"] == rows[0]["q_exact"] == "1/2"


# -- exit codes ------------------------------------------------------------------

def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "distance", "discrete:3", "--mu", "1/2,1/2,1/2", "--nu", "1,0,0")[0] == 2
    assert run(capsys, "distance", "discrete:3", "--mu", "a,b,c", "--nu", "1,0,0")[0] == 2
    assert run(capsys, "model-distance", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"n\": 3,\n  oops\n}")
    code, _, err = run(capsys, "model-distance", str(bad))
    assert code == 2 and "line 3" in err
    assert run(capsys, "triangulate", "discrete:9")[0] == 3
    assert run(capsys, "heatmap", CURVE)[0] == 3
    empty = tmp_path / "empty_curve.json"
    doc = json.loads(Path(CURVE).read_text())
    doc["model"]["f"] = [["1", [2, 0, 0]], ["1", [0, 2, 0]], ["1", [0, 0, 2]], ["1", [0, 0, 0]]]
    empty.write_text(json.dumps(doc))
    assert run(capsys, "model-distance", str(empty))[0] == 4


def test_validation_messages_name_fields():
    doc = json.loads(Path(HW_PARAM).read_text())
    doc["model"]["coordinates"][0][0][0] = "x/7"
    with pytest.raises(ValidationError, match=r"model.coordinates\[0\]\[0\]\[0\]"):
        parse_problem(doc)
    doc = json.loads(Path(HW).read_text())
    doc["d"][1][2] = "2"
    with pytest.raises(ValidationError):
        parse_problem(doc)


# -- round trip and determinism --------------------------------------------------

@pytest.mark.parametrize("path", [HW, HW_PARAM, FIG, CURVE])
def test_problem_round_trip(path):
    p = parse_problem(json.loads(Path(path).read_text()))
    again = parse_problem(json.loads(json.dumps(problem_to_json(p))))
    assert again.d == p.d and again.mu == p.mu and again.engine == p.engine
    assert problem_to_json(again) == problem_to_json(p)


rats = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


@given(rats, rats, st.integers(2, 30))
def test_exact_number_round_trip(a, b, c):
    x = Qn(a, b, c)
    y = exact_from_json(json.loads(json.dumps(exact_to_json(x))))
    assert Qn._coerce(y) == x


def test_result_round_trip(capsys):
    doc = run_json(capsys, "model-distance", FIG)
    for row in doc["cells"]:
        if row["minimum"] is not None:
            exact_from_json(row["minimum"]["value"])
    again = json.loads(json.dumps(doc))
    assert parse_result_distance(again) == parse_result_distance(doc)


@pytest.mark.parametrize("argv", [
    ["model-distance", FIG],
    ["triangulate", "hamming_2bit", "--format", "json"],
    ["heatmap", HW, "--grid", "11"],
])
def test_byte_identical_across_processes(argv):
    outs = []
    for seed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        res = subprocess.run([sys.executable, "-m", "wassmodel.cli", *argv], capture_output=True, env=env, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1] and outs[0]
