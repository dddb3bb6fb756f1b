import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from aderdg.cli import main, read_converge_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def schema():
    text = resources.files("aderdg").joinpath("schema/converge.schema.json").read_text()
    return json.loads(text)


def test_solve_csv_layout(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "dahlquist", "--degree", "2", "--steps", "10",
                       "--subnodes", "50", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "u_L_0", "u_IL_0", "exact_u_0", "eps_L", "eps_IL"]
    # a t0 row, then 50 sub-node rows for each of the 10 cells
    assert len(rows) == 1 + 1 + 10 * 50
    first = dict(zip(rows[0], rows[1]))
    assert float(first["t"]) == 0.0 and float(first["eps_IL"]) == 0.0
    assert float(rows[-1][0]) == 5.0


def test_solve_is_byte_identical(capsys):
    argv = ("solve", "--problem", "pendulum", "--degree", "3", "--steps", "4", "--subnodes", "7")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_solve_json_matches_csv(capsys):
    argv = ["solve", "--problem", "harmonic", "--degree", "1", "--steps", "3", "--subnodes", "2"]
    _, out_csv, _ = run(capsys, *argv)
    _, out_json, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out_json)
    rows = list(csv.reader(io.StringIO(out_csv)))
    assert doc["columns"] == rows[0]
    assert doc["rows"] == [[float(x) for x in r] for r in rows[1:]]


def test_solve_dae_columns(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "dae_index1", "--degree", "1", "--steps", "2",
                       "--subnodes", "1")
    assert code == 0
    assert out.splitlines()[0] == "t,u_L_0,v_L_0,u_IL_0,exact_u_0,exact_v_0,eps_L,eps_IL"


def test_unknown_problem_is_usage_error(capsys):
    code, out, err = run(capsys, "solve", "--problem", "none", "--degree", "1", "--steps", "2")
    assert code == 2 and out == ""
    for name in ("dahlquist", "lin_exp", "harmonic", "pendulum", "bratu", "dae_index1"):
        assert name in err


@pytest.mark.parametrize("argv", [
    ["solve", "--problem", "dahlquist", "--degree", "-1", "--steps", "2"],
    ["solve", "--problem", "dahlquist", "--degree", "1", "--steps", "0"],
    ["solve", "--problem", "dahlquist", "--degree", "1", "--steps", "2", "--subnodes", "0"],
    ["converge", "--problem", "dahlquist", "--degrees", "1,x"],
    ["tables", "--degree", "99"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_numerical_failure_exit_1(capsys):
    # Picard diverges for the steep Bratu solution on one huge cell
    code, out, err = run(capsys, "solve", "--problem", "bratu", "--degree", "0", "--steps", "1",
                         "--method", "picard")
    assert code == 1 and out == ""
    assert "cell 0" in err


def test_converge_json_schema_and_orders(capsys, schema):
    code, out, _ = run(capsys, "converge", "--problem", "harmonic", "--degrees", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    rep = doc["reports"][0]
    assert rep["grids"] == [10, 12, 14, 16, 18, 20, 22, 24]
    assert rep["orders"]["e_n_f"] == pytest.approx(4.91, abs=0.3)
    assert rep["theory"] == {"n": 5, "l": 3, "imp": 4}


def test_converge_summary_dahlquist(capsys):
    code, out, _ = run(capsys, "converge", "--problem", "dahlquist", "--degrees", "1,2,3")
    assert code == 0
    rows_block, summary_block = out.split("\n\n")
    assert len(rows_block.splitlines()) == 1 + 3 * 8
    summary = list(csv.DictReader(io.StringIO(summary_block)))
    for row, ref in zip(summary, (2.93, 4.95, 6.97)):
        assert float(row["p_n_f"]) == pytest.approx(ref, abs=0.25)


def test_converge_csv_round_trips_to_json(capsys, schema):
    argv = ["converge", "--problem", "bratu", "--degrees", "1,2", "--grids", "10,14,20",
            "--subnodes", "10"]
    _, out_csv, _ = run(capsys, *argv)
    _, out_json, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out_json)
    rebuilt = read_converge_csv(out_csv, problem_name="bratu", subnodes=10)
    jsonschema.validate(rebuilt, schema)
    assert rebuilt == doc


def test_tables_degree_zero_and_one(capsys):
    _, out, _ = run(capsys, "tables", "--degree", "0")
    doc = json.loads(out)
    assert doc["nodes"] == [0.5] and doc["weights"] == [1.0] and doc["A"] == [[1.0]]
    _, out, _ = run(capsys, "tables", "--degree", "1")
    assert json.loads(out)["weights"] == [0.5, 0.5]


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    names = [r["name"] for r in csv.DictReader(io.StringIO(out))]
    assert code == 0 and names == ["dahlquist", "lin_exp", "harmonic", "pendulum", "bratu", "dae_index1"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "tables.json"
    assert run(capsys, "tables", "--degree", "2", "--output", str(target))[0] == 0
    assert json.loads(target.read_text(encoding="utf-8"))["degree"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "aderdg", "list", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)) == 6
