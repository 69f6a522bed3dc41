"""CLI surface: commands, formats, exit codes, determinism, round trips."""

import csv
import io
import json

import pytest

from toricarr.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_points_f4_json(capsys):
    code, out, _ = run_cli(capsys, "points", "--type", "F4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["type"] == "F4"
    assert doc["rank"] == 4
    assert doc["command"] == "points"
    assert doc["results"]["total"] == "72"
    orbits = doc["results"]["factors"][0]["orbits"]
    assert len(orbits) == 5
    assert sorted(int(o["orbit_size"]) for o in orbits) == [1, 3, 12, 24, 32]


def test_points_product(capsys):
    code, out, _ = run_cli(capsys, "points", "--type", "A3xA1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["total"] == "8"
    assert [f["factor"] for f in doc["results"]["factors"]] == ["A1", "A3"]


def test_poincare_a1_text(capsys):
    code, out, _ = run_cli(capsys, "poincare", "--type", "A1")
    assert code == 0
    assert "3q + 1" in out
    assert "routes agree: True" in out


def test_poincare_route_flag(capsys):
    code, out, _ = run_cli(capsys, "poincare", "--type", "B2", "--route", "closed", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["polynomial"]["display"] == "15q^2 + 8q + 1"


def test_layers_command(capsys):
    code, out, _ = run_cli(capsys, "layers", "--type", "F4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["by_dimension"] == ["72", "204", "140", "24", "1"]


def test_euler_command(capsys):
    code, out, _ = run_cli(capsys, "euler", "--type", "D4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["closed_form"] == "192"
    assert doc["results"]["point_sum"] == "192"
    assert doc["results"]["poincare_at_minus_one"] == "192"


def test_identity_command(capsys):
    code, out, _ = run_cli(capsys, "identity", "--type", "E8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["factors"][0]["holds"] is True


def test_euler_beyond_enumeration_flags_missing_poincare(capsys):
    code, out, _ = run_cli(capsys, "euler", "--type", "E7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["closed_form"] == str(-2903040)
    assert doc["results"]["poincare_at_minus_one"] is None


def test_bounds_must_be_positive(capsys):
    code, _, err = run_cli(capsys, "points", "--type", "A1", "--brute-rank", "0")
    assert code == 1 and "positive" in err


def test_census_csv(capsys):
    code, out, _ = run_cli(capsys, "census", "--type", "B2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0].keys() == {
        "dim", "theta_type", "theta_orbit_size", "n_theta", "phi_c_type", "count",
    }
    total_points = sum(
        int(r["theta_orbit_size"]) * int(r["count"]) for r in rows if r["dim"] == "0"
    )
    assert total_points == 4


def test_census_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "census", "--type", "F4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    by_dim = {}
    for rec in doc["results"]["records"]:
        by_dim.setdefault(rec["dim"], 0)
        by_dim[rec["dim"]] += int(rec["theta_orbit_size"]) * int(rec["layers_per_theta"])
    code, out, _ = run_cli(capsys, "layers", "--type", "F4", "--format", "json")
    counts = [int(x) for x in json.loads(out)["results"]["by_dimension"]]
    assert [by_dim[d] for d in range(5)] == counts


def test_poset_dot(capsys):
    code, out, _ = run_cli(capsys, "poset", "--type", "A1", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph layers {")
    assert out.count("->") == 2


def test_verify_g2(capsys):
    code, out, _ = run_cli(capsys, "verify", "--type", "G2")
    assert code == 0
    assert "mismatch" not in out
    assert out.count("ok") >= 6


def test_verify_skips_out_of_capability(capsys):
    code, out, _ = run_cli(capsys, "verify", "--type", "D4", "--poset-rank", "3")
    assert code == 0
    assert "poset_grading: skipped" in out


def test_exit_codes(capsys):
    code, _, err = run_cli(capsys, "points", "--type", "E9")
    assert code == 1 and "E9" in err
    code, _, err = run_cli(capsys, "census", "--type", "E7")
    assert code == 2 and "capability" in err.lower() or "exceeds" in err
    code, _, err = run_cli(capsys, "poincare", "--type", "A1", "--format", "dot")
    assert code == 1
    code, _, err = run_cli(capsys, "nonsense", "--type", "A1")
    assert code == 1


def test_byte_determinism(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "census", "--type", "F4", "--format", "json")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "poset", "--type", "B2", "--format", "dot")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "f4.json"
    code, out, _ = run_cli(capsys, "points", "--type", "F4", "--format", "json", "--out", str(target))
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text())
    assert doc["results"]["total"] == "72"
