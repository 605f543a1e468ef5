"""Command-line behavior: exit codes, deterministic serialization, dump
round-trips, scenario files and the fault-injection hook."""

import json

import numpy as np
import pytest

from octograv import tables
from octograv.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_algebra_passes(capsys):
    code, out, _ = run(capsys, ["verify-algebra", "--seed", "3"])
    assert code == 0
    assert "PASS" in out
    assert "FAIL" not in out


def test_verify_algebra_json_schema(capsys):
    code, out, _ = run(capsys, ["verify-algebra", "--seed", "3", "--out", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["seed"] == 3
    assert {"name", "max_residual", "tolerance", "ok"} <= set(doc["checks"][0])


def test_corrupt_table_caught(capsys):
    code, out, _ = run(capsys, ["verify-algebra", "--corrupt-table", "eps4", "--out", "json"])
    assert code == 1
    doc = json.loads(out)
    assert doc["pass"] is False
    failed = [c["name"] for c in doc["checks"] if not c["ok"]]
    assert failed
    assert any("eps4" in name for name in failed)
    # the cached pristine tables are untouched
    code2, _, _ = run(capsys, ["verify-algebra"])
    assert code2 == 0


def test_dump_round_trips_every_table(capsys):
    for name in tables.TABLE_NAMES:
        code, out, _ = run(capsys, ["dump-tables", "--table", name, "--out", "json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["table"] == name
        assert doc["index_base"] == tables.INDEX_BASE[name]
        rebuilt = tables.rebuild_from_entries(name, doc["entries"])
        assert np.array_equal(rebuilt, tables.table(name))


def test_dump_text_header(capsys):
    code, out, _ = run(capsys, ["dump-tables", "--table", "psi"])
    assert code == 0
    assert out.splitlines()[0].startswith("# table psi")
    assert len(out.splitlines()) == 1 + 42


def test_lagrangian_json_deterministic(capsys):
    argv = ["lagrangian", "--scenario", "de-sitter", "--form", "dd4",
            "--points", "4", "--seed", "9", "--out", "json"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["form"] == "dd4"
    assert doc["scenario"]["name"] == "de-sitter"
    assert doc["summary"]["evaluated"] == 4
    assert doc["summary"]["skipped"] == 0
    first = doc["points"][0]
    assert set(first["value"]) == {"re", "im"}
    assert doc["summary"]["max_rel_delta"] < 1e-10


def test_lagrangian_csv_columns(capsys):
    code, out, _ = run(capsys, ["lagrangian", "--scenario", "de-sitter", "--form",
                                "vierbein4", "--points", "2", "--seed", "1", "--out", "csv"])
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header[:4] == ["p0", "p1", "p2", "p3"]
    assert "value_re" in header and "value_im" in header and "orientation_sign" in header
    assert len(out.splitlines()) == 3


def test_lagrangian_chi8(capsys):
    code, out, _ = run(capsys, ["lagrangian", "--scenario", "random-smooth-8d", "--form",
                                "chi8", "--points", "2", "--seed", "4", "--out", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["max_im_magnitude"] < 1e-10


def test_dimension_mismatch_is_usage_error(capsys):
    code, _, err = run(capsys, ["lagrangian", "--scenario", "de-sitter",
                                "--form", "chi8", "--points", "1"])
    assert code == 2
    assert "8D" in err


def test_unknown_scenario_is_usage_error(capsys):
    code, _, err = run(capsys, ["lagrangian", "--scenario", "nope", "--form", "dd4"])
    assert code == 2
    assert "nope" in err


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["lagrangian", "--scenario", "de-sitter", "--form", "bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_scenario_file_with_overrides(tmp_path, capsys):
    config = {"name": "de-sitter", "params": {"H": 0.2}, "points": 3, "seed": 5, "kappa": 2.0}
    path = tmp_path / "scen.json"
    path.write_text(json.dumps(config))
    code, out, _ = run(capsys, ["lagrangian", "--scenario", str(path), "--form",
                                "dd4", "--out", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["scenario"]["params"]["H"] == 0.2
    assert doc["scenario"]["kappa"] == 2.0
    assert doc["scenario"]["seed"] == 5
    assert doc["summary"]["evaluated"] == 3
    # a flag beats the file
    code, out, _ = run(capsys, ["lagrangian", "--scenario", str(path), "--form",
                                "dd4", "--kappa", "5.0", "--out", "json"])
    assert json.loads(out)["scenario"]["kappa"] == 5.0


def test_scenario_file_explicit_points_and_degeneracy(tmp_path, capsys):
    config = {
        "name": "schwarzschild",
        "points": [[0.0, 2.0, 1.2, 0.5], [0.0, 6.0, 1.2, 0.5]],
    }
    path = tmp_path / "horizon.json"
    path.write_text(json.dumps(config))
    code, out, err = run(capsys, ["lagrangian", "--scenario", str(path), "--form",
                                  "eh4", "--out", "json"])
    assert code == 3
    assert "skipped" in err
    doc = json.loads(out)
    assert doc["summary"]["evaluated"] == 1
    assert doc["summary"]["skipped"] == 1
    assert doc["skipped"][0]["index"] == 0


def test_malformed_scenario_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, ["lagrangian", "--scenario", str(path), "--form", "dd4"])
    assert code == 2
    assert "scenario" in err


def test_env_seed_fallback(monkeypatch, capsys):
    monkeypatch.setenv("OCTOGRAV_SEED", "11")
    _, with_env, _ = run(capsys, ["lagrangian", "--scenario", "de-sitter", "--form",
                                  "dd4", "--points", "2", "--out", "json"])
    monkeypatch.delenv("OCTOGRAV_SEED")
    _, with_flag, _ = run(capsys, ["lagrangian", "--scenario", "de-sitter", "--form",
                                   "dd4", "--points", "2", "--seed", "11", "--out", "json"])
    assert with_env == with_flag


def test_env_seed_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("OCTOGRAV_SEED", "abc")
    code, _, err = run(capsys, ["lagrangian", "--scenario", "de-sitter", "--form",
                                "dd4", "--points", "1"])
    assert code == 2
    assert "OCTOGRAV_SEED" in err


def test_crosscheck_passes_on_catalog_scenarios(capsys):
    for scen in ("flat-4d", "de-sitter", "schwarzschild"):
        code, out, _ = run(capsys, ["crosscheck", "--scenario", scen,
                                    "--points", "4", "--seed", "2", "--out", "json"])
        assert code == 0, scen
        doc = json.loads(out)
        assert doc["summary"]["pass"] is True
        assert doc["summary"]["max_pair_delta"] <= doc["tolerance"]


def test_crosscheck_rejects_8d(capsys):
    code, _, err = run(capsys, ["crosscheck", "--scenario", "flat-8d"])
    assert code == 2
    assert "4D" in err


def test_crosscheck_fd_uses_loose_tolerance(capsys):
    code, out, _ = run(capsys, ["crosscheck", "--scenario", "de-sitter", "--provider",
                                "fd", "--points", "2", "--seed", "6", "--out", "json"])
    assert code == 0
    assert json.loads(out)["tolerance"] == 1e-4


def test_crosscheck_text_reports_worst_point(capsys):
    code, out, _ = run(capsys, ["crosscheck", "--scenario", "de-sitter",
                                "--points", "3", "--seed", "8"])
    assert code == 0
    assert "PASS" in out
    assert "at point" in out
