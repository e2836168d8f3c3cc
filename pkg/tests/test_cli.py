"""Command line interface: subcommands, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from pirlab.cli import main

from conftest import FIXTURES


def run_cli(capsys, *args):
    try:
        rc = main(list(args))
    except SystemExit as exc:  # argparse uses SystemExit(2) for bad usage
        rc = exc.code
    out, err = capsys.readouterr()
    return rc, out, err


# ============================================================
# bounds
# ============================================================

def test_bounds_csv(capsys):
    rc, out, err = run_cli(capsys, "bounds", "--max", "4")
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert lines[0] == "n,upper,lower,upper_coeff,lower_coeff"
    assert lines[1] == "3,0.50000,0.50000,1.50000,1.50000"
    assert lines[2] == "4,0.35294,0.35000,1.41176,1.40000"
    assert out.splitlines()[0].startswith("#")
    assert "pirlab/bounds/v1" in err


def test_bounds_markdown(capsys):
    rc, out, _ = run_cli(capsys, "bounds", "--max", "5", "--format", "markdown")
    assert rc == 0
    assert "|" in out
    assert "0.27907" in out


def test_bounds_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("PIRLAB_PRECISION", "3")
    rc, out, _ = run_cli(capsys, "bounds", "--max", "3")
    assert rc == 0
    data = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert data[1] == "3,0.500,0.500,1.500,1.500"


def test_bounds_bad_range(capsys):
    rc, _, err = run_cli(capsys, "bounds", "--max", "2")
    assert rc == 2
    assert err


# ============================================================
# sequences
# ============================================================

def test_sequences_json(capsys):
    rc, out, err = run_cli(capsys, "sequences", "--n", "4")
    assert rc == 0
    doc = json.loads(out)
    assert doc["n"] == 4
    assert doc["x"] == ["1", "5/2", "9/2"]
    assert doc["y"] == [None, "1/2", "0"]
    assert doc["z"] == ["1", "2", None]
    assert doc["M"] == 4
    assert doc["L"] == 84
    assert doc["rate"] == "7/20"
    assert doc["meta"]["tool"] == "pirlab"
    assert "pirlab/sequences/v1" in err


# ============================================================
# build / extract / transform
# ============================================================

def test_build_writes_scheme(capsys, tmp_path):
    out_file = tmp_path / "k4.json"
    rc, out, _ = run_cli(capsys, "build", "--n", "4", "--out", str(out_file))
    assert rc == 0
    assert out == ""
    doc = json.loads(out_file.read_text())
    assert doc["L"] == 84
    assert doc["theta"] == 0
    assert len(doc["patterns"]) == 84


def test_build_theta_edge_form_matches_file_id(capsys):
    rc1, out1, _ = run_cli(capsys, "build", "--n", "3", "--theta", "1,3")
    rc2, out2, _ = run_cli(capsys, "build", "--n", "3", "--theta", "1")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_build_over_cap(capsys):
    rc, _, err = run_cli(capsys, "build", "--n", "9")
    assert rc == 2
    assert err


def test_build_deterministic_bytes(capsys):
    rc1, out1, _ = run_cli(capsys, "build", "--n", "4")
    rc2, out2, _ = run_cli(capsys, "build", "--n", "4")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_extract_on_fixture(capsys):
    rc, out, err = run_cli(capsys, "extract", "--scheme",
                           str(FIXTURES / "k3_scheme.json"))
    assert rc == 0
    doc = json.loads(out)
    assert len(doc["patterns"]) == 6
    assert doc["side_info"] == []
    assert doc["srp"] == {"1": 3, "2": 3, "ok": True}
    assert "pirlab/extract/v1" in err


def test_extract_rejects_dependent_scheme(capsys):
    rc, _, err = run_cli(capsys, "extract", "--scheme",
                         str(FIXTURES / "two_per_server.json"))
    assert rc == 3
    assert err


def test_transform_star(capsys):
    rc, out, _ = run_cli(capsys, "transform", "--scheme",
                         str(FIXTURES / "star4_scheme.json"))
    assert rc == 0
    doc = json.loads(out)
    assert doc["rate"] == "5/12"
    assert len(doc["rows"]) == 5
    assert doc["rows"][0]["p"] == "1/5"
    assert doc["rows"][4]["q"]["1"] is None
    assert doc["rows"][4]["q"]["2"] == [[0, 1]]


def test_transform_infeasible(capsys):
    rc, _, err = run_cli(capsys, "transform", "--scheme",
                         str(FIXTURES / "star_center_heavy.json"))
    assert rc == 3
    assert err


# ============================================================
# general
# ============================================================

def test_general_enumerate(capsys):
    rc, out, _ = run_cli(capsys, "general", "--graph",
                         "edges:1-2,1-3,2-3,1-4", "--enumerate")
    assert rc == 0
    doc = json.loads(out)
    assert doc["rate"] == "8/23"
    assert doc["empty_probabilities"] == {
        "1": "1/8", "2": "1/4", "3": "1/4", "4": "1/2"}


def test_general_sample_deterministic(capsys):
    args = ("general", "--graph", "complete:3", "--theta", "0",
            "--seed", "5", "--q", "257")
    rc1, out1, _ = run_cli(capsys, *args)
    rc2, out2, _ = run_cli(capsys, *args)
    assert rc1 == rc2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["meta"]["seed"] == 5
    assert len(doc["mu"]) == 3
    assert set(doc["queries"]) == {"1", "2", "3"}


def test_general_multigraph_extension(capsys):
    rc, out, _ = run_cli(capsys, "general", "--graph", "complete:3",
                         "--r", "2", "--enumerate")
    assert rc == 0
    assert json.loads(out)["rate"] == "16/45"


def test_general_bad_theta(capsys):
    rc, _, err = run_cli(capsys, "general", "--graph", "edges:1-2",
                         "--theta", "5")
    assert rc == 2
    assert err


# ============================================================
# simulate
# ============================================================

def test_simulate_deterministic_scheme(capsys, tmp_path):
    scheme = tmp_path / "k4.json"
    run_cli(capsys, "build", "--n", "4", "--out", str(scheme))
    rc, out, _ = run_cli(capsys, "simulate", "--scheme", str(scheme),
                         "--seed", "1")
    assert rc == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["rate"] == "7/20"
    assert doc["downloaded_symbols"] == 240


def test_simulate_probabilistic_scheme(capsys, tmp_path):
    prob = tmp_path / "k3_prob.json"
    rc, _, _ = run_cli(capsys, "transform", "--scheme",
                       str(FIXTURES / "k3_scheme.json"), "--out", str(prob))
    assert rc == 0
    rc, out, _ = run_cli(capsys, "simulate", "--scheme", str(prob),
                         "--seed", "2")
    assert rc == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["rate"] == "1/2"


# ============================================================
# audit
# ============================================================

def test_audit_structural(capsys):
    rc, out, _ = run_cli(capsys, "audit", "--family", "k4",
                         "--mode", "structural")
    assert rc == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["mode"] == "structural"


def test_audit_distributional_transform(capsys):
    rc, out, _ = run_cli(capsys, "audit", "--family", "transform:k3",
                         "--mode", "distributional")
    assert rc == 0
    assert json.loads(out)["ok"] is True


def test_audit_statistical_general(capsys):
    rc, out, _ = run_cli(capsys, "audit", "--family",
                         "general:edges:1-2,1-3,2-3,1-4",
                         "--mode", "statistical", "--trials", "2000",
                         "--seed", "7")
    assert rc == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert float(doc["max_deviation"]) < float(doc["epsilon"])


def test_audit_bad_family(capsys):
    rc, _, err = run_cli(capsys, "audit", "--family", "wheel:5",
                         "--mode", "structural")
    assert rc == 2
    assert err


# ============================================================
# process-level smoke test
# ============================================================

def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pirlab", "sequences",
                           "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["L"] == 6


def test_unknown_subcommand(capsys):
    rc, _, _ = run_cli(capsys, "frobnicate")
    assert rc == 2
