"""Command-line interface: exit codes, report bytes, witnesses, CSV."""

import csv
import json

import numpy as np
import pytest

from rplab import Grid, PowerCovariance, covariance_matrix
from rplab.cli import main

GRID_MIXED = """
[grid]
axes = [ { kind = "line", n = 64, spacing = 0.25 },
         { kind = "circle", n = 8, spacing = 0.5 } ]
"""

GRID_TORUS = """
[grid]
axes = [ { kind = "circle", n = 12, spacing = 0.5 },
         { kind = "circle", n = 12, spacing = 0.5 } ]
"""


def write_config(tmp_path, text, name="config.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(tmp_path, argv):
    """Run one CLI invocation with the report routed to a file; return
    (exit code, parsed report, raw bytes)."""
    out = tmp_path / f"report_{abs(hash(tuple(argv)))}.json"
    code = main(argv + ["--out", str(out)])
    if out.exists():
        raw = out.read_bytes()
        return code, json.loads(raw), raw
    return code, None, b""


# ---------------------------------------------------------------------------
# check-rp
# ---------------------------------------------------------------------------

def test_check_rp_passes_for_the_free_field(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = write_config(tmp_path, GRID_MIXED + """
[multiplier]
family = "free_field"
mass = 1.0

[check]
condition = "doubly"
axis = 0
""")
    code, payload, _ = run(tmp_path, ["check-rp", "--config", cfg])
    assert code == 0
    assert payload["report"]["verdict"] == "Pass"
    assert payload["report"]["condition"] == "doubly(axis=0)"
    assert payload["multiplier"] == "free_field"
    assert "witness_file" not in payload["report"]


def test_check_rp_reports_are_byte_identical_across_runs(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = write_config(tmp_path, GRID_MIXED + """
[multiplier]
family = "free_field"
mass = 1.0
""")
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["check-rp", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["check-rp", "--config", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_check_rp_failure_writes_a_recomputable_witness(tmp_path):
    cfg = write_config(tmp_path, """
[grid]
axes = [ { kind = "line", n = 64, spacing = 0.25 } ]

[multiplier]
family = "power"
mass = 1.0
power = 2
""")
    witness = tmp_path / "w.json"
    code, payload, _ = run(
        tmp_path, ["check-rp", "--config", cfg, "--witness-out", str(witness)]
    )
    assert code == 1
    assert payload["report"]["verdict"] == "Fail"
    assert payload["report"]["witness_file"] == str(witness)
    stored = json.loads(witness.read_bytes())
    g = Grid.line(64, 0.25)
    m = covariance_matrix(g, PowerCovariance(1.0, 2))
    f = np.array(stored["vector_re"]) + 1j * np.array(stored["vector_im"])
    form = g.vol * np.vdot(f, m[g.reflection(0)] @ f)
    assert form.real < 0
    assert np.isclose(form.real, stored["quadratic_form_re"], atol=1e-12)


def test_condition_flag_overrides_the_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = write_config(tmp_path, GRID_MIXED + """
[multiplier]
family = "free_field"
mass = 1.0

[check]
condition = "time"
""")
    code, payload, _ = run(
        tmp_path, ["check-rp", "--config", cfg, "--condition", "alt"]
    )
    assert code == 0
    assert payload["report"]["condition"] == "alt(axis=0)"


# ---------------------------------------------------------------------------
# charged-check
# ---------------------------------------------------------------------------

def test_charged_check_passes_and_blocks_agree(tmp_path):
    cfg = write_config(tmp_path, GRID_TORUS + """
[multiplier]
family = "lattice_free_field"
mass = 1.0
""")
    code, payload, _ = run(tmp_path, ["charged-check", "--config", cfg])
    assert code == 0
    assert payload["doubled"]["verdict"] == "Pass"
    assert payload["blocks_agree_with_doubled"] is True


def test_charged_check_fails_consistently_on_a_broken_reflection(tmp_path):
    cfg = write_config(tmp_path, GRID_TORUS + """
[multiplier]
family = "drift_free_field"
mass = 1.0
drift = 0.3

[check]
axis = 1
""")
    code, payload, _ = run(tmp_path, ["charged-check", "--config", cfg])
    assert code == 1
    assert payload["doubled"]["verdict"] == "Fail"
    assert payload["phi_block"]["verdict"] == "Fail"
    assert payload["blocks_agree_with_doubled"] is True


# ---------------------------------------------------------------------------
# schwinger
# ---------------------------------------------------------------------------

def test_schwinger_moments_are_permutation_stable(tmp_path):
    cfg = write_config(tmp_path, """
[grid]
axes = [ { kind = "circle", n = 8, spacing = 0.5 } ]

[multiplier]
family = "lattice_free_field"
mass = 1.0

[schwinger]
orders = [2, 4, 6]
tuples = 3
seed = 7
""")
    code, payload, _ = run(tmp_path, ["schwinger", "--config", cfg])
    assert code == 0
    assert payload["all_ok"] is True
    assert len(payload["records"]) == 9
    for rec in payload["records"]:
        assert rec["odd_moment"] == 0.0
        assert rec["permutation_drift"] <= 1e-12


# ---------------------------------------------------------------------------
# quantize
# ---------------------------------------------------------------------------

def test_quantize_emits_a_csv_spectrum(tmp_path):
    cfg = write_config(tmp_path, """
[grid]
axes = [ { kind = "line", n = 64, spacing = 0.1 },
         { kind = "circle", n = 8, spacing = 0.5 } ]

[multiplier]
family = "lattice_free_field"
mass = 1.0
""")
    csv_path = tmp_path / "modes.csv"
    code, payload, _ = run(
        tmp_path, ["quantize", "--config", cfg, "--csv", str(csv_path)]
    )
    assert code == 0
    assert payload["result"]["contractive"] is True
    assert payload["result"]["semigroup_ok"] is True
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["kbar", "quotient_dim", "min_h", "dispersion_ref", "rel_error"]
    assert len(rows) == 1 + 8
    for row in rows[1:]:
        assert int(row[1]) == 1
        assert float(row[4]) < 0.05


def test_quantize_rejects_a_periodized_time_axis(tmp_path, capsys):
    cfg = write_config(tmp_path, GRID_TORUS + """
[multiplier]
family = "lattice_free_field"
mass = 1.0
""")
    code, payload, _ = run(tmp_path, ["quantize", "--config", cfg])
    assert code == 2
    assert payload is None
    assert "GridMismatch" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# compactify
# ---------------------------------------------------------------------------

def test_compactify_preserves_the_verdict(tmp_path):
    cfg = write_config(tmp_path, """
[grid]
axes = [ { kind = "line", n = 128, spacing = 0.25 } ]

[multiplier]
family = "free_field"
mass = 1.0

[compactify]
axis = 0
new_extent = 8.0
""")
    code, payload, _ = run(tmp_path, ["compactify", "--config", cfg])
    assert code == 0
    assert payload["before"]["verdict"] == "Pass"
    assert payload["after"]["verdict"] == "Pass"
    assert payload["edge_ratio"] < 1e-8
    assert payload["grid_after"]["axes"][0]["kind"] == "circle"
    assert payload["grid_after"]["axes"][0]["n"] == 32


# ---------------------------------------------------------------------------
# yngvason
# ---------------------------------------------------------------------------

def test_yngvason_diagnostics_pass_for_a_complex_multiplier(tmp_path):
    cfg = write_config(tmp_path, GRID_TORUS + """
[multiplier]
family = "drift_free_field"
mass = 1.0
drift = 0.3
""")
    code, payload, _ = run(tmp_path, ["yngvason", "--config", cfg])
    assert code == 0
    assert payload["all_ok"] is True
    assert payload["normalization"]["z"] >= 1.0
    assert payload["split_identity_defect"] <= 1e-10
    assert payload["time_zero"]["ratio"] <= 1.0
    assert payload["bounds"]["M3"] > 0.01


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------

def test_unknown_family_exits_with_the_error_code(tmp_path, capsys):
    cfg = write_config(tmp_path, """
[grid]
axes = [ { kind = "circle", n = 8, spacing = 0.5 } ]

[multiplier]
family = "unheard_of"
mass = 1.0
""")
    code, payload, _ = run(tmp_path, ["yngvason", "--config", cfg])
    assert code == 2
    assert payload is None
    assert "error" in capsys.readouterr().err
