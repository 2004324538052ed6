"""Reflection-positivity engine: compression, verdicts, witnesses, reports."""

import json

import numpy as np
import pytest

from rplab import (
    Axis,
    DriftFreeField,
    FreeField,
    Grid,
    LatticeFreeField,
    PowerCovariance,
    covariance_matrix,
    rp_check,
)
from rplab.errors import GridMismatch
from rplab.rp_check import (
    RPReport,
    block_stats,
    compress,
    json_bytes,
    reflection_defect,
    symmetry_defect,
)


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

def test_compress_indexes_the_expected_entries():
    g = Grid.line(4, 1.0)
    m = np.arange(16, dtype=float).reshape(4, 4)
    # reflection is [3, 2, 1, 0]; positive half is [2, 3]
    first, pos = compress(m, g, 0, "reflected-first")
    assert np.array_equal(pos, [2, 3])
    assert np.array_equal(first, [[6.0, 7.0], [2.0, 3.0]])
    second, _ = compress(m, g, 0, "reflected-second")
    assert np.array_equal(second, [[9.0, 8.0], [13.0, 12.0]])


def test_compress_orderings_are_transposes_for_symmetric_matrices():
    g = Grid.of(Axis("circle", 8, 0.5), Axis("circle", 6, 0.5))
    m = covariance_matrix(g, LatticeFreeField(1.0))
    for axis in (0, 1):
        a, _ = compress(m, g, axis, "reflected-first")
        b, _ = compress(m, g, axis, "reflected-second")
        assert np.max(np.abs(b - a.T)) < 1e-15


def test_compress_validates_inputs():
    g = Grid.line(4, 1.0)
    with pytest.raises(GridMismatch):
        compress(np.zeros((3, 3)), g)
    with pytest.raises(ValueError):
        compress(np.zeros((4, 4)), g, 0, "sideways")


def test_block_stats_on_a_known_hermitian_matrix():
    herm, min_eig, norm, vec = block_stats(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert herm == 0.0
    assert np.isclose(norm, 3.0)
    assert np.isclose(min_eig, 1.0 / 3.0)
    assert np.allclose(np.abs(vec), np.sqrt(0.5))


def test_block_stats_of_the_zero_block_is_neutral():
    herm, min_eig, norm, _ = block_stats(np.zeros((3, 3)))
    assert (herm, min_eig, norm) == (0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

def test_free_field_passes_every_condition():
    g = Grid.line(16, 0.25)
    m = covariance_matrix(g, FreeField(1.0))
    for condition in ("time", "alt", "doubly"):
        report = rp_check(m, g, condition=condition)
        assert report.passed
        assert report.herm_defect <= 1e-12
        assert report.min_eig >= -1e-12
        assert report.condition == f"{condition}(axis=0)"
        assert report.dimension == 8


def test_squared_covariance_fails_with_a_negative_eigenvalue():
    g = Grid.line(64, 0.25)
    m = covariance_matrix(g, PowerCovariance(1.0, 2))
    report = rp_check(m, g)
    assert not report.passed
    assert report.min_eig < -1e-3


def test_non_hermitian_block_fails_on_the_hermiticity_figure():
    g = Grid.line(4, 1.0)
    m = np.arange(16, dtype=float).reshape(4, 4)
    report = rp_check(m, g)
    assert not report.passed
    assert report.herm_defect > 0.1


def test_doubly_reports_the_worst_figures_of_both_orderings():
    g = Grid.line(8, 0.5)
    m = covariance_matrix(g, FreeField(1.0))
    time_report = rp_check(m, g, condition="time")
    alt_report = rp_check(m, g, condition="alt")
    doubly = rp_check(m, g, condition="doubly")
    assert doubly.herm_defect >= max(time_report.herm_defect, alt_report.herm_defect) - 1e-18
    assert doubly.min_eig <= min(time_report.min_eig, alt_report.min_eig) + 1e-18


def test_unknown_condition_is_rejected():
    g = Grid.line(4, 1.0)
    with pytest.raises(ValueError):
        rp_check(np.zeros((4, 4)), g, condition="sideways")


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def test_no_witness_is_written_on_pass(tmp_path):
    g = Grid.line(8, 0.5)
    m = covariance_matrix(g, FreeField(1.0))
    path = tmp_path / "witness.json"
    report = rp_check(m, g, witness_path=str(path))
    assert report.passed
    assert report.witness_file is None
    assert not path.exists()


def test_witness_quadratic_form_is_negative_and_recomputable(tmp_path):
    g = Grid.line(64, 0.25)
    m = covariance_matrix(g, PowerCovariance(1.0, 2))
    path = tmp_path / "witness.json"
    report = rp_check(m, g, witness_path=str(path))
    assert not report.passed
    assert report.witness_file == str(path)
    payload = json.loads(path.read_bytes())
    assert payload["condition"] == "time(axis=0)"
    assert payload["shape"] == [64]
    f = np.array(payload["vector_re"]) + 1j * np.array(payload["vector_im"])
    # the embedded function lives on the positive half only
    pos = set(g.positive_half(0).tolist())
    assert all(int(i) in pos for i in np.nonzero(f)[0])
    # recompute the reflection form from scratch
    refl = g.reflection(0)
    form = g.vol * np.vdot(f, m[refl] @ f)
    assert np.isclose(form.real, payload["quadratic_form_re"], rtol=0, atol=1e-12)
    assert form.real < 0


# ---------------------------------------------------------------------------
# reports and determinism
# ---------------------------------------------------------------------------

def test_report_json_is_byte_deterministic():
    g = Grid.line(16, 0.25)
    blobs = []
    for _ in range(2):
        m = covariance_matrix(g, FreeField(1.0))
        blobs.append(rp_check(m, g, condition="doubly").to_json())
    assert blobs[0] == blobs[1]
    decoded = json.loads(blobs[0])
    assert set(decoded) == {
        "condition", "dimension", "herm_defect", "min_eig", "tol", "verdict",
    }


def test_json_bytes_sorts_keys_and_ends_with_newline():
    data = json_bytes({"b": 1, "a": 2})
    assert data.endswith(b"\n")
    assert data.index(b'"a"') < data.index(b'"b"')


def test_report_passed_property_tracks_the_verdict():
    r = RPReport("time(axis=0)", 4, 0.0, 0.0, 1e-10, "Pass")
    assert r.passed
    assert not RPReport("time(axis=0)", 4, 0.0, -1.0, 1e-10, "Fail").passed


# ---------------------------------------------------------------------------
# structure diagnostics
# ---------------------------------------------------------------------------

def test_symmetry_defect_measures_asymmetry():
    assert symmetry_defect(np.array([[1.0, 2.0], [2.0, 1.0]])) == 0.0
    assert np.isclose(symmetry_defect(np.array([[1.0, 2.0], [1.0, 1.0]])), 0.5)
    assert symmetry_defect(np.zeros((3, 3))) == 0.0


def test_reflection_defect_vanishes_for_assembled_covariances():
    g = Grid.of(Axis("circle", 8, 0.5), Axis("circle", 8, 0.5))
    m = covariance_matrix(g, DriftFreeField(1.0, 0.3))
    for axis in (0, 1):
        assert reflection_defect(m, g, axis) < 1e-13
