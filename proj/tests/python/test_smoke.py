"""End-to-end checks of the python module and the command-line tool."""

import json
import os
import subprocess

import numpy as np
import pytest

import pptkit

CLI = os.environ.get("PPTKIT_CLI")
needs_cli = pytest.mark.skipif(not CLI, reason="PPTKIT_CLI not set")


# ── library surface ──────────────────────────────────────────────────────────


def test_state_is_a_density_matrix():
    rho = pptkit.state(3, 0.5, [0.5, 0.5])
    assert rho.shape == (9, 9)
    assert abs(np.trace(rho).real - 1.0) < 1e-12
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-13
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_partial_transpose_matches_numpy():
    rho = pptkit.state(3, 0.5, [0.25, 0.75])
    pt = pptkit.partial_transpose(rho, 3, 3)
    ref = rho.reshape(3, 3, 3, 3).transpose(0, 3, 2, 1).reshape(9, 9)
    assert np.max(np.abs(pt - ref)) < 1e-15
    # the whole family stays PPT
    assert np.linalg.eigvalsh(pt).min() > -1e-10


def test_normalization_matches_trace():
    # the raw block sum has trace 1/N, so the constructed state needs no rescale
    for lam in ([0.0, 0.0], [0.3, 0.8], [1.0, 1.0]):
        rho = pptkit.state(3, 0.4, lam)
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert pptkit.normalization(3, 0.4, lam) > 0.0


def test_ppt_never_fires_on_the_family():
    v = pptkit.check_ppt(3, 0.7, [0.3, 0.6])
    assert v["outcome"] == "NotDetected"
    assert v["evidence"] > -1e-10


def test_realignment_detects_corners_only():
    corner = pptkit.check_realignment(3, 0.8, [0.0, 0.0])
    assert corner["outcome"] == "Entangled"
    assert corner["evidence"] > 1.0
    centre = pptkit.check_realignment(3, 0.8, [0.5, 0.5])
    assert centre["outcome"] == "NotDetected"


def test_realign_oracle_max_entangled():
    d = 3
    phi = np.zeros(d * d, dtype=complex)
    phi[:: d + 1] = 1.0 / np.sqrt(d)
    proj = np.outer(phi, phi.conj())
    assert abs(pptkit.trace_norm(pptkit.realign(proj, d, d)) - d) < 1e-9
    assert abs(pptkit.min_eigenvalue(pptkit.partial_transpose(proj, d, d)) + 1.0 / d) < 1e-9


def test_structure_report_all_pass():
    rep = pptkit.structure_report(3, 0.5, [0.5, 0.5])
    assert rep
    assert all(c["passed"] for c in rep)


def test_dps_certifies_interior_point():
    r = pptkit.run_dps(3, 0.5, [0.5, 0.5])
    assert r["status"] == "NoExtension"
    assert r["t_star"] < -1e-6
    assert r["level"] == 2
    assert not r["escalated"]


def test_dps_state_entry_point():
    rho = pptkit.state(3, 0.5, [0.5, 0.5])
    r = pptkit.run_dps_state(rho, 3, 3)
    assert r["status"] == "NoExtension"
    assert r["t_star"] < -1e-6


def test_witness_separates_state_from_products():
    w = pptkit.witness(3, 0.5, [0.5, 0.5])
    assert w["valid"]
    assert w["state_overlap"] < -1e-6
    assert w["min_product_value"] >= -1e-9
    assert w["samples"] == 10000
    rho = pptkit.state(3, 0.5, [0.5, 0.5])
    overlap = np.trace(w["matrix"] @ rho).real
    assert abs(overlap - w["state_overlap"]) < 1e-12


def test_scan_rows_ordered_and_corner_detected():
    out = pptkit.scan(3, 0.8, "realign", grid=3)
    rows = out["rows"]
    assert len(rows) == 9
    assert rows[0]["lambdas"] == [0.0, 0.0]
    assert rows[0]["detected"]
    assert not rows[4]["detected"]  # centre of the grid
    assert out["csv"].splitlines()[0] == "lambda1,lambda2,evidence,detected,status"


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        pptkit.state(3, 1.5, [0.5, 0.5])
    with pytest.raises(ValueError):
        pptkit.state(3, 0.5, [0.5])
    with pytest.raises(ValueError):
        pptkit.run_dps(3, 0.5, [0.5, 0.5], level=1)


# ── command-line tool ────────────────────────────────────────────────────────


@needs_cli
def test_cli_check_ppt_exit_zero():
    out = subprocess.run(
        [CLI, "check", "ppt", "--d", "3", "--a", "0.5", "--lambdas", "0.5,0.5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    v = json.loads(out.stdout)
    assert v["criterion"] == "ppt"
    assert v["outcome"] == "NotDetected"


@needs_cli
def test_cli_invalid_parameters_exit_two():
    out = subprocess.run(
        [CLI, "check", "ppt", "--d", "3", "--a", "1.5", "--lambdas", "0.5,0.5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 2


@needs_cli
def test_cli_state_matches_library(tmp_path):
    path = tmp_path / "state.json"
    out = subprocess.run(
        [CLI, "state", "--d", "3", "--a", "0.25", "--lambdas", "0.1,0.9", "--out", str(path)],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    doc = json.loads(path.read_text())
    assert doc["dims"] == [3, 3]
    rho = np.array(doc["re"]) + 1j * np.array(doc["im"])
    ref = pptkit.state(3, 0.25, [0.1, 0.9])
    assert np.max(np.abs(rho - ref)) == 0.0


@needs_cli
def test_cli_scan_csv(tmp_path):
    path = tmp_path / "scan.csv"
    out = subprocess.run(
        [
            CLI, "scan", "--d", "3", "--a", "0.8", "--criterion", "realign",
            "--grid", "3", "--out", str(path),
        ],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    lines = path.read_text().splitlines()
    assert lines[0] == "lambda1,lambda2,evidence,detected,status"
    assert len(lines) == 10
    assert lines[1].startswith("0,0,")
    assert lines[1].endswith(",true,ok")
