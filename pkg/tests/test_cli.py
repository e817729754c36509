from __future__ import annotations

import json
from pathlib import Path

import pytest

from latticecft.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from latticecft.reports import ANCHORS

ROOT = Path(__file__).resolve().parents[1]
CONFIG = str(ROOT / "config.yaml")


def _run_json(capsys, *args: str) -> tuple[int, dict]:
    code = main(["check", *args, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_cocycle_suite_only(capsys):
    code, payload = _run_json(capsys, CONFIG, "--suite", "cocycle")
    assert code == EXIT_OK
    assert [s["name"] for s in payload["suites"]] == ["cocycle"]
    ids = {c["id"] for c in payload["suites"][0]["checks"]}
    assert {"cocycle.identity", "cocycle.commutator", "cocycle.diagonal", "cocycle.bimultiplicative"} <= ids
    assert payload["summary"]["ok"] is True
    assert payload["config"]["resolvedBackend"] == "quadratic(2)"


def test_reports_are_deterministic(capsys):
    main(["check", CONFIG, "--suite", "lattice", "--suite", "cocycle", "--json"])
    first = capsys.readouterr().out
    main(["check", CONFIG, "--suite", "lattice", "--suite", "cocycle", "--json"])
    second = capsys.readouterr().out
    assert first == second
    assert '"timing"' not in first


def test_timings_flag(capsys):
    code, payload = _run_json(capsys, CONFIG, "--suite", "lattice", "--timings")
    assert code == EXIT_OK
    assert all("timing" in c for c in payload["suites"][0]["checks"])


def test_odd_norm_config_exits_2(capsys):
    code = main(["check", str(ROOT / "configs" / "odd_norm.yaml")])
    assert code == EXIT_CONFIG
    assert "OddNorm" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.yaml")]) == EXIT_CONFIG


def test_failed_check_exits_1(tmp_path, capsys, monkeypatch):
    from latticecft import suites
    from latticecft.reports import ReportBuilder

    def broken(model):
        rb = ReportBuilder("lattice")
        rb.check("lattice.even", "lattice.gram", False, witness={"reason": "forced"})
        return rb.build()

    monkeypatch.setitem(suites.SUITES, "lattice", broken)
    out = tmp_path / "report.json"
    code = main(["check", CONFIG, "--suite", "lattice", "--out", str(out)])
    assert code == EXIT_FAILED
    payload = json.loads(out.read_text(encoding="utf-8"))
    failed = [c for c in payload["suites"][0]["checks"] if c["status"] == "fail"]
    assert failed and failed[0]["witness"] == {"reason": "forced"}


def test_text_summary(capsys):
    assert main(["check", CONFIG, "--suite", "lattice"]) == EXIT_OK
    assert "lattice:" in capsys.readouterr().out


def test_full_run_on_root_config(tmp_path, capsys):
    out = tmp_path / "all.json"
    code = main(["check", CONFIG, "--out", str(out)])
    payload = json.loads(out.read_text(encoding="utf-8"))
    failures = [(s["name"], c["id"]) for s in payload["suites"] for c in s["checks"] if c["status"] == "fail"]
    assert code == EXIT_OK, failures
    assert [s["name"] for s in payload["suites"]] == ["lattice", "cocycle", "fock", "vertex", "net2d", "braidcat", "classify"]
    anchors = {c["anchor"] for s in payload["suites"] for c in s["checks"]}
    assert anchors <= ANCHORS


@pytest.mark.parametrize("name", ["isotropic.yaml", "heterotic.yaml"])
def test_example_configs(name, capsys):
    assert main(["check", str(ROOT / "configs" / name)]) == EXIT_OK


def test_comm_order_above_half_cutoff_exits_2(tmp_path, capsys):
    text = (ROOT / "config.yaml").read_text(encoding="utf-8")
    path = tmp_path / "wide.yaml"
    path.write_text(text.replace("  locality_order: 4", "  locality_order: 4\n  comm_order: 9"), encoding="utf-8")
    assert main(["check", str(path), "--suite", "vertex"]) == EXIT_CONFIG
    assert "comm_order" in capsys.readouterr().err


def test_window_error_in_suite_exits_2(capsys, monkeypatch):
    from latticecft import suites
    from latticecft.errors import OutOfWindow

    def out_of_window(model):
        raise OutOfWindow("series order 9 exceeds the cutoff 8")

    monkeypatch.setitem(suites.SUITES, "lattice", out_of_window)
    assert main(["check", CONFIG, "--suite", "lattice"]) == EXIT_CONFIG
    assert "OutOfWindow" in capsys.readouterr().err
