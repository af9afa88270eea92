import json

import pytest

from bicovariant.checks import Record
from bicovariant.cli import main
from bicovariant.report import VerificationReport, parse_json, render_json, render_markdown


def _run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_unknown_group_is_config_error(capsys):
    code, out = _run(["run", "g2"], capsys)
    assert code == 2 and "configuration error" in out.err


def test_bad_suite_is_config_error(capsys):
    assert _run(["run", "sp4", "--suites", "nonsense"], capsys)[0] == 2


def test_classical_suite_passes(capsys):
    code, out = _run(["run", "sp4", "--suites", "classical"], capsys)
    assert code == 0
    rep = json.loads(out.out)
    assert rep["summary"]["gating"] == 0 and rep["summary"]["total"] > 5


def test_expected_failures_do_not_gate(capsys):
    code, out = _run(["run", "sp4", "--suites", "jacobi", "--preset", "A2", "--seed", "0"], capsys)
    assert code == 0
    recs = {r["id"]: r for r in json.loads(out.out)["records"]}
    assert recs["jacobi.preset_A2.seed0"]["status"] == "fail-as-expected"


def test_json_is_byte_identical_and_round_trips(capsys, tmp_path):
    args = ["run", "so5", "--suites", "classical", "--out"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + [str(a)]) == 0 and main(args + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = parse_json(a.read_text())
    assert render_json(rep) == a.read_text()


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "so5", "suites": ["classical"], "format": "json"}))
    code, out = _run(["run", "--config", str(cfg), "--format", "markdown"], capsys)
    assert code == 0
    assert out.out.startswith("# Verification report") and "so5" in out.out


def test_empty_report_is_valid():
    rep = VerificationReport({}, [])
    doc = json.loads(render_json(rep))
    assert doc["records"] == [] and doc["summary"]["total"] == 0
    assert "0 checks" in render_markdown(rep)


def test_markdown_row_escapes_pipes():
    r = Record("x.y", "classical", "(t)", "sp4", "pass", "fail", "a|b", {}, "test")
    text = render_markdown(VerificationReport({}, [r]))
    assert "a\\|b" in text and "FAILED" in text
    assert VerificationReport({}, [r]).exit_code == 1


def test_wrong_schema_rejected():
    with pytest.raises(ValueError):
        parse_json(json.dumps({"schema": "other", "version": 1, "records": []}))
