import json

import pytest

from qmbmw import cli
from qmbmw.cli import ConfigError, RunConfig
from qmbmw.tensorops import load_json


def _parse_report(text):
    lines = [json.loads(l) for l in text.strip().splitlines()]
    assert "summary" in lines[-1]
    return lines[:-1], lines[-1]["summary"]


def _strip_timing(lines):
    out = []
    for line in lines.strip().splitlines():
        doc = json.loads(line)
        doc.pop("elapsedMs", None)
        if "summary" not in doc:
            out.append(json.dumps(doc, sort_keys=True))
    return out


def test_verify_exit_zero_and_report_shape(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["verify", "--suite", "rmatrix", "--family", "so",
                     "--dim", "3", "--q", "7/5", "--out", str(out)])
    assert code == 0
    records, summary = _parse_report(out.read_text())
    assert records and all(r["status"] in ("pass", "fail", "skipped")
                           for r in records)
    assert summary["counts"]["fail"] == 0
    assert summary["config"]["family"] == "so"
    assert summary["config"]["q"] == "7/5"
    assert "toolVersion" in summary


def test_verify_writes_stdout_by_default(capsys):
    code = cli.main(["verify", "--suite", "contractors"])
    assert code == 0
    records, summary = _parse_report(capsys.readouterr().out)
    assert summary["counts"]["fail"] == 0


def test_config_errors_exit_two(tmp_path, capsys):
    cases = [
        ["verify", "--q", "7/0"],
        ["verify", "--q", "abc"],
        ["verify", "--suite", "nonsense"],
        ["verify", "--suite", "qma", "--max-degree", "4",
         "--backend", "rational"],
        ["verify", "--family", "import"],
        ["verify", "--family", "martian"],
        ["verify", "--backend", "quantum"],
        ["verify", "--max-degree", "9"],
        ["dump", "--operator", "R"],
        ["dump", "--operator", "xyz", "--out", str(tmp_path / "x.json")],
        ["dump", "--operator", "aN", "--order", "7",
         "--out", str(tmp_path / "x.json")],
    ]
    for argv in cases:
        assert cli.main(argv) == 2, argv
        assert "error:" in capsys.readouterr().err


def test_reports_are_deterministic(tmp_path):
    argv = ["verify", "--suite", "twist", "--f-matrix", "R", "--seed", "9"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert _strip_timing(a.read_text()) == _strip_timing(b.read_text())


def test_dump_round_trip(tmp_path, bmw_so3, rational_field, capsys):
    path = tmp_path / "r.json"
    assert cli.main(["dump", "--operator", "R", "--out", str(path)]) == 0
    assert load_json(str(path), rational_field) == bmw_so3.R
    # a dumped operator re-imports as a working instance
    code = cli.main(["verify", "--suite", "rmatrix", "--family", "import",
                     "--r-matrix", str(path), "--q", "7/5"])
    assert code == 0
    _, summary = _parse_report(capsys.readouterr().out)
    assert summary["counts"]["fail"] == 0


def test_modular_backend_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("QMBMW_BACKEND", "modular")
    out = tmp_path / "m.json"
    code = cli.main(["verify", "--suite", "rmatrix", "--primes", "1",
                     "--out", str(out)])
    assert code == 0
    _, summary = _parse_report(out.read_text())
    assert summary["config"]["backend"] == "modular"
    assert len(summary["primesUsed"]) == 1
    # an explicit flag wins over the environment
    code = cli.main(["verify", "--suite", "rmatrix", "--backend", "rational",
                     "--out", str(out)])
    assert code == 0
    _, summary = _parse_report(out.read_text())
    assert summary["config"]["backend"] == "rational"


def test_prime_agreement_record(tmp_path):
    out = tmp_path / "p.json"
    code = cli.main(["verify", "--suite", "rmatrix", "--backend", "modular",
                     "--primes", "2", "--out", str(out)])
    assert code == 0
    records, summary = _parse_report(out.read_text())
    agree = [r for r in records if r["check"] == "prime-agreement"]
    assert len(agree) == 1 and agree[0]["status"] == "pass"
    assert len(summary["primesUsed"]) == 2


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("so", 1, "7/5", "P", 3, "rational", 2, ["all"], 0, None)
    with pytest.raises(ConfigError):
        RunConfig("so", 3, "7/5", "P", 3, "rational", 0, ["all"], 0, None)
    cfg = RunConfig("so", 3, "7/5", "P", 3, "rational", 2,
                    ["qma", "rmatrix", "qma"], 0, None)
    # dependency order, duplicates collapsed
    assert cfg.suites == ["rmatrix", "qma"]
    echo = cfg.echo()
    assert echo["suites"] == ["rmatrix", "qma"] and echo["dimV"] == 3


def test_sp2_inadmissible_orders_are_skipped(capsys):
    code = cli.main(["verify", "--suite", "idempotents", "--family", "sp",
                     "--dim", "2", "--q", "7/5"])
    assert code == 0
    records, summary = _parse_report(capsys.readouterr().out)
    skipped = [r for r in records if r["status"] == "skipped"]
    assert skipped and summary["counts"]["skipped"] == len(skipped)
    reasons = " ".join(json.dumps(r.get("witness")) for r in skipped)
    assert "-q^(-3)" in reasons