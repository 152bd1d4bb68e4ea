import hashlib
import json

import pytest

import main
from app import router
from app.config import get_settings
from app.state import CheckReport
from core.constructions import construction2
from core.field import make_field
from storage.function_file import parse_function_file, read_function_file
from storage.report_store import recent_runs


@pytest.fixture
def c2_file(tmp_path, capsys):
    path = tmp_path / "c2.tt"
    assert main.main(["construct", "--family", "c2", "--m", "2", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def test_construct_to_file(tmp_path, capsys):
    path = tmp_path / "f.tt"
    assert main.main(["construct", "--family", "c2", "--m", "2", "--out", str(path)]) == 0
    assert "family=c2 n=4 weight=8 support=8" in capsys.readouterr().out
    assert read_function_file(path).table == construction2(make_field(4))


def test_construct_to_stdout(capsys):
    assert main.main(["construct", "--family", "c1shift", "--m", "3", "--shift", "2"]) == 0
    ff = parse_function_file(capsys.readouterr().out)
    assert ff.family == "c1shift:s=2"
    assert ff.table.weight == 36


def test_construct_general_with_explicit_lambda(capsys):
    assert main.main(["construct", "--family", "c2general", "--m", "2", "--lambda-k", "0,1,2"]) == 0
    assert parse_function_file(capsys.readouterr().out).table == construction2(make_field(4))


def test_construct_general_with_wrong_lambda_size(capsys):
    assert main.main(["construct", "--family", "c2general", "--m", "2", "--lambda-k", "0,1"]) == 2
    assert "exactly 2^(m-1)+1 = 3" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "--family", "c2", "--m", "2", "--lambda-k", "0"],
        ["construct", "--family", "c3", "--m", "2"],
        ["construct", "--family", "c2", "--m", "1"],
        ["construct", "--family", "c1shift", "--m", "2", "--shift", "9"],
        ["construct", "--family", "c2general", "--m", "2", "--shift", "3"],
        ["construct", "--family", "c2", "--m", "2", "--lambda-seed", "4"],
        ["construct", "--family", "c2general", "--m", "2", "--lambda-k", "0,1,2", "--lambda-seed", "4"],
    ],
)
def test_construct_usage_errors(argv, capsys):
    assert main.main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_log_level_flags(tmp_path, capsys):
    argv = ["construct", "--family", "c2", "--m", "2", "--out", str(tmp_path / "f.tt")]
    assert main.main(argv) == 0
    assert "INFO app.orchestrator: Constructed family=c2" in capsys.readouterr().err
    assert main.main(["--quiet"] + argv) == 0
    assert capsys.readouterr().err == ""
    assert main.main(["--log-level", "debug"] + argv) == 0
    assert "polar construct at log level DEBUG" in capsys.readouterr().err
    assert main.main(["--log-level", "loud"] + argv) == 2
    assert capsys.readouterr().err.startswith("error: unknown log level")


def test_analyze_json(c2_file, capsys):
    assert main.main(["analyze", str(c2_file), "--metrics", "weight,degree,ai,nonlinearity,faa"]) == 0
    report = json.loads(capsys.readouterr().out)
    metrics = report["metrics"]
    assert metrics["weight"]["value"] == 8
    assert metrics["degree"]["value"] == 3
    assert metrics["ai"]["value"]["ai"] == 2
    assert metrics["nonlinearity"]["value"] == 4
    assert metrics["faa"]["value"][0]["e"] == 1
    assert "runtime_s" not in metrics["ai"]
    assert report["function"]["family"] == "c2"
    assert report["function"]["sha256"] == hashlib.sha256(c2_file.read_bytes()).hexdigest()


def test_analyze_output_is_deterministic(c2_file, capsys):
    main.main(["analyze", str(c2_file)])
    first = capsys.readouterr().out
    main.main(["analyze", str(c2_file)])
    assert capsys.readouterr().out == first


def test_analyze_with_timings(c2_file, capsys):
    assert main.main(["analyze", str(c2_file), "--metrics", "weight", "--with-timings"]) == 0
    assert "runtime_s" in json.loads(capsys.readouterr().out)["metrics"]["weight"]


def test_analyze_csv(c2_file, capsys):
    assert main.main(["analyze", str(c2_file), "--metrics", "weight,balanced", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# sha256=")
    assert lines[1] == "metric,status,value,message"
    assert lines[2].startswith("weight,ok,8")


def test_analyze_respects_caps(tmp_path, monkeypatch, capsys):
    path = tmp_path / "c2m3.tt"
    assert main.main(["construct", "--family", "c2", "--m", "3", "--out", str(path)]) == 0
    capsys.readouterr()
    monkeypatch.setenv("AI_MAX_N", "4")
    get_settings.cache_clear()
    assert main.main(["analyze", str(path), "--metrics", "ai"]) == 0
    capped = json.loads(capsys.readouterr().out)["metrics"]["ai"]
    assert capped["status"] == "skipped"
    assert "resource cap" in capped["message"]
    assert main.main(["analyze", str(path), "--metrics", "ai", "--cap-override"]) == 0
    out = capsys.readouterr()
    assert json.loads(out.out)["metrics"]["ai"]["value"]["ai"] == 3
    assert "resource cap overridden" in out.err


def test_analyze_errors(tmp_path, c2_file, capsys):
    assert main.main(["analyze", str(tmp_path / "missing.tt")]) == 3
    bad = tmp_path / "bad.tt"
    bad.write_text(c2_file.read_text().replace("tt=", "tt=z"))
    assert main.main(["analyze", str(bad)]) == 3
    assert main.main(["analyze", str(c2_file), "--metrics", "entropy"]) == 2


def test_verify_text(capsys):
    assert main.main(["verify", "prop3", "--m-range", "2..4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["prop3 m=2: PASS", "prop3 m=3: PASS", "prop3 m=4: PASS"]


def test_verify_json_and_out(tmp_path, capsys):
    out = tmp_path / "lemma3.json"
    assert main.main(["verify", "lemma3", "--m-range", "2,4", "--format", "json", "--out", str(out)]) == 0
    captured = capsys.readouterr()
    document = json.loads(out.read_text())
    assert document["passed"] is True
    assert [r["m"] for r in document["reports"]] == [2, 4]
    assert "lemma3 m=2: PASS" in captured.err


def test_verify_phi_reports_without_failing(capsys):
    assert main.main(["verify", "phi", "--m-range", "3"]) == 0
    assert capsys.readouterr().out.strip() == "phi m=3: REPORT"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "lemma9"],
        ["verify", "prop3", "--m-range", "1..3"],
        ["verify", "prop3", "--m-range", "4..2"],
        ["verify", "oai", "--m-range", "8"],
    ],
)
def test_verify_usage_errors(argv, capsys):
    assert main.main(argv) == 2


def test_reproduce_table(tmp_path, capsys):
    out = tmp_path / "table.csv"
    assert main.main(["reproduce-table", "--n-max", "6", "--out", str(out), "--with-ai"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# N_TCT")
    assert lines[1].split(",")[:4] == ["n", "N_CF", "N_TCT", "N_F"]
    assert lines[1].endswith("AI_F")
    assert lines[2].startswith("4,4,4,4,")
    assert lines[3].startswith("6,24,22,22,")
    assert lines[3].endswith(",3")


def test_reproduce_table_reports_rows_outside_tolerance(capsys):
    # generator x gives N_F = 112 at n = 8 against the published 108
    assert main.main(["reproduce-table", "--n-max", "8"]) == 1
    captured = capsys.readouterr()
    rows = {line.split(",")[0]: line.split(",") for line in captured.out.splitlines()[2:]}
    assert rows["6"][-1] == "True"
    assert rows["8"][:4] == ["8", "112", "108", "112"]
    assert rows["8"][-2:] == ["False", "False"]
    assert "n=8 N_F=112 (ref 108, +3.7%, limit 2%)" in captured.err


def test_failed_verification_exits_one(monkeypatch, capsys):
    def runner(m):
        report = CheckReport(target="broken", m=m)
        if m == 3:
            report.record({"m": m})
        return report

    monkeypatch.setitem(router.VERIFY_ROUTES, "broken", router.VerifyRoute("broken", runner))
    assert main.main(["verify", "broken", "--m-range", "2..3"]) == 1
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["broken m=2: PASS", "broken m=3: FAIL counterexamples=1"]
    assert "error: broken failed for m=3" in captured.err


def test_reproduce_table_rejects_odd_sizes(capsys):
    assert main.main(["reproduce-table", "--n-max", "5"]) == 2
    assert main.main(["reproduce-table", "--n-max", "22"]) == 2


def test_runs_are_recorded_when_enabled(monkeypatch, capsys):
    monkeypatch.setenv("RECORD_RUNS", "1")
    get_settings.cache_clear()
    main.main(["verify", "lemma1", "--m-range", "2"])
    runs = recent_runs()
    assert runs[-1]["command"] == "verify"
    assert runs[-1]["exit_code"] == 0
