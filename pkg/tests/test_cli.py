import csv
import io
import json

import pytest

from qflab.cli import build_parser, emit, execute_plan, main, parse_invocation


def run_cli(argv):
    plan = parse_invocation(argv)
    records, status = execute_plan(plan)
    assert status == 0
    return records


def test_parse_examples_from_usage():
    plan = parse_invocation(["repr", "congruence-sum", "--form", "1,0,1",
                             "--ell", "2", "--x", "1e5"])
    assert (plan.group, plan.action) == ("repr", "congruence-sum")
    assert plan.params["ell"] == 2 and plan.params["x"] == 1e5

    plan = parse_invocation(["fourier", "search", "--A", "28", "--terms", "3"])
    assert (plan.group, plan.action) == ("fourier", "search")
    assert plan.params["A"] == 28.0

    plan = parse_invocation(["forms", "reduce", "--form", "2,-2,3"])
    records, status = execute_plan(plan)
    assert status == 0
    assert (records[0]["a"], records[0]["b"], records[0]["c"]) == (2, 2, 3)


def test_usage_errors_exit_2():
    for argv in (
        ["repr", "rf", "--form", "1,0,1", "--n", "5", "--bogus", "7"],
        ["repr", "rf", "--form", "1,0,1"],
        ["forms", "reduce", "--form", "1,0"],
        ["nonsense"],
        ["repr", "error-scaling", "--form", "1,0,1", "--grid", "bad:grid"],
    ):
        with pytest.raises(SystemExit) as exc:
            parse_invocation(argv)
        assert exc.value.code == 2


def test_rf_and_pif_values():
    assert run_cli(["repr", "rf", "--form", "1,0,1", "--n", "5"])[0]["rf"] == 8
    assert run_cli(["sieve", "pif", "--form", "1,0,1", "--x", "20"])[0]["pi_f"] == 4


def test_poisson_record():
    rec = run_cli(["repr", "poisson-check", "--form", "1,1,1",
                   "--ell", "3", "--t", "0.7"])[0]
    assert rec["relative_gap"] < 1e-10


def test_json_round_trip(tmp_path):
    records = run_cli(["repr", "congruence-sum", "--form", "2,1,3",
                       "--ell", "3", "--x", "12345"])
    buf = io.StringIO()
    emit(records, "json", buf)
    parsed = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert parsed[0]["exact"] == records[0]["exact"]
    assert parsed[0]["main"] == records[0]["main"]  # 17 digits round-trips


def test_csv_round_trip():
    records = run_cli(["fourier", "report", "--coeffs", "68,5,1",
                       "--lam", "0.98644", "--A", "28"])
    buf = io.StringIO()
    emit(records, "csv", buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert float(rows[0]["j_plus"]) == pytest.approx(records[0]["j_plus"], rel=1e-5)


def test_determinism_byte_identical(tmp_path, capsys):
    argv = ["repr", "error-scaling", "--form", "1,0,1", "--ell", "2",
            "--grid", "1e3:1e5:4:log"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second and first


def test_out_file(tmp_path):
    path = tmp_path / "rows.json"
    assert main(["--out", str(path), "forms", "enumerate", "--d", "108"]) == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert json.loads(lines[0]) == {"D": 108, "a": 1, "b": 0, "c": 27}


def test_config_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid": "1e3:1e4:3:log", "ell": 2}))
    plan = parse_invocation(["repr", "error-scaling", "--form", "1,0,1",
                             "--config", str(cfg)])
    assert plan.params["ell"] == 2
    assert len(plan.params["grid"]) == 3
    # command line wins over config
    plan = parse_invocation(["repr", "error-scaling", "--form", "1,0,1",
                             "--ell", "5", "--config", str(cfg)])
    assert plan.params["ell"] == 5

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nonsense": 1}))
    with pytest.raises(SystemExit) as exc:
        parse_invocation(["repr", "error-scaling", "--form", "1,0,1",
                          "--config", str(bad)])
    assert exc.value.code == 2


def test_classnum_record():
    rec = run_cli(["forms", "classnum", "--d", "23"])[0]
    assert rec["h_enumeration"] == 3 and rec["h_analytic"] == 3
    rec = run_cli(["forms", "classnum", "--d", "108"])[0]
    assert rec["h_enumeration"] == 3 and "h_analytic" not in rec


def test_bt_constants_record():
    rec = run_cli(["sieve", "bt-constants", "--form", "1,0,1", "--x", "1e18",
                   "--y", "1e8", "--variant", "cuberoot_range", "--eps", "0.01"])[0]
    assert rec["constant"] == pytest.approx(26.86, abs=0.01)
    assert rec["range_ok"] is True


def test_parser_help_covers_all_groups():
    parser = build_parser()
    help_text = parser.format_help()
    for word in ("forms", "repr", "sieve", "fourier", "verify"):
        assert word in help_text


def test_parallel_sweep_is_deterministic(monkeypatch, capsys):
    argv = ["repr", "error-scaling", "--form", "2,1,3", "--ell", "3",
            "--grid", "1e3:3e4:5:log"]
    monkeypatch.delenv("QFLAB_THREADS", raising=False)
    assert main(argv) == 0
    serial = capsys.readouterr().out
    monkeypatch.setenv("QFLAB_THREADS", "3")
    assert main(argv) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_verify_subcommand_routing(monkeypatch):
    import qflab.cli as cli

    calls = []
    monkeypatch.setattr(cli._verify, "run_suite", lambda suite: calls.append(suite) or 0)
    assert main(["verify", "fast"]) == 0
    assert calls == ["fast"]
    with pytest.raises(SystemExit) as exc:
        parse_invocation(["verify", "slow"])
    assert exc.value.code == 2
