import json

import pytest

from overasym.cli import EXIT_CERTIFICATION, EXIT_DOMAIN, EXIT_FALSE, EXIT_USAGE, main
from overasym.verify import VerificationReport, records_from_csv


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_table_csv(capsys, tmp_path):
    status, out, _ = run(capsys, "table", "--n-max", "10", "--format", "csv",
                         "--cache-dir", str(tmp_path))
    lines = out.splitlines()
    assert status == 0
    assert lines[0] == "n,overpartition"
    assert len(lines) == 12
    assert lines[-1] == "10,232"
    assert (tmp_path / "theta_recurrence-10.opt").exists()


def test_cache_does_not_change_output(capsys, tmp_path):
    args = ("table", "--n-max", "40", "--format", "json", "--cache-dir", str(tmp_path))
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    for f in tmp_path.iterdir():
        f.unlink()
    third = run(capsys, *args)[1]
    assert first == second == third
    oracle = run(capsys, "table", "--n-max", "40", "--method", "oracle", "--format", "json",
                 "--cache-dir", str(tmp_path))[1]
    assert json.loads(oracle)["values"] == json.loads(first)["values"]


def test_cache_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("OVERASYM_CACHE", str(tmp_path / "env"))
    run(capsys, "table", "--n-max", "5")
    assert (tmp_path / "env" / "theta_recurrence-5.opt").exists()


def test_coeff_diff(capsys):
    status, out, _ = run(capsys, "coeff-diff", "--j", "1", "--r", "2", "--t", "2")
    assert status == 0
    assert out.strip() == "1/4 * pi^2"


def test_coeff_text_and_json(capsys):
    assert run(capsys, "coeff", "--k", "1", "--t", "1")[1].strip() == "1/2 * pi^1 - 1 * pi^-1"
    data = json.loads(run(capsys, "coeff", "--k", "-2", "--t", "2", "--format", "json")[1])
    assert data["terms"] == {"2": "1/2", "0": "3"}


def test_verify_exit_zero(capsys):
    status, out, _ = run(capsys, "verify", "--statement", "thm1.1", "--N", "1", "--k", "1",
                         "--span", "500")
    assert status == 0
    assert "verdict PASS" in out


def test_verify_false_verdict_exit(capsys):
    status, out, _ = run(capsys, "verify", "--statement", "wxz", "--r", "3", "--from", "3",
                         "--to", "40")
    assert status == EXIT_FALSE
    assert "verdict FAIL" in out


def test_verify_json_and_csv_round_trip(capsys, tmp_path):
    args = ["verify", "--statement", "thm1.2", "--N", "2", "--r", "1", "--j", "2", "--span", "25"]
    _, js, _ = run(capsys, *args, "--format", "json")
    _, cs, _ = run(capsys, *args, "--format", "csv")
    report = VerificationReport.from_json(js)
    assert records_from_csv(cs, report.precision_bits) == report.records
    assert "runtime_ms" not in json.loads(js)
    out_file = tmp_path / "r.json"
    run(capsys, *args, "--format", "json", "--output", str(out_file))
    assert out_file.read_text() == js


def test_determinism(capsys):
    args = ["verify", "--statement", "lemma2.2", "--m", "2", "--k", "-1", "--span", "40",
            "--format", "json", "--bits", "200"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_precondition_error_exit(capsys):
    status, _, err = run(capsys, "verify", "--statement", "thm1.1", "--N", "1", "--k", "1",
                         "--from", "21", "--span", "10")
    assert status == EXIT_DOMAIN
    assert "below" in err
    status, _, _ = run(capsys, "verify", "--statement", "thm1.2", "--N", "1", "--r", "2", "--j", "1")
    assert status == EXIT_DOMAIN


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["table", "--n-max", "ten"])
    assert info.value.code == EXIT_USAGE
    status, _, _ = run(capsys, "verify", "--statement", "thm1.1", "--N", "1")
    assert status == EXIT_USAGE
    status, _, _ = run(capsys, "expand", "--n", "100", "--k", "1", "--N", "1", "--bits", "32")
    assert status == EXIT_USAGE


def test_rigorous(capsys):
    status, out, _ = run(capsys, "rigorous", "--n", "2200")
    assert status == 0
    value, info = out.splitlines()
    assert value == "557767902164848787089966039283841301051327195673074072116824"
    assert info.startswith("N=57 bound=0.4990") and info.endswith("@277b")
    status, out, _ = run(capsys, "rigorous", "--n", "2200", "--format", "csv")
    assert out.splitlines()[0] == "n,N,value,engel_bound,certified"
    assert out.splitlines()[1].endswith(",true")


def test_rigorous_failure(capsys):
    status, out, _ = run(capsys, "rigorous", "--n", "3")
    assert status == EXIT_CERTIFICATION
    assert "certification failed" in out


def test_expand_precision_annotation(capsys):
    status, out, _ = run(capsys, "expand", "--n", "100", "--k", "1", "--N", "1", "--bits", "256")
    assert status == 0
    assert all(line.endswith("@256b") for line in out.splitlines())
    status, out, _ = run(capsys, "diff-expand", "--n", "300", "--j", "2", "--r", "2", "--N", "3")
    assert status == 0
    assert out.splitlines()[0].endswith("@143b")


def test_threshold(capsys):
    assert run(capsys, "threshold", "--r", "1", "--scan-max", "1000")[1].startswith("1 ")
    data = json.loads(run(capsys, "threshold", "--r", "6", "--scan-max", "20000",
                          "--format", "json")[1])
    assert data["n0"] > 1 and data["empirical"]
