import csv
import io
import json

import pytest

from tripleverify import cli
from tripleverify import ct_identities as ct
from tripleverify.errors import ConfigError, NonDivisible


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dyson_max_three(capsys):
    code, out, _ = run(["dyson", "--max", "3"], capsys)
    reports = json.loads(out)
    assert code == 0
    assert len(reports) == 64
    assert all(r["pass"] and r["rel_error"] == "exact" for r in reports)
    assert list(reports[0]) == list(cli.FIELDS)


def test_padic_f_reports_carry_tail_bounds(capsys):
    code, out, _ = run(["padic-f", "--p", "3", "--depth", "5,8"], capsys)
    reports = json.loads(out)
    assert code == 0
    assert reports and all(isinstance(r["tail_bound"], float) for r in reports)
    assert all(r["parameters"]["depth"] == "5,8" for r in reports)


def test_real_spot_value(capsys):
    code, out, _ = run(["real", "--a", "1,1,1"], capsys)
    reports = json.loads(out)
    assert code == 0
    real = [r for r in reports if r["identity_id"] == "real"][0]
    assert abs(float(real["lhs"]) - 0.09375) < 1e-12
    assert float(real["rhs"]) == pytest.approx(0.09375, rel=1e-14)
    tie = [r for r in reports if r["identity_id"] == "real-ct-tieout"][0]
    assert tie["lhs"] == tie["rhs"] == "3/32"


def test_morris_single_permutation(capsys):
    code, out, _ = run(["morris", "--a", "1,1,1", "--sigma", "123"], capsys)
    (report,) = json.loads(out)
    assert code == 0
    assert report["lhs"] == "1 + 2*q + 2*q^2 + 1*q^3"
    assert report["parameters"] == {"a": "1,1,1", "sigma": "123"}


def test_failing_case_sets_exit_status(capsys):
    code, out, _ = run(["morris", "--a", "0,1,1", "--sigma", "213"], capsys)
    (report,) = json.loads(out)
    assert code == 1
    assert report["pass"] is False
    assert isinstance(report["abs_error"], float)


def test_errors_become_failing_reports(monkeypatch, capsys):
    def boom(a):
        raise NonDivisible("remainder 1 + q")

    monkeypatch.setattr(ct, "dyson_ct_lhs", boom)
    code, out, _ = run(["dyson", "--max", "0"], capsys)
    (report,) = json.loads(out)
    assert code == 1
    assert report["pass"] is False
    assert report["lhs"].startswith("error: NonDivisible")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["dyson", "--all"],
        ["nosuch"],
        ["padic-f", "--p", "4"],
        ["padic-f", "--depth", "5"],
        ["qtorus", "--q", "1.5"],
        ["dyson", "--a", "1,2"],
        ["dyson", "--a", "0.5,1,1"],
        ["morris", "--sigma", "112"],
        ["real", "--grid", "4"],
        ["dyson", "--format", "xml"],
        ["dyson", "--tol", "-1"],
    ],
)
def test_config_errors_exit_two(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_reports_are_byte_deterministic(capsys):
    argv = ["padic-moebius", "--p", "3", "--seed", "7", "--format", "csv"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    _, other, _ = run(["padic-moebius", "--p", "3", "--seed", "8", "--format", "csv"], capsys)
    assert other != first


def test_csv_header_and_rows(capsys):
    _, out, _ = run(["kadell", "--max", "1", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.FIELDS
    assert len(rows) == 1 + 4
    assert rows[1][cli.FIELDS.index("pass")] == "true"


def test_text_format_is_aligned(capsys):
    _, out, _ = run(["lemma26", "--format", "text"], capsys)
    lines = out.splitlines()
    assert len(lines) == 1 + 4
    col = lines[0].index("parameters")
    assert all(line[col - 2 : col] == "  " for line in lines[1:])


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["phi", "--max", "3", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert len(json.loads(path.read_text())) == 4


def test_empty_report_list_renders():
    assert json.loads(cli.emit_report([], "json")) == []
    assert cli.emit_report([], "csv").strip() == ",".join(cli.FIELDS)


def test_exact_pass_has_literal_exact():
    rep = cli._exact_report("x", {}, 3, 3)
    assert rep.as_dict()["rel_error"] == "exact"
    assert rep.as_dict()["abs_error"] == "exact"


def test_numeric_pass_rule_uses_tail_and_tolerance():
    assert cli._numeric_report("x", {}, 1.0 + 1e-9, 1.0, 1e-8).passed
    assert not cli._numeric_report("x", {}, 1.0 + 1e-7, 1.0, 1e-8).passed
    assert cli._numeric_report("x", {}, 1.0 + 1e-7, 1.0, 1e-8, tail=2e-7).passed


def test_infinite_error_stays_valid_json():
    rep = cli._exact_report("x", {}, 1, 0)
    assert json.loads(cli.emit_report([rep]))[0]["rel_error"] == "inf"


def test_timing_is_opt_in(capsys):
    _, out, _ = run(["dixon", "--max", "1"], capsys)
    assert {r["runtime_ms"] for r in json.loads(out)} == {0}


def test_unknown_suite_in_config():
    with pytest.raises(ConfigError):
        cli.run_suite(cli.SuiteConfig(suites=("nosuch",)))


def test_every_documented_suite_is_registered():
    for name in (
        "dyson", "morris", "qdixon", "kadell", "dixon", "lemma54", "padic-f", "padic-j",
        "padic-triple", "padic-moebius", "real", "qtorus", "complex", "rational-form",
    ):
        assert name in cli.RUNNERS
