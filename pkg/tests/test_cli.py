"""Tests for the command-line entry point and its exit codes."""

import json

import pytest

import config

from main import (
    EXIT_CATALOG_MISS,
    EXIT_DIVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    build_parser,
    main,
)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_prints_exact_value(capsys):
    code, out, _ = _run(capsys, ["eval", "qfact", "3"])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["value"] == "21/8"
    assert record["q"] == "1/2"


def test_eval_adds_float_rendering_of_exact_value(capsys):
    code, out, _ = _run(capsys, ["eval", "gamma1", "4"])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["value"] == "21/8"
    assert record["value_float"] == 2.625


def test_eval_pochhammer_to_infinity_in_float_mode(capsys):
    code, out, _ = _run(capsys, ["eval", "qpoch", "1/2", "inf", "--mode", "float"])
    assert code == EXIT_OK
    assert json.loads(out)["value"] == pytest.approx(0.2887880950866024, rel=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "nosuch", "1"],
        ["eval", "qbinom", "4"],
        ["eval", "qfact", "3", "--q", "3/2"],
        ["transform", "bogus:1"],
    ],
)
def test_usage_errors_exit_with_two(capsys, argv):
    code, _, err = _run(capsys, argv)
    assert code == EXIT_USAGE
    assert "✗" in err


def test_transform_both_ways_passes(capsys):
    code, out, _ = _run(capsys, ["transform", "mono:0,0", "--r", "2", "--s", "3"])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["status"] == "pass"
    assert record["value_catalog"] == "1/6"
    assert record["kind"] == "K1"


def test_divergent_transform_exits_with_three(capsys):
    code, _, err = _run(capsys, ["transform", "expqadd:3,1/2", "--r", "2", "--s", "2", "--mode", "numeric"])
    assert code == EXIT_DIVERGENCE
    assert "axis=x" in err


def test_catalog_miss_exits_with_four(capsys):
    code, _, _ = _run(capsys, ["transform", "expqadd:1,1", "--kind", "3", "--mode", "catalog"])
    assert code == EXIT_CATALOG_MISS


def test_solve_writes_report(capsys):
    code, out, _ = _run(capsys, ["solve", "abel_ward"])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["equation"] == "abel_ward"
    assert record["solution"].startswith("e_q(")
    assert record["inversion_complete"] is True


def test_csv_report_to_file(tmp_path, capsys):
    out = tmp_path / "eval.csv"
    code, stdout, _ = _run(capsys, ["eval", "qnum", "3", "--format", "csv", "--out", str(out)])
    assert code == EXIT_OK
    assert stdout == ""
    header, row = out.read_text(encoding="utf-8").splitlines()
    assert header.startswith("op,kind,q,params")
    assert "7/4" in row


def test_parser_rejects_unknown_suite():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "everything"])


def test_k_window_flag_feeds_the_lattice(capsys):
    code, out, err = _run(
        capsys, ["transform", "mono:1,1", "--r", "2", "--s", "3", "--k-window", "-200", "2000", "--verbose"]
    )
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "pass"
    assert "k in [-200, 2000]" in err


def test_k_window_must_contain_zero(capsys):
    code, _, _ = _run(capsys, ["transform", "mono:0,0", "--k-window", "1", "10", "--mode", "numeric"])
    assert code == EXIT_USAGE


def test_k_window_defaults_to_configured_window():
    args = build_parser().parse_args(["transform", "mono:0,0"])
    assert tuple(args.k_window) == tuple(config.K_WINDOW)
