#!/usr/bin/env python3
"""
Tests for the apcm command line, its run configuration and the runner.

Usage:
    pytest test_cli.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "skills/apcm/libs"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "skills/apcm/scripts"))

import pandas as pd
import pytest

from cli import main
from config import RunConfig, UsageError
from runner import ExperimentRunner


# ---------------------------------------------------------------- RunConfig

def test_config_defaults():
    config = RunConfig(gen="unequal_pair").validate()
    assert config.effective_alpha == 1.0 and config.effective_K is None
    assert config.effective_max_iter == 300
    assert RunConfig(algorithm="fcm").effective_max_iter == 100
    assert RunConfig(algorithm="pcm").effective_K == 1.0


def test_config_parameter_relevance():
    with pytest.raises(UsageError, match="alpha"):
        RunConfig(algorithm="pcm", alpha=2.0, gen="unequal_pair").validate()
    with pytest.raises(UsageError, match="K"):
        RunConfig(algorithm="apcm", K=2.0, gen="unequal_pair").validate()
    with pytest.raises(UsageError):
        RunConfig(algorithm="kmeans", gen="unequal_pair").validate()


def test_config_ranges_and_sources():
    for bad in (dict(m_ini=0), dict(alpha=-1.0), dict(q=1.0), dict(tol=0.0), dict(max_iter=0)):
        with pytest.raises(UsageError):
            RunConfig(gen="unequal_pair", **bad).validate()
    with pytest.raises(UsageError, match="Exactly one"):
        RunConfig().validate()
    with pytest.raises(UsageError, match="Exactly one"):
        RunConfig(input="a.csv", gen="unequal_pair").validate()
    RunConfig().validate(require_data=False)


def test_config_from_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("algorithm: pcm\nm_ini: 4\nK: 2.0\ngen: close_triplet\n", encoding="utf-8")
    config = RunConfig.from_yaml(path)
    assert (config.algorithm, config.m_ini, config.K, config.gen) == ("pcm", 4, 2.0, "close_triplet")

    merged = config.with_overrides(m_ini=6, K=None)
    assert merged.m_ini == 6 and merged.K == 2.0, "None overrides must not clear values"

    path.write_text("m_ini: 4\nbeta: 1\n", encoding="utf-8")
    with pytest.raises(UsageError, match="beta"):
        RunConfig.from_yaml(path)


def test_label_column_digits_become_index():
    assert RunConfig(label_col="0").label_column == 0
    assert RunConfig(label_col="last").label_column == "last"
    assert RunConfig(label_col="species").label_column == "species"


# ---------------------------------------------------------------- runner

def test_runner_reports_failures_as_dicts(tmp_path):
    runner = ExperimentRunner()
    missing = runner.run(RunConfig(input=str(tmp_path / "none.csv")))
    assert missing == {"success": False, "error": missing["error"], "code": "IO_ERROR"}

    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,oops\n", encoding="utf-8")
    result = runner.run(RunConfig(input=str(bad)))
    assert result["code"] == "DATA_ERROR" and "row 2" in result["error"]


def test_runner_fcm_report():
    result = ExperimentRunner().run(RunConfig(algorithm="fcm", m_ini=2, gen="unequal_pair"))
    assert result["success"], result.get("error")
    report = result["data"]["report"]
    assert report.algorithm == "fcm" and report.m_final == 2
    assert report.alpha is None and report.K is None
    assert report.sr == 100.0


# ---------------------------------------------------------------- command line

def test_run_writes_outputs(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    labels_path = tmp_path / "labels.csv"
    code = main([
        "run", "--gen", "unequal_pair", "--m-ini", "2", "--alpha", "1",
        "--output", str(report_path), "--labels-out", str(labels_path),
    ])
    assert code == 0
    assert "m_final=2" in capsys.readouterr().out

    payload = json.loads(report_path.read_text(encoding="utf-8"))
    assert payload["algorithm"] == "apcm" and payload["m_final"] == 2
    labels = pd.read_csv(labels_path)
    assert len(labels) == 17 and labels["index"].iloc[0] == 1


def test_run_on_generated_csv(tmp_path, capsys):
    csv_path = tmp_path / "pair.csv"
    assert main(["gen", "--gen", "unequal_pair", "--output", str(csv_path)]) == 0
    assert "17 points" in capsys.readouterr().out

    code = main(["run", "--input", str(csv_path), "--has-header", "--label-col", "label",
                 "--algorithm", "pcm", "--m-ini", "2"])
    assert code == 0
    assert capsys.readouterr().out.startswith("pcm")


def test_usage_errors_exit_2(capsys):
    assert main(["run", "--algorithm", "pcm", "--gen", "unequal_pair", "--alpha", "2"]) == 2
    assert "alpha applies only to apcm" in capsys.readouterr().err
    assert main(["run", "--algorithm", "fcm", "--gen", "unequal_pair", "--K", "2"]) == 2
    assert main(["run", "--m-ini", "2"]) == 2
    assert main(["run", "--gen", "unequal_pair", "--input", "x.csv"]) == 2
    assert main(["run", "--gen", "unequal_pair", "--label-col", "last"]) == 2
    assert main(["run", "--gen", "nowhere"]) == 2
    assert main(["sweep", "--gen", "unequal_pair", "--m-ini", "0", "--alpha", "1"]) == 2


def test_data_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,4\n5,6,7\n", encoding="utf-8")
    assert main(["run", "--input", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "row 3" in err and "=" * 60 in err

    assert main(["run", "--input", str(tmp_path / "missing.csv")]) == 1

    latin1 = tmp_path / "latin1.csv"
    latin1.write_bytes(b"1,2,a\n3,4,\xe9t\xe9\n")
    capsys.readouterr()
    assert main(["run", "--input", str(latin1)]) == 1
    assert "not valid UTF-8" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text("algorithm: apcm\nm_ini: 5\nalpha: 1.0\ngen: unequal_pair\n", encoding="utf-8")
    assert main(["run", "--config", str(config), "--m-ini", "3"]) == 0
    assert "m_ini=3" in capsys.readouterr().out

    config.write_text("m_ini: 5\ncolour: red\n", encoding="utf-8")
    assert main(["run", "--config", str(config), "--gen", "unequal_pair"]) == 2


def test_sweep_writes_table(tmp_path, capsys):
    output = tmp_path / "sweep.csv"
    code = main(["sweep", "--gen", "unequal_pair", "--m-ini", "2", "3", "--alpha", "1", "2",
                 "--output", str(output)])
    assert code == 0
    table = pd.read_csv(output)
    assert list(table.columns) == ["m_ini", "alpha", "m_final", "iterations"]
    assert len(table) == 4
    assert (table["m_final"] <= table["m_ini"]).all()


def test_landscape_on_bimodal_1d(tmp_path, capsys):
    output = tmp_path / "landscape.csv"
    code = main(["landscape", "--gen", "bimodal_1d", "--alpha", "1", "--grid-size", "501", "--output", str(output)])
    assert code == 0
    assert "minima=" in capsys.readouterr().out
    assert len(pd.read_csv(output)) == 501


def test_landscape_rejects_2d_data(capsys):
    assert main(["landscape", "--gen", "unequal_pair"]) == 1



def test_landscape_parameter_ranges_exit_2(capsys):
    assert main(["landscape", "--gen", "bimodal_1d", "--m-ini", "0"]) == 2
    assert "m_ini" in capsys.readouterr().err
    assert main(["landscape", "--gen", "bimodal_1d", "--alpha", "0"]) == 2
    assert "alpha" in capsys.readouterr().err


def test_verify_single_suite(capsys):
    assert main(["verify", "--suite", "bounds", "--trials", "50"]) == 0
    assert "✓ PASS" in capsys.readouterr().out


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "landscape" in capsys.readouterr().out
