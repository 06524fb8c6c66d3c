import json

import numpy as np
import pytest

from etrc.analysis import read_csv
from etrc.cli import main
from etrc.config import (apply_overrides, load_config, paper_config,
                         serialize_config, validate_config)
from etrc.errors import ConfigError


def test_synth_passes_on_benchmark(capsys):
    code = main(["synth", "paper_eq28"])
    out = capsys.readouterr().out
    assert code == 0
    assert "residual" in out
    assert "n_plus_1" in out and "last" in out  # both partitions reported
    assert "deviation" in out


def test_synth_fails_on_zero_r(tmp_path, capsys):
    doc = paper_config()
    doc["synthesis"]["R"] = [[0.0]]
    path = tmp_path / "bad_r.json"
    path.write_text(json.dumps(doc))
    code = main(["synth", str(path)])
    assert code == 1
    assert "positive definite" in capsys.readouterr().err


def test_non_positive_qz_rejected_at_load(tmp_path, capsys):
    doc = paper_config()
    doc["synthesis"]["Q_z"] = np.diag([100.0, 100.0, 100.0, -1.0, 0.001]).tolist()
    path = tmp_path / "bad_q.json"
    path.write_text(json.dumps(doc))
    code = main(["synth", str(path)])
    assert code == 1
    assert "Q_z" in capsys.readouterr().err


def test_run_writes_trace_and_metrics(tmp_path, capsys):
    code = main(["run", "paper_eq28", "horizon=0.5", "--out", str(tmp_path),
                 "--label", "smoke"])
    assert code == 0
    trace = read_csv(tmp_path / "smoke_trace.csv")
    assert len(trace) == 5001
    report = json.loads((tmp_path / "smoke_metrics.json").read_text())
    assert report["rmse"] >= 0.0
    assert report["realized_cost"] >= 0.0


def test_run_override_precedence(tmp_path):
    code = main(["run", "paper_eq28", "horizon=1", "horizon=0.2",
                 "--out", str(tmp_path), "--label", "precedence"])
    assert code == 0
    trace = read_csv(tmp_path / "precedence_trace.csv")
    assert len(trace) == 2001  # the last override wins


def test_run_two_row_trace(tmp_path):
    # a single integration step is fine even at the coarse step: divergence
    # needs a few steps to build up.  The error is the reference value at
    # t = 1 ms (about 0.01), since the loop starts from rest.
    code = main(["run", "paper_eq28", "h=1e-3", "horizon=0.001",
                 "--out", str(tmp_path), "--label", "tiny"])
    assert code == 0
    trace = read_csv(tmp_path / "tiny_trace.csv")
    assert len(trace) == 2
    assert trace.error[0] == 0.0
    report = json.loads((tmp_path / "tiny_metrics.json").read_text())
    assert report["rmse"] < 0.05


def test_run_reports_divergence(tmp_path, capsys):
    code = main(["run", "paper_eq28", "h=1e-3", "horizon=1",
                 "--out", str(tmp_path)])
    assert code == 1
    assert "admissible range" in capsys.readouterr().err


def test_compare_degenerate_pair(tmp_path, capsys):
    code = main(["compare", "paper_eq28", "horizon=0.5", "--out", str(tmp_path),
                 "--modes", "adaptive", "adaptive"])
    assert code == 0
    comparison = json.loads((tmp_path / "comparison.json").read_text())
    for row in comparison["ratios_vs_first"]:
        assert row["rmse"] == 1.0
    # published baseline rows are embedded
    assert comparison["external"][0]["rmse"] == 0.3950


def test_compare_eid_modes(tmp_path, capsys):
    code = main(["compare", "paper_eq28", "horizon=0.5", "--out", str(tmp_path),
                 "--modes", "eid_on", "eid_off"])
    assert code == 0
    out = capsys.readouterr().out
    assert "eid_on" in out and "eid_off" in out


def test_unknown_variant_rejected(tmp_path, capsys):
    code = main(["compare", "paper_eq28", "--out", str(tmp_path),
                 "--modes", "adaptive", "warp_drive"])
    assert code == 2


def test_show_config_round_trip(capsys):
    assert main(["show-config", "paper_eq28"]) == 0
    text = capsys.readouterr().out
    doc = validate_config(json.loads(text))
    assert doc == validate_config(json.loads(serialize_config(doc)))


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown configuration key"):
        validate_config({"plnat": {}})
    with pytest.raises(ConfigError, match="trigger.T_one"):
        validate_config({"trigger": {"T_one": 0.5}})


def test_step_disturbance_override_appends_step():
    doc = apply_overrides(paper_config(), ["step_disturbance=on"])
    dist = doc["signals"]["disturbance"]
    assert dist["kind"] == "composite"
    kinds = [p["kind"] for p in dist["parts"]]
    assert "step" in kinds


def test_bundled_and_file_loading_agree(tmp_path):
    bundled = load_config("paper_eq28")
    path = tmp_path / "copy.json"
    path.write_text(serialize_config(bundled))
    assert load_config(str(path)) == bundled


def test_bad_override_paths():
    with pytest.raises(ConfigError):
        apply_overrides(paper_config(), ["nonsense.path=1"])
    with pytest.raises(ConfigError):
        apply_overrides(paper_config(), ["justakey"])
