import math

import numpy as np
import pytest

from helpers import make_trace

from etrc.analysis import (compare_runs, comparison_text, compute_metrics,
                           export_csv, read_csv, realized_cost, report_json)
from etrc.config import apply_overrides, build_scenario, paper_config
from etrc.engine import run_scenario
from etrc.errors import EmptyWindow


def test_metrics_zero_error():
    m = compute_metrics(make_trace(np.zeros(9)))
    assert m.rmse == m.mse == m.mae == 0.0


def test_metrics_alternating_unit_error():
    m = compute_metrics(make_trace([1.0, -1.0]))
    assert m.rmse == 1.0 and m.mse == 1.0 and m.mae == 1.0


def test_metrics_hand_example():
    m = compute_metrics(make_trace([3.0, 4.0]))
    assert m.mse == pytest.approx(12.5, abs=1e-15)
    assert m.rmse == pytest.approx(3.5355339059327378, abs=1e-15)
    assert m.mae == pytest.approx(3.5, abs=1e-15)


def test_metrics_rmse_mse_identity_and_power_mean(rng):
    for _ in range(20):
        err = rng.normal(size=257)
        m = compute_metrics(make_trace(err))
        assert m.rmse == pytest.approx(math.sqrt(m.mse), abs=1e-15)
        assert m.mae <= m.rmse + 1e-15


def test_metrics_match_bruteforce_accumulation(rng):
    err = rng.normal(size=10_000)
    m = compute_metrics(make_trace(err))
    acc_sq = 0.0
    acc_abs = 0.0
    for e in err:
        acc_sq += e * e
        acc_abs += abs(e)
    n = err.shape[0]
    assert abs(m.mse - acc_sq / n) < 1e-12
    assert abs(m.mae - acc_abs / n) < 1e-12
    assert abs(m.rmse - math.sqrt(acc_sq / n)) < 1e-12


def test_metrics_window_and_events():
    trace = make_trace(np.ones(11), h=0.5, events=(0.0, 1.0, 3.0, 4.5))
    m = compute_metrics(trace, window=(1.0, 4.5))
    assert m.event_count == 3
    assert m.min_interval == 1.5
    assert m.max_interval == 2.0


def test_metrics_empty_window():
    with pytest.raises(EmptyWindow):
        compute_metrics(make_trace(np.ones(5)), window=(10.0, 20.0))


def test_realized_cost_zero_trace():
    q = np.eye(5)
    assert realized_cost(make_trace(np.zeros(7)), q, [[1.0]]) == 0.0


def test_realized_cost_constant_input():
    # u = 1 over two seconds with everything else zero: 0.5 * integral(1) = 1
    n = 9
    trace = make_trace(np.zeros(n), u=np.ones(n), h=0.25)
    assert realized_cost(trace, np.eye(5), [[1.0]]) == pytest.approx(1.0, abs=1e-12)


def test_realized_cost_quadratic_scaling(rng):
    err = rng.normal(size=41)
    u = rng.normal(size=41)
    t1 = make_trace(err, u=u, h=0.1)
    t2 = make_trace(2.0 * err, u=2.0 * u, h=0.1)
    t2.x = 2.0 * t1.x
    t2.x_a = 2.0 * t1.x_a
    q = np.diag([1.0, 2.0, 3.0, 4.0, 5.0])
    c1 = realized_cost(t1, q, [[1.0]])
    c2 = realized_cost(t2, q, [[1.0]])
    assert c2 == pytest.approx(4.0 * c1, rel=1e-9)


def test_csv_round_trip_zero_trace(tmp_path):
    trace = make_trace(np.zeros(3))
    path = tmp_path / "zero.csv"
    export_csv(trace, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 4  # header + 3 rows
    back = read_csv(path)
    assert np.array_equal(back.error, trace.error)


def test_csv_round_trip_bit_exact(tmp_path):
    doc = apply_overrides(paper_config(), ["horizon=0.01"])
    scenario, _ = build_scenario(doc)
    trace = run_scenario(scenario)
    path = tmp_path / "trace.csv"
    export_csv(trace, path)
    back = read_csv(path)
    for name in ("t", "y", "y_ref", "error", "u", "u_f", "w_true", "w_hat",
                 "w_tilde", "v", "x_a", "rho"):
        assert np.array_equal(getattr(back, name), getattr(trace, name)), name
    assert np.array_equal(back.x, trace.x)
    assert np.array_equal(back.xhat, trace.xhat)
    assert np.array_equal(back.transmitted, trace.transmitted)
    assert back.event_log == trace.event_log


def test_compare_runs_identical_reports():
    m1 = compute_metrics(make_trace([1.0, -1.0], events=(0.0, 0.5)), label="a")
    m2 = compute_metrics(make_trace([1.0, -1.0], events=(0.0, 0.5)), label="b")
    cmp = compare_runs([m1, m2])
    for row in cmp["ratios_vs_first"]:
        assert row["rmse"] == 1.0
        assert row["mse"] == 1.0
        assert row["mae"] == 1.0
    # the external baseline rows ride along verbatim
    labels = [ext["label"] for ext in cmp["external"]]
    assert any("baseline" in lab for lab in labels)
    text = comparison_text(cmp)
    assert "ratios" in text
    json_text = report_json(cmp)
    assert "0.3950" in json_text or "0.395" in json_text


def test_compare_requires_two_reports():
    m = compute_metrics(make_trace([1.0]))
    with pytest.raises(ValueError):
        compare_runs([m])
