"""Quantitative gates for the rotational-system benchmark reproduction.

The same gate functions back the ``repro`` CLI command and the acceptance
test suite, so the command's exit code and the tests agree by construction.

Gate summary (hard gates fail the reproduction):
  * synthesis certificate: Riccati residual, symmetry, stability, runtime;
  * disturbance-estimator dominance: the estimator-enabled run must beat the
    disabled run on all three error indices, full window and burst window;
  * burst contrast: disabled-run peak error at least twice the enabled-run
    peak over the burst window -- NOTE: unattainable for this benchmark's
    published parameters, because every burst component is periodic in the
    internal-model period and is cancelled with or without the estimator
    (see the repository notes); the gate is still evaluated honestly;
  * robustness: bounded response to the 4.5-amplitude step, peak error
    below 0.2, re-entry into +-0.1 within two reference periods;
  * trigger structure: inter-event spacing, threshold confinement;
  * soft reports: comparison against the published index values and the
    event statistics of the static baseline.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from . import analysis
from .config import apply_overrides, build_scenario, paper_config
from .engine import run_scenario
from .numerics import solve_care
from .synthesis import PUBLISHED_BENCHMARK_GAINS, verify_closed_loop

BURST_WINDOW = (12.0, 18.0)
CONTRAST_RATIO_MIN = 2.0
SOFT_BAND = (0.5, 2.0)
ROBUST_STEP_TIME = 21.0
ROBUST_MAX_ERROR = 0.2
ROBUST_REENTRY_BAND = 0.1
ROBUST_REENTRY_WITHIN = 4.0
CARE_RESIDUAL_MAX = 1e-9
CARE_RUNTIME_MAX = 1.0
RUN_RUNTIME_MAX = 30.0

VARIANT_OVERRIDES = {
    "proposed": [],
    "no_eid": ["eid=off"],
    "static_petm": ["mode=static"],
    "step_disturbance": ["step_disturbance=on"],
}


def benchmark_runs(variants=None, overrides=None) -> dict:
    """Run benchmark scenario variants; returns label -> result dict."""
    base = paper_config()
    if overrides:
        base = apply_overrides(base, overrides)
    out = {}
    for label in (variants or VARIANT_OVERRIDES):
        doc = apply_overrides(base, VARIANT_OVERRIDES[label])
        scenario, ctx = build_scenario(doc)
        started = time.perf_counter()
        trace = run_scenario(scenario)
        elapsed = time.perf_counter() - started
        out[label] = {"trace": trace, "scenario": scenario, "context": ctx,
                      "elapsed": elapsed, "label": label}
    return out


def window_peak(trace, window) -> float:
    i0 = int(round(window[0] / trace.h))
    i1 = int(round(window[1] / trace.h))
    return float(np.abs(trace.error[i0:i1 + 1]).max())


def certificate_gate() -> dict:
    """Synthesis certificate on the benchmark augmentation."""
    scenario, ctx = build_scenario(paper_config())
    started = time.perf_counter()
    # re-run the solve inside the timing window
    k = solve_care(ctx["augmented"].a_bar, ctx["augmented"].b_bar,
                   ctx["q_z"], ctx["r"])
    runtime = time.perf_counter() - started
    report = verify_closed_loop(ctx["augmented"], scenario.gains,
                                ctx["q_z"], ctx["r"])
    sym = float(np.linalg.norm(k - k.T))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (k + k.T))))
    kp_dev = float(np.linalg.norm(scenario.gains.k_p.ravel()
                                  - PUBLISHED_BENCHMARK_GAINS["k_p"])
                   / np.linalg.norm(PUBLISHED_BENCHMARK_GAINS["k_p"]))
    kc_dev = float(abs(scenario.gains.k_c.ravel()[0]
                       - PUBLISHED_BENCHMARK_GAINS["k_c"])
                   / PUBLISHED_BENCHMARK_GAINS["k_c"])
    passed = (report["residual"] < CARE_RESIDUAL_MAX
              and report["hurwitz"]
              and sym < 1e-10
              and min_eig > -1e-10
              and runtime < CARE_RUNTIME_MAX)
    return {"pass": passed, "residual": report["residual"],
            "hurwitz": report["hurwitz"], "symmetry_defect": sym,
            "min_eigenvalue": min_eig, "runtime_s": runtime,
            "published_gain_deviation": {"k_p": kp_dev, "k_c": kc_dev}}


def dominance_gate(run_on, run_off) -> dict:
    """Estimator-enabled run must strictly beat the disabled run."""
    results = {}
    ok = True
    for name, window in (("full", None), ("burst", BURST_WINDOW)):
        m_on = analysis.compute_metrics(run_on["trace"], window)
        m_off = analysis.compute_metrics(run_off["trace"], window)
        dom = (m_on.rmse < m_off.rmse and m_on.mse < m_off.mse
               and m_on.mae < m_off.mae)
        ok = ok and dom
        results[name] = {"dominates": dom,
                         "on": (m_on.rmse, m_on.mse, m_on.mae),
                         "off": (m_off.rmse, m_off.mse, m_off.mae)}
    runtime_ok = (run_on["elapsed"] < RUN_RUNTIME_MAX
                  and run_off["elapsed"] < RUN_RUNTIME_MAX)
    results["pass"] = ok and runtime_ok
    results["runtime_ok"] = runtime_ok
    results["elapsed_s"] = (run_on["elapsed"], run_off["elapsed"])
    return results


def soft_band_report(run_on) -> dict:
    """Compare enabled-run metrics against the published values (report only)."""
    m = analysis.compute_metrics(run_on["trace"])
    rows = {}
    for key in ("rmse", "mse", "mae"):
        reported = analysis.REPORTED_PROPOSED[key]
        value = getattr(m, key)
        rows[key] = {"value": value, "published": reported,
                     "ratio": value / reported,
                     "inside_band": SOFT_BAND[0] * reported <= value <= SOFT_BAND[1] * reported}
    return rows


def contrast_gate(run_on, run_off) -> dict:
    peak_on = window_peak(run_on["trace"], BURST_WINDOW)
    peak_off = window_peak(run_off["trace"], BURST_WINDOW)
    ratio = peak_off / peak_on
    return {"pass": ratio >= CONTRAST_RATIO_MIN, "ratio": ratio,
            "peak_on": peak_on, "peak_off": peak_off}


def robustness_gate(run_step) -> dict:
    trace = run_step["trace"]
    i_step = int(round(ROBUST_STEP_TIME / trace.h))
    post = np.abs(trace.error[i_step:])
    peak = float(post.max())
    outside = np.nonzero(post > ROBUST_REENTRY_BAND)[0]
    reentry = float(outside[-1] + 1) * trace.h if outside.size else 0.0
    return {"pass": peak < ROBUST_MAX_ERROR and reentry <= ROBUST_REENTRY_WITHIN,
            "peak_after_step": peak, "reentry_time_s": reentry,
            "bounded": bool(np.all(np.isfinite(trace.error)))}


def trigger_structure_gate(run) -> dict:
    trace = run["trace"]
    scenario = run["scenario"]
    t1 = scenario.trigger.check_period
    intervals = np.diff(trace.event_log)
    spacing_ok = bool(intervals.size == 0 or intervals.min() >= t1 - 1e-12)
    rho_ok = bool(np.all((trace.rho >= scenario.trigger.rho_lo - 1e-15)
                         & (trace.rho <= scenario.trigger.rho_hi + 1e-15)))
    return {"pass": spacing_ok and rho_ok,
            "min_interval": float(intervals.min()) if intervals.size else None,
            "rho_confined": rho_ok, "event_count": len(trace.event_log)}


def event_comparison_report(run_adaptive, run_static) -> dict:
    m_a = analysis.compute_metrics(run_adaptive["trace"])
    m_s = analysis.compute_metrics(run_static["trace"])
    ratio = None
    if m_a.min_interval and m_s.min_interval:
        ratio = m_a.min_interval / m_s.min_interval
    return {"adaptive_events": m_a.event_count,
            "static_events": m_s.event_count,
            "adaptive_leq_static": m_a.event_count <= m_s.event_count,
            "min_interval_ratio": ratio,
            "published_claim": 20.0}


def run_reproduction(out_dir: Path, verbose: bool = False, runs: dict | None = None) -> bool:
    """Run the four benchmark variants, export artifacts, evaluate gates.

    Returns the conjunction of the hard gates.  The burst-contrast gate is
    structurally unattainable for the published benchmark parameters; it is
    evaluated and reported like every other hard gate.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if runs is None:
        runs = benchmark_runs()

    for label, run in runs.items():
        analysis.export_csv(run["trace"], out_dir / f"{label}_trace.csv")
        metrics = analysis.compute_metrics(run["trace"], label=label)
        metrics.realized_cost = analysis.realized_cost(
            run["trace"], run["context"]["q_z"], run["context"]["r"])
        (out_dir / f"{label}_metrics.json").write_text(
            analysis.report_json(metrics.as_dict()), encoding="utf-8")

    gates = {
        "synthesis_certificate": certificate_gate(),
        "estimator_dominance": dominance_gate(runs["proposed"], runs["no_eid"]),
        "burst_contrast": contrast_gate(runs["proposed"], runs["no_eid"]),
        "robustness_step": robustness_gate(runs["step_disturbance"]),
        "trigger_structure": trigger_structure_gate(runs["proposed"]),
    }
    reports = {
        "soft_band_vs_published": soft_band_report(runs["proposed"]),
        "event_comparison": event_comparison_report(runs["proposed"],
                                                    runs["static_petm"]),
        "external_reference_rows": [analysis.BASELINE_PREVIEW_RC,
                                    analysis.REPORTED_PROPOSED],
    }

    hard_pass = all(g["pass"] for g in gates.values())
    summary = {"gates": gates, "reports": reports, "all_hard_gates_pass": hard_pass}
    (out_dir / "summary.json").write_text(analysis.report_json(summary),
                                          encoding="utf-8")

    lines = ["benchmark reproduction summary", ""]
    for name, gate in gates.items():
        lines.append(f"[{'PASS' if gate['pass'] else 'FAIL'}] {name}")
        for key, val in gate.items():
            if key != "pass":
                lines.append(f"        {key}: {val}")
    lines.append("")
    lines.append("reports (not gated):")
    for name, rep in reports.items():
        lines.append(f"  {name}: {rep}")
    if not gates["burst_contrast"]["pass"]:
        lines.append("")
        lines.append(
            "note: the burst-contrast gate cannot pass with the published "
            "benchmark parameters: every burst component is periodic in the "
            "2 s internal-model period, so the repetitive loop cancels it "
            "with or without the estimator, and the estimator's slow "
            "innovation channel (pole ~ -0.64 rad/s via the published "
            "observer gain) cannot shape the onset transient.")
    text = "\n".join(lines)
    (out_dir / "summary.txt").write_text(text + "\n", encoding="utf-8")
    if verbose:
        print(text)
    return hard_pass
