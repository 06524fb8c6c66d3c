"""Command-line front end.

Subcommands:
  synth    gain synthesis report for a configuration
  run      simulate one scenario, write trace CSV + metrics JSON
  compare  run several scenario variants and tabulate their metrics
  repro    run the full benchmark suite and gate it against the
           acceptance bands

A configuration argument is either a bundled name (``paper_eq28``) or a
path to a JSON file.  Overrides are trailing ``key=value`` arguments.  The
output root comes from ``--out`` or the ``ETRC_OUT_ROOT`` environment
variable (default ``./out``).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis
from .config import apply_overrides, build_scenario, load_config, serialize_config
from .engine import run_scenario
from .errors import ToolkitError
from .numerics import TOL_CARE
from .synthesis import PUBLISHED_BENCHMARK_GAINS as REPORTED_GAINS
from .synthesis import verify_closed_loop


def _out_root(args) -> Path:
    root = args.out or os.environ.get("ETRC_OUT_ROOT", "out")
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(args) -> dict:
    doc = load_config(args.config)
    return apply_overrides(doc, args.overrides or [])


def cmd_synth(args) -> int:
    doc = _load(args)
    scenario, ctx = build_scenario(doc)
    gains = scenario.gains
    report = verify_closed_loop(ctx["augmented"], gains, ctx["q_z"], ctx["r"])
    print(f"partition (principal): {gains.partition}")
    for name, (k_p, k_c) in gains.candidates.items():
        tag = " *" if name == gains.partition else ""
        print(f"  candidate {name}{tag}: k_p = {k_p.ravel()}  k_c = {k_c.ravel()}")
    print(f"riccati residual: {report['residual']:.3e}")
    print(f"closed loop hurwitz: {report['hurwitz']}")
    print("closed-loop spectrum:")
    for lam in report["spectrum"]:
        print(f"  {lam.real:+.6g} {lam.imag:+.6g}j")
    kp_dev = np.linalg.norm(gains.k_p.ravel() - REPORTED_GAINS["k_p"]) \
        / np.linalg.norm(REPORTED_GAINS["k_p"])
    kc_dev = abs(gains.k_c.ravel()[0] - REPORTED_GAINS["k_c"]) / REPORTED_GAINS["k_c"]
    print(f"relative deviation from published gains: k_p {kp_dev:.3f}, k_c {kc_dev:.3f}")
    if args.json:
        payload = {
            "partition": gains.partition,
            "candidates": {k: {"k_p": p, "k_c": c} for k, (p, c) in gains.candidates.items()},
            "residual": report["residual"],
            "hurwitz": report["hurwitz"],
            "spectrum": report["spectrum"],
            "published_gain_deviation": {"k_p": kp_dev, "k_c": kc_dev},
        }
        print(analysis.report_json(payload))
    return 0 if (report["hurwitz"] and report["residual"] < TOL_CARE) else 1


def _run_once(doc: dict, label: str):
    scenario, ctx = build_scenario(doc)
    started = time.perf_counter()
    trace = run_scenario(scenario)
    elapsed = time.perf_counter() - started
    metrics = analysis.compute_metrics(trace, label=label)
    metrics.realized_cost = analysis.realized_cost(trace, ctx["q_z"], ctx["r"])
    return trace, metrics, elapsed


def cmd_run(args) -> int:
    doc = _load(args)
    out = _out_root(args)
    label = args.label or "run"
    trace, metrics, elapsed = _run_once(doc, label)
    csv_path = out / f"{label}_trace.csv"
    json_path = out / f"{label}_metrics.json"
    analysis.export_csv(trace, csv_path)
    json_path.write_text(analysis.report_json(metrics.as_dict()), encoding="utf-8")
    print(f"wrote {csv_path} and {json_path} ({elapsed:.1f} s simulated run)")
    print(f"rmse {metrics.rmse:.6g}  mse {metrics.mse:.6g}  mae {metrics.mae:.6g}  "
          f"events {metrics.event_count}")
    return 0


VARIANTS = {
    "eid_on": ["eid=on"],
    "eid_off": ["eid=off"],
    "adaptive": ["mode=adaptive"],
    "static": ["mode=static"],
    "continuous": ["mode=continuous"],
    "step_disturbance": ["step_disturbance=on"],
}


def cmd_compare(args) -> int:
    doc = _load(args)
    out = _out_root(args)
    reports = []
    for mode in args.modes:
        if mode not in VARIANTS:
            print(f"unknown variant {mode!r}; choose from {sorted(VARIANTS)}",
                  file=sys.stderr)
            return 2
        variant_doc = apply_overrides(doc, VARIANTS[mode])
        _, metrics, _ = _run_once(variant_doc, mode)
        reports.append(metrics)
    comparison = analysis.compare_runs(reports)
    print(analysis.comparison_text(comparison))
    (out / "comparison.json").write_text(analysis.report_json(comparison),
                                         encoding="utf-8")
    return 0


def cmd_repro(args) -> int:
    """Benchmark suite: proposed, no-EID, static baseline, robustness step."""
    from .acceptance import run_reproduction  # local import: pulls in runtime checks
    out = _out_root(args) / time.strftime("repro_%Y%m%d_%H%M%S")
    out.mkdir(parents=True, exist_ok=True)
    ok = run_reproduction(out, verbose=True)
    return 0 if ok else 1


def cmd_show_config(args) -> int:
    print(serialize_config(_load(args)))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="etrc", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="bundled config name or JSON path")
        p.add_argument("overrides", nargs="*", help="key=value overrides")
        p.add_argument("--out", default=None, help="output root directory")

    p_synth = sub.add_parser("synth", help="synthesize gains and print the certificate")
    add_common(p_synth)
    p_synth.add_argument("--json", action="store_true", help="also print a JSON report")
    p_synth.set_defaults(func=cmd_synth)

    p_run = sub.add_parser("run", help="simulate one scenario")
    add_common(p_run)
    p_run.add_argument("--label", default=None, help="basename for output files")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run and compare scenario variants")
    add_common(p_cmp)
    p_cmp.add_argument("--modes", nargs="+", required=True,
                       help=f"variants to run: {sorted(VARIANTS)}")
    p_cmp.set_defaults(func=cmd_compare)

    p_rep = sub.add_parser("repro", help="run the benchmark reproduction suite")
    p_rep.add_argument("--out", default=None, help="output root directory")
    p_rep.set_defaults(func=cmd_repro)

    p_show = sub.add_parser("show-config", help="print the resolved configuration")
    add_common(p_show)
    p_show.set_defaults(func=cmd_show_config)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
