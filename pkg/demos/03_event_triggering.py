"""Event-triggered transmission statistics.

Runs the benchmark under three transmission regimes and compares how often
the observer state actually crosses the channel:

  adaptive   periodic checks with the adaptive threshold,
  static     periodic checks with the threshold frozen (classic baseline),
  continuous every-step transmission (no channel at all).

With the benchmark's aggressive gains the observer state moves far between
checks, so both periodic schemes transmit at every check instant and the
adaptive threshold sits at its floor: the channel saves communication by
the check grid itself (one sample per 0.5 s instead of one per 0.1 ms).
"""

from etrc import analysis
from etrc.config import apply_overrides, build_scenario, paper_config
from etrc.engine import run_scenario

reports = []
for mode in ("adaptive", "static", "continuous"):
    doc = apply_overrides(paper_config(), [f"mode={mode}"])
    scenario, _ = build_scenario(doc)
    trace = run_scenario(scenario)
    m = analysis.compute_metrics(trace, label=mode)
    reports.append(m)
    grid_steps = len(trace) - 1
    if mode == "continuous":
        sent = grid_steps  # every integration step carries the fresh state
    else:
        sent = m.event_count
    print(f"{mode:>10}: rmse={m.rmse:.5f}  transmissions={sent}"
          + (f"  min-interval={m.min_interval}" if m.min_interval else ""))

print("\nside-by-side (first row is the baseline for the ratios):")
print(analysis.comparison_text(analysis.compare_runs(reports)))

print("\nreading the table: the adaptive and static rows transmit 51 samples")
print("over 25 s versus 250000 candidate instants, a 4900x reduction, at a")
print("tracking cost visible in the rmse column against the continuous row.")
