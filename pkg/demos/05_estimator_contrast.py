"""Where the disturbance estimator genuinely earns its keep.

On the published benchmark the estimator's effect on the tracking indices
is small: every disturbance component there is periodic in the 2-second
internal-model period, so the repetitive loop learns and cancels it by
itself, and the high-gain instantaneous feedback suppresses what is left.

This script builds a scenario where that masking is removed:

  * zero reference (the disturbance is the only excitation),
  * a cheaper optimization weight on the error channel (gentler gains),
  * a faster observer (placed poles), which speeds up the innovation
    channel the estimator feeds on,
  * a unit step disturbance at t = 4 s.

Here the estimator rejects the step within a fraction of a second while
the repetitive loop alone needs many periods to learn it away.
"""

import json

import numpy as np

from etrc import analysis
from etrc.config import apply_overrides, build_scenario, paper_config
from etrc.engine import run_scenario

q_z = np.diag([100.0, 100.0, 100.0, 200.0, 0.001]).tolist()
poles = ["(-60+0j)", "(-40+250j)", "(-40-250j)"]
base = [
    "horizon=16", "h=2e-4",
    f"synthesis.Q_z={json.dumps(q_z)}",
    "observer.L=null",
    f"observer.poles={json.dumps(poles)}",
    'signals.reference={"kind": "zero"}',
    'signals.disturbance={"kind": "step", "step_time": 4.0, "step_amplitude": 1.0}',
]

runs = {}
for label, extra in (("estimator on", []), ("estimator off", ["eid=off"])):
    scenario, _ = build_scenario(apply_overrides(paper_config(), base + extra))
    runs[label] = run_scenario(scenario)
    print(f"ran: {label}")

print(f"\n{'time':>6} {'|e| with estimator':>20} {'|e| without':>14}")
for t in (4.5, 5.0, 6.0, 8.0, 12.0, 15.0):
    i = int(round(t / 2e-4))
    on = abs(runs["estimator on"].error[i])
    off = abs(runs["estimator off"].error[i])
    print(f"{t:>6} {on:>20.6f} {off:>14.6f}")

for window in ((4.0, 8.0), (8.0, 16.0)):
    m_on = analysis.compute_metrics(runs["estimator on"], window)
    m_off = analysis.compute_metrics(runs["estimator off"], window)
    print(f"\nwindow {window}: rmse {m_on.rmse:.6f} (on) vs {m_off.rmse:.6f} (off)"
          f"  ->  {m_off.rmse / m_on.rmse:.1f}x better with the estimator")

print("\nwithout the estimator the error decays only as the internal model")
print("replays the previous period; with it the innovation channel removes")
print("the step directly, which is the whole point of the estimator stage.")
