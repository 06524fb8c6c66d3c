"""Event-triggered repetitive control toolkit.

A numpy/scipy library for simulating and synthesizing tracking loops that
combine a repetitive-control internal model, a full-state observer, an
input-equivalent disturbance estimator, and an adaptive periodic
event-triggered transmission channel.
"""

from .analysis import (MetricsReport, compare_runs, compute_metrics,
                       export_csv, read_csv, realized_cost)
from .apetm import TriggerState, check_and_update, held_value, saturate, update_threshold
from .eid import EidState, eid_estimate, eid_filter_derivative, first_order_estimator, total_control
from .engine import (PreviewConfig, Scenario, Trace, TriggerConfig,
                     build_analysis_matrices, run_scenario)
from .errors import ToolkitError
from .mrc import MrcState, mrc_derivative, mrc_output, tracking_error
from .numerics import (HistoryBuffer, is_hurwitz, left_pseudo_inverse,
                       matrix_exponential, rk4_step, solve_care)
from .observer import ObserverState, estimation_error, observer_derivative, place_observer_poles
from .plant import (LtiPlant, SignalSpec, SineTerm, Window, eval_signal,
                    eval_signal_derivative, paper_disturbance, paper_plant,
                    paper_reference, plant_derivative, plant_output)
from .synthesis import (AugmentedSystem, GainSet, build_augmented,
                        compute_feedforward, feedback_law, synthesize_gains,
                        verify_closed_loop)

__version__ = "0.1.0"

__all__ = [
    "AugmentedSystem", "EidState", "GainSet", "HistoryBuffer", "LtiPlant",
    "MetricsReport", "MrcState", "ObserverState", "PreviewConfig", "Scenario",
    "SignalSpec", "SineTerm", "ToolkitError", "Trace", "TriggerConfig",
    "TriggerState", "Window",
    "build_analysis_matrices", "build_augmented", "check_and_update",
    "compare_runs", "compute_feedforward", "compute_metrics",
    "eid_estimate", "eid_filter_derivative", "estimation_error",
    "eval_signal", "eval_signal_derivative", "export_csv", "feedback_law",
    "first_order_estimator", "held_value", "is_hurwitz",
    "left_pseudo_inverse", "matrix_exponential", "mrc_derivative",
    "mrc_output", "observer_derivative", "paper_disturbance", "paper_plant",
    "paper_reference", "place_observer_poles", "plant_derivative",
    "plant_output", "read_csv", "realized_cost", "rk4_step", "run_scenario",
    "saturate", "solve_care", "synthesize_gains", "total_control",
    "tracking_error", "update_threshold", "verify_closed_loop",
]
