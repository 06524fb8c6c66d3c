"""Repetitive-controller internal model: a first-order low-pass filter inside
a positive-feedback loop with a delay of one reference period.

The filter state ``x_a`` obeys

    dx_a/dt = -w_a x_a(t) + w_a x_a(t - T) + w_a e(t)
    v(t)    =  x_a(t - T) + e(t)

so the block ``v = e / (1 - l(s) exp(-sT))`` with ``l(s) = w_a/(s + w_a)``
accumulates any T-periodic component of the tracking error ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import HistoryBuffer


@dataclass
class MrcState:
    x_a: float
    w_a: float
    period: float
    history: HistoryBuffer

    def __post_init__(self):
        if self.w_a <= 0.0:
            raise ValueError("cutoff frequency w_a must be positive")
        if self.period <= 0.0:
            raise ValueError("delay period must be positive")


def zero_initialized(w_a: float, period: float, step: float, horizon: float) -> MrcState:
    """MRC state with x_a = 0 on [-period, 0] and room for a full run."""
    n_delay = round(period / step)
    n_total = round(horizon / step)
    buf = HistoryBuffer(step=step, capacity=n_delay + n_total + 2, t_first=-period)
    buf.extend_constant(0.0, n_delay + 1)  # covers [-period, 0]
    return MrcState(x_a=0.0, w_a=w_a, period=period, history=buf)


def delayed_state(state: MrcState, t: float) -> float:
    return float(state.history.sample(t - state.period)[0])


def mrc_derivative(state: MrcState, error: float, t: float) -> float:
    """-w_a x_a(t) + w_a x_a(t - T) + w_a e(t)."""
    return state.w_a * (-state.x_a + delayed_state(state, t) + error)


def mrc_output(state: MrcState, error: float, t: float) -> float:
    """x_a(t - T) + e(t)."""
    return delayed_state(state, t) + error


def tracking_error(y_ref: float, y: float) -> float:
    return y_ref - y
