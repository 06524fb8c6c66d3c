"""Adaptive periodic event-triggered transmission of the observer state.

The channel samples the observer state every ``check_period`` seconds and
transmits only when the quadratic deviation of the held sample from the
fresh sample exceeds a threshold fraction of the fresh sample's quadratic
size:

    (held - xhat)' psi1 (held - xhat) > rho * xhat' psi2 xhat

On transmission the held sample snaps to the fresh one (so the left-hand
side resets to exactly zero).  In adaptive mode the threshold then follows

    rho <- sat[rho + kappa * (held' psi1 held - xhat' psi2 xhat)]

clamped to [rho_lo, rho_hi].  Static mode keeps rho fixed, which is the
classic periodic event-triggered baseline.  Checking only on the periodic
grid rules out Zeno behavior by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidBounds, NotOnGrid
from .numerics import as_matrix

ADAPTIVE = "adaptive"
STATIC = "static"

GRID_REL_TOL = 1e-9


def saturate(x: float, lo: float, hi: float) -> float:
    """Clamp x into [lo, hi]."""
    if lo > hi:
        raise InvalidBounds(f"lower bound {lo} exceeds upper bound {hi}")
    return min(max(x, lo), hi)


@dataclass
class TriggerState:
    """Event-trigger channel state; see the module docstring for the laws."""

    held: np.ndarray
    rho: float
    check_period: float
    psi1: np.ndarray
    psi2: np.ndarray
    rho_lo: float = 0.01
    rho_hi: float = 0.99
    kappa: float = 0.01
    mode: str = ADAPTIVE
    last_checked: np.ndarray | None = None
    event_log: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.held = np.asarray(self.held, dtype=float).reshape(-1)
        n = self.held.shape[0]
        self.psi1 = as_matrix(self.psi1, rows=n, cols=n, name="psi1")
        self.psi2 = as_matrix(self.psi2, rows=n, cols=n, name="psi2")
        for name, psi in (("psi1", self.psi1), ("psi2", self.psi2)):
            if np.linalg.norm(psi - psi.T) > 1e-12 * max(1.0, np.linalg.norm(psi)):
                raise ValueError(f"{name} must be symmetric")
            if np.min(np.linalg.eigvalsh(psi)) <= 0.0:
                raise ValueError(f"{name} must be positive definite")
        if not (0.0 < self.rho_lo <= self.rho_hi < 1.0):
            raise ValueError("threshold bounds must satisfy 0 < rho_lo <= rho_hi < 1")
        if not (self.rho_lo <= self.rho <= self.rho_hi):
            raise ValueError("initial threshold must lie inside its bounds")
        if self.check_period <= 0.0:
            raise ValueError("check period must be positive")
        if self.mode not in (ADAPTIVE, STATIC):
            raise ValueError(f"unknown trigger mode {self.mode!r}")
        if self.last_checked is None:
            self.last_checked = self.held.copy()


def initial_transmission(trig: TriggerState, xhat0, t0: float = 0.0) -> None:
    """Seed the channel: the start instant counts as a transmission."""
    trig.held = np.asarray(xhat0, dtype=float).reshape(trig.held.shape).copy()
    trig.last_checked = trig.held.copy()
    trig.event_log.append(t0)


def check_and_update(trig: TriggerState, xhat_now, t: float) -> bool:
    """Run one periodic check; returns True on transmission.

    ``t`` must lie on the check grid.  After the decision, adaptive mode
    updates the threshold; static mode leaves it untouched.
    """
    ratio = t / trig.check_period
    if abs(ratio - round(ratio)) > GRID_REL_TOL * max(1.0, abs(ratio)):
        raise NotOnGrid(f"check at t={t} is not a multiple of {trig.check_period}")
    xhat_now = np.asarray(xhat_now, dtype=float).reshape(-1)
    deviation = trig.held - xhat_now
    lhs = float(deviation @ trig.psi1 @ deviation)
    rhs = trig.rho * float(xhat_now @ trig.psi2 @ xhat_now)
    transmitted = lhs > rhs
    if transmitted:
        trig.held = xhat_now.copy()
        trig.event_log.append(t)
    trig.last_checked = xhat_now.copy()
    if trig.mode == ADAPTIVE:
        update_threshold(trig)
    return transmitted


def update_threshold(trig: TriggerState) -> float:
    """Adaptive threshold step using the held and freshly checked samples."""
    grow = float(trig.held @ trig.psi1 @ trig.held)
    shrink = float(trig.last_checked @ trig.psi2 @ trig.last_checked)
    trig.rho = saturate(trig.rho + trig.kappa * (grow - shrink), trig.rho_lo, trig.rho_hi)
    return trig.rho


def held_value(trig: TriggerState) -> np.ndarray:
    """The last transmitted sample, unchanged between events."""
    return trig.held.copy()
