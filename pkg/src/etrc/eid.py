"""Input-equivalent disturbance estimator and its shaping filter.

The estimator reconstructs a fictitious input-channel disturbance from the
observer innovation, low-pass filters it, and subtracts the filtered value
from the control signal.  Because the raw estimate references the plant
input, which in turn contains the filtered estimate, the algebraic loop is
resolved by substitution: the implemented estimate is

    w_hat = B+ L (y - yhat) + w_tilde

which makes the filter dynamics a well-posed ODE driven by the innovation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .numerics import as_matrix, is_hurwitz, left_pseudo_inverse
from .plant import LtiPlant


@dataclass
class EidState:
    """Shaping-filter state plus the cached pieces of the estimator."""

    x_f: np.ndarray
    a_f: np.ndarray
    b_f: np.ndarray
    c_f: np.ndarray
    b_plus: np.ndarray  # left pseudo-inverse of the plant B, m x n
    enabled: bool = True

    def __post_init__(self):
        self.x_f = np.asarray(self.x_f, dtype=float).reshape(-1)
        nf = self.x_f.shape[0]
        self.a_f = as_matrix(self.a_f, rows=nf, cols=nf, name="A_f")
        self.b_f = as_matrix(self.b_f, rows=nf, name="B_f")
        self.c_f = as_matrix(self.c_f, cols=nf, name="C_f")
        self.b_plus = as_matrix(self.b_plus, name="B_plus")
        if not is_hurwitz(self.a_f):
            raise ValueError("shaping filter A_f must be Hurwitz")


def first_order_estimator(plant: LtiPlant, w_f: float = 100.0, enabled: bool = True) -> EidState:
    """Per-channel first-order filter w_f/(s + w_f) with unit DC gain.

    For the single-input benchmark this is A_f = -w_f, B_f = w_f, C_f = 1.
    """
    if w_f <= 0.0:
        raise ValueError("filter cutoff w_f must be positive")
    m = plant.m
    eye = np.eye(m)
    return EidState(
        x_f=np.zeros(m),
        a_f=-w_f * eye,
        b_f=w_f * eye,
        c_f=eye.copy(),
        b_plus=left_pseudo_inverse(plant.b),
        enabled=enabled,
    )


def filter_output(eid: EidState):
    """w_tilde = C_f x_f."""
    return eid.c_f @ eid.x_f


def eid_estimate(eid: EidState, gain_l, y, yhat, w_tilde):
    """w_hat = B+ L (y - yhat) + w_tilde (loop-resolved form)."""
    gain_l = np.atleast_2d(np.asarray(gain_l, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    yhat = np.asarray(yhat, dtype=float).reshape(-1)
    w_tilde = np.asarray(w_tilde, dtype=float).reshape(-1)
    if y.shape != yhat.shape:
        raise DimensionMismatch(f"y {y.shape} vs yhat {yhat.shape}")
    if gain_l.shape[1] != y.shape[0]:
        raise DimensionMismatch("L columns must match output dimension")
    return eid.b_plus @ (gain_l @ (y - yhat)) + w_tilde


def eid_filter_derivative(eid: EidState, w_hat):
    """dx_f/dt = A_f x_f + B_f w_hat."""
    w_hat = np.asarray(w_hat, dtype=float).reshape(-1)
    if w_hat.shape[0] != eid.b_f.shape[1]:
        raise DimensionMismatch(
            f"expected w_hat({eid.b_f.shape[1]}), got {w_hat.shape[0]}")
    return eid.a_f @ eid.x_f + eid.b_f @ w_hat


def total_control(u_f, eid: EidState):
    """u = u_f - w_tilde when the estimator is enabled, else u = u_f."""
    u_f = np.asarray(u_f, dtype=float).reshape(-1)
    if not eid.enabled:
        return u_f.copy()
    return u_f - filter_output(eid)
