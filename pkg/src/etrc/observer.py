"""Full-state observer driven by the pre-compensation control signal."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotObservable, UnsupportedMultiOutput
from .numerics import as_matrix
from .plant import LtiPlant


@dataclass
class ObserverState:
    xhat: np.ndarray
    gain: np.ndarray  # L, n x p

    def __post_init__(self):
        self.xhat = np.asarray(self.xhat, dtype=float).reshape(-1)
        self.gain = as_matrix(self.gain, rows=self.xhat.shape[0], name="L")


def observer_derivative(plant: LtiPlant, obs: ObserverState, u_f, y):
    """A xhat + B u_f + L (y - C xhat).

    The drive term is the pre-compensation signal ``u_f``, not the plant
    input: the observer is deliberately blind to the disturbance correction,
    which is what pushes the disturbance into the innovation.
    """
    u_f = np.asarray(u_f, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if u_f.shape[0] != plant.m or y.shape[0] != plant.p:
        raise DimensionMismatch(
            f"expected u_f({plant.m}), y({plant.p}); got {u_f.shape[0]}, {y.shape[0]}")
    innovation = y - plant.c @ obs.xhat
    return plant.a @ obs.xhat + plant.b @ u_f + obs.gain @ innovation


def estimation_error(x, xhat):
    """x - xhat."""
    x = np.asarray(x, dtype=float).reshape(-1)
    xhat = np.asarray(xhat, dtype=float).reshape(-1)
    if x.shape != xhat.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {xhat.shape}")
    return x - xhat


def place_observer_poles(plant: LtiPlant, poles) -> np.ndarray:
    """Observer gain L so that eig(A - L C) matches ``poles``.

    Single-output Ackermann placement: L = q(A) O^-1 e_n, with q the desired
    characteristic polynomial and O the observability matrix.  The pole list
    must be closed under conjugation.
    """
    if plant.p != 1:
        raise UnsupportedMultiOutput("pole placement implemented for p = 1 only")
    poles = np.asarray(poles, dtype=complex).reshape(-1)
    n = plant.n
    if poles.shape[0] != n:
        raise DimensionMismatch(f"need exactly {n} poles, got {poles.shape[0]}")
    coeffs = np.poly(poles)
    if np.max(np.abs(coeffs.imag)) > 1e-9 * max(1.0, np.max(np.abs(coeffs.real))):
        raise ValueError("pole set must be closed under conjugation")
    coeffs = coeffs.real

    obsv = np.vstack([plant.c @ np.linalg.matrix_power(plant.a, k) for k in range(n)])
    sv = np.linalg.svd(obsv, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise NotObservable("observability matrix is rank deficient")

    q_a = np.zeros_like(plant.a)
    for c in coeffs:  # Horner evaluation of q(A)
        q_a = q_a @ plant.a + c * np.eye(n)
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    return (q_a @ np.linalg.solve(obsv, e_n)).reshape(n, 1)
