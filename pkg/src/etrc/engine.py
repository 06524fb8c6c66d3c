"""Deterministic fixed-step closed-loop simulator.

One scenario couples the plant, the full-state observer, the repetitive
internal model, the disturbance estimator, and the event-triggered channel
on a uniform grid of step ``h``.  The composite continuous state
``(x, xhat, x_a, x_f)`` advances with classical RK4; within a step the held
observer sample, the feedforward value, and the period-delayed internal
model state are frozen, while the reference and disturbance are evaluated
at the stage times.  Event checks run on the coarser check grid, before the
control evaluation of that step.  Runs are seed-free and bit-reproducible.

Grid discipline: the repetitive period, the check period, and the horizon
must all be exact multiples of ``h`` so delayed lookups land on stored
samples and no interpolation ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import apetm
from .eid import EidState, first_order_estimator
from .errors import ConfigError, Diverged
from .numerics import HistoryBuffer, is_hurwitz, matrix_exponential
from .plant import (LtiPlant, SignalSpec, signal_derivative_on_grid,
                    signal_on_grid)
from .synthesis import (AugmentedSystem, GainSet, simpson_nodes,
                        preview_matrix)

CONTINUOUS = "continuous"
TRIGGER_MODES = (apetm.ADAPTIVE, apetm.STATIC, CONTINUOUS)

DIVERGENCE_LIMIT = 1e9


@dataclass
class TriggerConfig:
    check_period: float = 0.5
    rho0: float = 0.01
    rho_lo: float = 0.01
    rho_hi: float = 0.99
    kappa: float = 0.01
    psi1: np.ndarray | None = None  # defaults to identity
    psi2: np.ndarray | None = None


@dataclass
class PreviewConfig:
    t_r: float = 0.0
    quad_step: float = 0.005


@dataclass
class Scenario:
    plant: LtiPlant
    gains: GainSet
    reference: SignalSpec
    disturbance: SignalSpec
    w_a: float = 100.0
    period: float = 2.0
    w_f: float = 100.0
    eid_enabled: bool = True
    trigger: TriggerConfig = field(default_factory=TriggerConfig)
    trigger_mode: str = apetm.ADAPTIVE
    horizon: float = 25.0
    h: float = 1e-4
    preview: PreviewConfig = field(default_factory=PreviewConfig)
    # synthesis context, needed only when the preview horizon is nonzero
    augmented: AugmentedSystem | None = None
    r_weight: np.ndarray | None = None

    def __post_init__(self):
        if self.plant.p != 1 or self.plant.m != 1:
            raise ConfigError("the simulator couples single-input, "
                              "single-output plants")
        if self.plant.b_w.shape[1] != 1:
            raise ConfigError("the simulator drives a scalar disturbance channel")
        if self.trigger_mode not in TRIGGER_MODES:
            raise ConfigError(f"trigger_mode must be one of {TRIGGER_MODES}")
        if self.gains.observer_gain is None:
            raise ConfigError("scenario gains must carry an observer gain L")
        for name, value in (("period", self.period),
                            ("check period", self.trigger.check_period),
                            ("horizon", self.horizon)):
            steps = value / self.h
            if abs(steps - round(steps)) > 1e-6:
                raise ConfigError(
                    f"{name} {value} is not an integer multiple of h = {self.h}")
        l_gain = np.asarray(self.gains.observer_gain, dtype=float).reshape(self.plant.n, 1)
        if not is_hurwitz(self.plant.a - l_gain @ self.plant.c):
            raise ConfigError("A - L C is not Hurwitz: observer gain rejected")


@dataclass
class Trace:
    """Uniform-grid record of every loop signal plus the event log."""

    h: float
    t: np.ndarray
    y: np.ndarray
    y_ref: np.ndarray
    error: np.ndarray
    u: np.ndarray
    u_f: np.ndarray
    w_true: np.ndarray
    w_hat: np.ndarray
    w_tilde: np.ndarray
    v: np.ndarray
    x_a: np.ndarray
    rho: np.ndarray
    transmitted: np.ndarray
    x: np.ndarray
    xhat: np.ndarray
    event_log: list[float]

    def __len__(self):
        return self.t.shape[0]

    COLUMNS_SCALAR = ("t", "y", "y_ref", "error", "u", "u_f", "w_true",
                      "w_hat", "w_tilde", "v", "x_a", "rho", "transmitted")


def _feedforward_table(s: Scenario, times_half: np.ndarray):
    """Preview feedforward evaluated on the half grid (zero horizon: zeros).

    The quadrature node matrices depend only on the node offsets, so they
    are built once and the time dependence reduces to vectorized signal
    evaluations; the result matches ``compute_feedforward`` pointwise.
    """
    n_half = times_half.shape[0]
    m = s.plant.m
    if s.preview.t_r == 0.0:
        return np.zeros((n_half, m))
    if s.augmented is None or s.r_weight is None:
        raise ConfigError("preview feedforward needs the augmentation and R")
    aug, gains, r = s.augmented, s.gains, s.r_weight
    a_c = preview_matrix(aug, gains, r)
    delta, weights = simpson_nodes(s.preview.t_r, s.preview.quad_step)
    kd = (gains.riccati @ aug.d_bar).ravel()
    kd1 = (gains.riccati @ aug.d1_bar).ravel()
    gain_row = -np.linalg.solve(np.asarray(r, dtype=float), aug.b_bar.T)  # m x n_bar
    out = np.zeros((n_half, m))
    dr_needed = bool(np.any(signal_derivative_on_grid(
        s.reference, np.linspace(times_half[0], times_half[-1] + s.preview.t_r, 97)) != 0.0))
    for d, w in zip(delta, weights):
        r_vals = signal_on_grid(s.reference, times_half + d)
        if np.any(r_vals != 0.0):
            coeff = gain_row @ (matrix_exponential(a_c, d) @ kd)
            out += np.outer(w * r_vals, coeff)
        if dr_needed:
            dr_vals = signal_derivative_on_grid(s.reference, times_half + d)
            coeff = gain_row @ (matrix_exponential(a_c, -d) @ kd1)
            out += np.outer(w * dr_vals, coeff)
    return out


def _loop_matrix(s: Scenario, eid: EidState):
    """Stacked linear part of the coupled dynamics.

    State layout: [x (n), xhat (n), x_a (1), x_f (nf)].  The event-held
    sample, the delayed internal-model state, and the exogenous signals
    enter as forcing terms.
    """
    plant = s.plant
    n, m = plant.n, plant.m
    nf = eid.x_f.shape[0]
    nx = 2 * n + 1 + nf
    a, b, c = plant.a, plant.b, plant.c
    l_col = np.asarray(s.gains.observer_gain, dtype=float).reshape(n, 1)
    kc = s.gains.k_c[:, 0]          # (m,)
    bkc = b @ kc                    # (n,)
    lc = l_col @ c                  # n x n
    bl = eid.b_f @ (eid.b_plus @ l_col)  # nf x 1

    big = np.zeros((nx, nx))
    x_sl, xh_sl = slice(0, n), slice(n, 2 * n)
    ia = 2 * n
    f_sl = slice(2 * n + 1, nx)

    big[x_sl, x_sl] = a - np.outer(bkc, c)
    if eid.enabled:
        big[x_sl, f_sl] = -b @ eid.c_f
    big[xh_sl, x_sl] = -np.outer(bkc, c) + lc
    big[xh_sl, xh_sl] = a - lc
    big[ia, x_sl] = -s.w_a * c.ravel()
    big[ia, ia] = -s.w_a
    big[f_sl, f_sl] = eid.a_f + eid.b_f @ eid.c_f
    big[f_sl, x_sl] = bl @ c
    big[f_sl, xh_sl] = -bl @ c
    return big


def run_scenario(s: Scenario) -> Trace:
    """Integrate the closed loop over the scenario horizon."""
    plant = s.plant
    n = plant.n
    h = s.h
    n_delay = round(s.period / h)
    n_check = round(s.trigger.check_period / h)
    n_steps = round(s.horizon / h)

    eid = first_order_estimator(plant, s.w_f, s.eid_enabled)
    nf = eid.x_f.shape[0]
    nx = 2 * n + 1 + nf
    big = _loop_matrix(s, eid)

    times_half = np.arange(2 * n_steps + 1) * (h / 2.0)
    yr_half = signal_on_grid(s.reference, times_half)
    w_half = signal_on_grid(s.disturbance, times_half)
    f1_half = _feedforward_table(s, times_half)

    b = plant.b
    c_row = plant.c.ravel()
    b_w = plant.b_w
    kp = s.gains.k_p
    kc = s.gains.k_c[:, 0]
    l_col = np.asarray(s.gains.observer_gain, dtype=float).reshape(n, 1)
    bplus_l = (eid.b_plus @ l_col).ravel()
    c_f = eid.c_f

    # forcing rows that depend only on the stage index
    f_pre = np.zeros((2 * n_steps + 1, nx))
    f_pre[:, 0:n] = np.outer(yr_half, b @ kc) + np.outer(w_half, b_w.ravel()) \
        + f1_half @ b.T
    f_pre[:, n:2 * n] = np.outer(yr_half, b @ kc) + f1_half @ b.T
    f_pre[:, 2 * n] = s.w_a * yr_half

    # per-step forcing directions for the frozen delayed state
    v_delay = np.zeros(nx)
    v_delay[0:n] = b @ kc
    v_delay[n:2 * n] = b @ kc
    v_delay[2 * n] = s.w_a

    history = HistoryBuffer(step=h, capacity=n_delay + n_steps + 2,
                            t_first=-s.period, dim=1)
    history.extend_constant(0.0, n_delay + 1)  # zero state on [-period, 0]

    trig = None
    if s.trigger_mode != CONTINUOUS:
        tcfg = s.trigger
        psi1 = np.eye(n) if tcfg.psi1 is None else np.asarray(tcfg.psi1, dtype=float)
        psi2 = np.eye(n) if tcfg.psi2 is None else np.asarray(tcfg.psi2, dtype=float)
        trig = apetm.TriggerState(held=np.zeros(n), rho=tcfg.rho0,
                                  check_period=tcfg.check_period,
                                  psi1=psi1, psi2=psi2,
                                  rho_lo=tcfg.rho_lo, rho_hi=tcfg.rho_hi,
                                  kappa=tcfg.kappa, mode=s.trigger_mode)
        apetm.initial_transmission(trig, np.zeros(n), 0.0)

    rec = {name: np.empty(n_steps + 1) for name in
           ("y", "error", "u", "u_f", "w_hat", "w_tilde", "v", "rho")}
    transmitted = np.zeros(n_steps + 1, dtype=np.int8)
    transmitted[0] = 1  # start counts as a transmission
    x_rec = np.empty((n_steps + 1, n))
    xhat_rec = np.empty((n_steps + 1, n))
    xa_rec = np.empty(n_steps + 1)

    state = np.zeros(nx)
    held = np.zeros(n)
    bh = np.zeros(nx)  # forcing from the held sample; updated on events

    def refresh_held_forcing():
        drive = b @ (kp @ held)
        bh[0:n] = drive
        bh[n:2 * n] = drive

    refresh_held_forcing()
    event_log = [0.0] if s.trigger_mode == CONTINUOUS else trig.event_log

    for k in range(n_steps + 1):
        t = k * h
        if s.trigger_mode == CONTINUOUS:
            held = state[n:2 * n].copy()
            refresh_held_forcing()
        elif k > 0 and k % n_check == 0:
            if apetm.check_and_update(trig, state[n:2 * n], t):
                held = trig.held
                refresh_held_forcing()
                transmitted[k] = 1

        x = state[0:n]
        xhat = state[n:2 * n]
        x_a = state[2 * n]
        x_f = state[2 * n + 1:]
        delayed = float(history.sample(t - s.period)[0])

        y = float(c_row @ x)
        yhat = float(c_row @ xhat)
        err = yr_half[2 * k] - y
        v = delayed + err
        u_f = kp @ held + kc * v + f1_half[2 * k]
        w_tilde = c_f @ x_f
        u = u_f - w_tilde if s.eid_enabled else u_f.copy()
        w_hat = bplus_l * (y - yhat) + w_tilde

        rec["y"][k] = y
        rec["error"][k] = err
        rec["u"][k] = u[0]
        rec["u_f"][k] = u_f[0]
        rec["w_hat"][k] = w_hat[0]
        rec["w_tilde"][k] = w_tilde[0]
        rec["v"][k] = v
        rec["rho"][k] = trig.rho if trig is not None else s.trigger.rho0
        x_rec[k] = x
        xhat_rec[k] = xhat
        xa_rec[k] = x_a

        if k == n_steps:
            break

        # RK4 with the held sample and the delayed state frozen in the step
        j = 2 * k
        base0 = f_pre[j] + bh
        base1 = f_pre[j + 1] + bh
        base2 = f_pre[j + 2] + bh
        dvec = v_delay * delayed
        k1 = big @ state + base0 + dvec
        k2 = big @ (state + (0.5 * h) * k1) + base1 + dvec
        k3 = big @ (state + (0.5 * h) * k2) + base1 + dvec
        k4 = big @ (state + h * k3) + base2 + dvec
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if not np.all(np.isfinite(state)) or np.abs(state).max() > DIVERGENCE_LIMIT:
            raise Diverged(f"state left the admissible range at t = {t + h:.6g} s")
        history.append(state[2 * n])

    return Trace(
        h=h,
        t=np.arange(n_steps + 1) * h,
        y=rec["y"],
        y_ref=yr_half[::2].copy(),
        error=rec["error"],
        u=rec["u"],
        u_f=rec["u_f"],
        w_true=w_half[::2].copy(),
        w_hat=rec["w_hat"],
        w_tilde=rec["w_tilde"],
        v=rec["v"],
        x_a=xa_rec,
        rho=rec["rho"],
        transmitted=transmitted,
        x=x_rec,
        xhat=xhat_rec,
        event_log=list(event_log),
    )


def build_analysis_matrices(s: Scenario) -> dict:
    """Coefficient blocks of the delay-augmented closed loop, for diagnosis.

    These blocks describe the same dynamics the simulator integrates, written
    as one interconnected system; the Hurwitz report covers the two
    delay-free diagonal blocks (observer error and estimator filter).
    """
    plant = s.plant
    eid = first_order_estimator(plant, s.w_f, s.eid_enabled)
    a, b, c = plant.a, plant.b, plant.c
    l_col = np.asarray(s.gains.observer_gain, dtype=float).reshape(plant.n, 1)
    kc = s.gains.k_c
    kp = s.gains.k_p
    obs_block = a - l_col @ c
    filt_block = eid.a_f + eid.b_f @ eid.c_f
    return {
        "plant_closed": a - b @ kc @ c,
        "plant_delay_gain": b @ kc,
        "plant_held_gain": b @ kp,
        "plant_filter_coupling": -b @ eid.c_f,
        "observer_error": obs_block,
        "mrc_leak": -s.w_a,
        "mrc_delay_gain": s.w_a,
        "mrc_output_coupling": -s.w_a * c,
        "filter_closed": filt_block,
        "filter_innovation_gain": eid.b_f @ (eid.b_plus @ l_col) @ c,
        "hurwitz": {
            "observer_error": is_hurwitz(obs_block),
            "filter_closed": is_hurwitz(filt_block),
        },
        "spectra": {
            "observer_error": np.linalg.eigvals(obs_block),
            "filter_closed": np.linalg.eigvals(filt_block),
        },
    }
