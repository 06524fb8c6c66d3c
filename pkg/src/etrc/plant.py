"""Controlled LTI system and closed-form exogenous signal generators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .numerics import as_matrix

RANK_TOL = 1e-8  # singular values below RANK_TOL * sigma_max count as zero


@dataclass
class LtiPlant:
    """Linear time-invariant plant dx/dt = A x + B u + B_w w, y = C x.

    The pair (A, B) must be controllable and (A, C) observable; both are
    rank-checked at construction.  ``b_w`` defaults to ``b`` (disturbance
    entering through the input channel).
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    b_w: np.ndarray | None = None

    def __post_init__(self):
        self.a = as_matrix(self.a, name="A")
        n = self.a.shape[0]
        if self.a.shape[1] != n:
            raise DimensionMismatch("A must be square")
        self.b = as_matrix(self.b, rows=n, name="B")
        self.c = as_matrix(self.c, cols=n, name="C")
        self.b_w = self.b.copy() if self.b_w is None else as_matrix(self.b_w, rows=n, name="B_w")
        if _ctrb_rank(self.a, self.b) < n:
            raise ValueError("(A, B) is not controllable")
        if _ctrb_rank(self.a.T, self.c.T) < n:
            raise ValueError("(A, C) is not observable")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[1]

    @property
    def p(self) -> int:
        return self.c.shape[0]


def _ctrb_rank(a, b) -> int:
    """Rank of [B, AB, ..., A^(n-1)B] with a relative SVD threshold."""
    n = a.shape[0]
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    sv = np.linalg.svd(np.hstack(blocks), compute_uv=False)
    return int(np.sum(sv > RANK_TOL * sv[0]))


def plant_derivative(plant: LtiPlant, x, u, w):
    """A x + B u + B_w w."""
    x = np.asarray(x, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    w = np.asarray(w, dtype=float).reshape(-1)
    if x.shape[0] != plant.n or u.shape[0] != plant.m or w.shape[0] != plant.b_w.shape[1]:
        raise DimensionMismatch(
            f"expected x({plant.n}), u({plant.m}), w({plant.b_w.shape[1]}); "
            f"got {x.shape[0]}, {u.shape[0]}, {w.shape[0]}")
    return plant.a @ x + plant.b @ u + plant.b_w @ w


def plant_output(plant: LtiPlant, x):
    """C x."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != plant.n:
        raise DimensionMismatch(f"expected x({plant.n}), got {x.shape[0]}")
    return plant.c @ x


@dataclass
class SineTerm:
    amplitude: float
    omega: float  # rad/s

    def __post_init__(self):
        if self.omega < 0.0:
            raise ValueError("angular frequency must be nonnegative")


@dataclass
class Window:
    t_start: float
    t_end: float
    terms: list[SineTerm] = field(default_factory=list)

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("window must satisfy t_start < t_end")


@dataclass
class SignalSpec:
    """Closed-form scalar signal: sums of sines, optionally windowed, plus
    steps, composed freely.  ``kind`` is one of ``zero``, ``step``,
    ``sum_of_sines``, ``windowed_sum_of_sines``, ``composite``.
    """

    kind: str = "zero"
    terms: list[SineTerm] = field(default_factory=list)
    windows: list[Window] = field(default_factory=list)
    step_time: float = 0.0
    step_amplitude: float = 0.0
    parts: list["SignalSpec"] = field(default_factory=list)

    KINDS = ("zero", "step", "sum_of_sines", "windowed_sum_of_sines", "composite")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")


def eval_signal(spec: SignalSpec, t: float) -> float:
    """Value of the signal at time t; windowed signals are 0 outside
    every window, steps are active from ``step_time`` onwards."""
    if spec.kind == "zero":
        return 0.0
    if spec.kind == "step":
        return spec.step_amplitude if t >= spec.step_time else 0.0
    if spec.kind == "sum_of_sines":
        return float(sum(tm.amplitude * np.sin(tm.omega * t) for tm in spec.terms))
    if spec.kind == "windowed_sum_of_sines":
        total = 0.0
        for win in spec.windows:
            if win.t_start <= t <= win.t_end:
                total += sum(tm.amplitude * np.sin(tm.omega * t) for tm in win.terms)
        return float(total)
    return float(sum(eval_signal(p, t) for p in spec.parts))


def eval_signal_derivative(spec: SignalSpec, t: float) -> float:
    """Analytic time derivative; steps and window edges contribute 0."""
    if spec.kind in ("zero", "step"):
        return 0.0
    if spec.kind == "sum_of_sines":
        return float(sum(tm.amplitude * tm.omega * np.cos(tm.omega * t) for tm in spec.terms))
    if spec.kind == "windowed_sum_of_sines":
        total = 0.0
        for win in spec.windows:
            if win.t_start <= t <= win.t_end:
                total += sum(tm.amplitude * tm.omega * np.cos(tm.omega * t) for tm in win.terms)
        return float(total)
    return float(sum(eval_signal_derivative(p, t) for p in spec.parts))


def signal_on_grid(spec: SignalSpec, times: np.ndarray) -> np.ndarray:
    """Vectorized evaluation on a time grid (used by the simulation engine)."""
    out = np.zeros_like(times)
    _accumulate(spec, times, out)
    return out


def signal_derivative_on_grid(spec: SignalSpec, times: np.ndarray) -> np.ndarray:
    """Vectorized analytic derivative on a time grid."""
    out = np.zeros_like(times)
    _accumulate_derivative(spec, times, out)
    return out


def _accumulate_derivative(spec: SignalSpec, times: np.ndarray, out: np.ndarray) -> None:
    if spec.kind in ("zero", "step"):
        return
    if spec.kind == "sum_of_sines":
        for tm in spec.terms:
            out += tm.amplitude * tm.omega * np.cos(tm.omega * times)
        return
    if spec.kind == "windowed_sum_of_sines":
        for win in spec.windows:
            mask = (times >= win.t_start) & (times <= win.t_end)
            for tm in win.terms:
                out += np.where(mask, tm.amplitude * tm.omega * np.cos(tm.omega * times), 0.0)
        return
    for p in spec.parts:
        _accumulate_derivative(p, times, out)


def _accumulate(spec: SignalSpec, times: np.ndarray, out: np.ndarray) -> None:
    if spec.kind == "zero":
        return
    if spec.kind == "step":
        out += np.where(times >= spec.step_time, spec.step_amplitude, 0.0)
        return
    if spec.kind == "sum_of_sines":
        for tm in spec.terms:
            out += tm.amplitude * np.sin(tm.omega * times)
        return
    if spec.kind == "windowed_sum_of_sines":
        for win in spec.windows:
            mask = (times >= win.t_start) & (times <= win.t_end)
            for tm in win.terms:
                out += np.where(mask, tm.amplitude * np.sin(tm.omega * times), 0.0)
        return
    for p in spec.parts:
        _accumulate(p, times, out)


def paper_reference() -> SignalSpec:
    """The rotational-system tracking reference: three odd harmonics of a
    2-second period."""
    pi = np.pi
    return SignalSpec(kind="sum_of_sines",
                      terms=[SineTerm(1.0, pi), SineTerm(0.5, 2 * pi), SineTerm(0.5, 3 * pi)])


def paper_disturbance() -> SignalSpec:
    """Two windowed sine bursts: a three-tone burst on [6, 8] s and a single
    tone on [12, 18] s."""
    pi = np.pi
    return SignalSpec(kind="composite", parts=[
        SignalSpec(kind="windowed_sum_of_sines", windows=[
            Window(6.0, 8.0, [SineTerm(2.0, 4 * pi), SineTerm(1.0, 5 * pi), SineTerm(1.0, 6 * pi)]),
        ]),
        SignalSpec(kind="windowed_sum_of_sines", windows=[
            Window(12.0, 18.0, [SineTerm(3.0, 2 * pi)]),
        ]),
    ])


def paper_plant() -> LtiPlant:
    """The rotational-system benchmark plant (speed-control model)."""
    a = np.array([[-31.31, 0.0, -2.83e4],
                  [0.0, -10.25, 8001.0],
                  [1.0, -1.0, 0.0]])
    b = np.array([[28.06], [0.0], [0.0]])
    c = np.array([[1.0, 0.0, 0.0]])
    return LtiPlant(a, b, c)
