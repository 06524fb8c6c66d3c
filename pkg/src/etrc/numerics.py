"""Dense linear-algebra kernels, Riccati/Lyapunov machinery, fixed-step
integration, and delayed-signal storage.

Everything in this module operates on plain ``numpy.float64`` arrays.  The
Riccati solver is a Newton-Kleinman iteration: each sweep solves a Lyapunov
equation (Bartels-Stewart, via SciPy's real-Schur implementation) for the
current stabilizing gain and converges quadratically to the stabilizing
solution.  The initial stabilizing gain comes from Bass's eigenvalue-shift
construction.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm as _expm
from scipy.linalg import solve_continuous_lyapunov

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonFinite,
    NonStabilizable,
    Overflow,
    OutOfRange,
    RankDeficient,
    Singular,
)

TOL_CARE = 1e-9
TOL_HURWITZ = 1e-9

__all__ = [
    "TOL_CARE",
    "TOL_HURWITZ",
    "HistoryBuffer",
    "as_matrix",
    "require_finite",
    "is_hurwitz",
    "matrix_exponential",
    "left_pseudo_inverse",
    "care_residual",
    "solve_care",
    "rk4_step",
]


def as_matrix(value, rows=None, cols=None, name="matrix"):
    """Coerce to a 2-D float64 array, checking shape and finiteness."""
    a = np.atleast_2d(np.asarray(value, dtype=float))
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={a.ndim}")
    if rows is not None and a.shape[0] != rows:
        raise DimensionMismatch(f"{name} must have {rows} rows, got {a.shape[0]}")
    if cols is not None and a.shape[1] != cols:
        raise DimensionMismatch(f"{name} must have {cols} cols, got {a.shape[1]}")
    require_finite(a, name)
    return a


def require_finite(a, name="value"):
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} contains NaN or infinity")
    return a


def is_hurwitz(a) -> bool:
    """True iff every eigenvalue of the square matrix has real part < -tol."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"square matrix required, got shape {a.shape}")
    return bool(np.max(np.linalg.eigvals(a).real) < -TOL_HURWITZ)


def matrix_exponential(a, t: float):
    """exp(a * t) by scaling-and-squaring with Pade approximation."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"square matrix required, got shape {a.shape}")
    if not np.isfinite(t):
        raise NonFinite("time must be finite")
    result = _expm(a * t)
    if not np.all(np.isfinite(result)):
        raise Overflow(f"exp(A*t) overflowed for ||A*t|| = {np.linalg.norm(a * t):.3e}")
    return result


def left_pseudo_inverse(b):
    """(B^T B)^-1 B^T for a full-column-rank B; satisfies pinv(B) @ B = I."""
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.shape[0] < b.shape[1]:
        raise RankDeficient(f"need rows >= cols, got shape {b.shape}")
    gram = b.T @ b
    if np.linalg.cond(gram) > 1e12:
        raise RankDeficient("B^T B is singular: B is not full column rank")
    return np.linalg.solve(gram, b.T)


def care_residual(a, b, q, r, k) -> float:
    """Normalized Frobenius residual of A'K + KA - KBR^-1B'K + Q."""
    rbk = np.linalg.solve(r, b.T @ k)
    res = a.T @ k + k @ a - k @ b @ rbk + q
    return float(np.linalg.norm(res) / max(1.0, np.linalg.norm(q)))


def _stabilizing_gain(a, b):
    """Initial gain F with A - B F Hurwitz, by Bass's eigenvalue shift.

    Solves (A + beta I) Z + Z (A + beta I)' = 2 B B' and takes F = B' Z^-1;
    the shifted Lyapunov identity then certifies A - B F.
    """
    n = a.shape[0]
    if is_hurwitz(a):
        return np.zeros((b.shape[1], n))
    beta = float(np.linalg.norm(a, "fro")) + 0.5
    z = solve_continuous_lyapunov(a + beta * np.eye(n), 2.0 * b @ b.T)
    z = 0.5 * (z + z.T)
    # Z is singular when the pair is stabilizable but not controllable; the
    # pseudo-inverse still certifies, since range(Z) contains range(B)
    f = b.T @ np.linalg.pinv(z, rcond=1e-12)
    if not is_hurwitz(a - b @ f):
        raise NonStabilizable("no stabilizing initial gain found")
    return f


def solve_care(a, b, q, r, tol: float = TOL_CARE, max_iter: int = 100):
    """Stabilizing solution K of A'K + KA - KBR^-1B'K + Q = 0.

    Newton-Kleinman: with a stabilizing gain F_i, solve the Lyapunov equation
    (A - B F_i)' K + K (A - B F_i) = -(Q + F_i' R F_i) and update
    F_{i+1} = R^-1 B' K.  Iterates monotonically down to the stabilizing
    solution; each Lyapunov solve uses the Bartels-Stewart Schur approach.

    Raises Singular if R is not symmetric positive definite, NonStabilizable
    if no stabilizing gain exists, NoConvergence if the residual never
    reaches ``tol``.
    """
    a = as_matrix(a, name="A")
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionMismatch("A must be square")
    b = as_matrix(b, rows=n, name="B")
    m = b.shape[1]
    q = as_matrix(q, rows=n, cols=n, name="Q")
    r = as_matrix(r, rows=m, cols=m, name="R")
    if np.linalg.norm(q - q.T) > 1e-10 * max(1.0, np.linalg.norm(q)):
        raise ValueError("Q must be symmetric")
    if np.linalg.norm(r - r.T) > 1e-12 * max(1.0, np.linalg.norm(r)):
        raise Singular("R must be symmetric")
    try:
        np.linalg.cholesky(r)
    except np.linalg.LinAlgError as exc:
        raise Singular("R must be positive definite") from exc
    if np.min(np.linalg.eigvalsh(0.5 * (q + q.T))) < -1e-8 * max(1.0, np.linalg.norm(q)):
        raise ValueError("Q must be positive semidefinite")

    f = _stabilizing_gain(a, b)
    k = np.zeros((n, n))
    res_prev = np.inf
    for _ in range(max_iter):
        acl = a - b @ f
        k = solve_continuous_lyapunov(acl.T, -(q + f.T @ r @ f))
        k = 0.5 * (k + k.T)
        f = np.linalg.solve(r, b.T @ k)
        res = care_residual(a, b, q, r, k)
        # stop once below tol and no longer improving (numerical floor)
        if res < 1e-14 or (res < tol and res >= 0.5 * res_prev):
            break
        res_prev = res
    if care_residual(a, b, q, r, k) >= tol:
        raise NoConvergence(
            f"CARE residual {care_residual(a, b, q, r, k):.3e} did not reach "
            f"tol {tol:.1e} within {max_iter} Newton sweeps")
    if not is_hurwitz(a - b @ np.linalg.solve(r, b.T @ k)):
        raise NonStabilizable("converged K does not stabilize the pair")
    return k


class HistoryBuffer:
    """Fixed-step ring buffer of past vector samples.

    Samples are appended one grid step apart starting at ``t_first``.  Reads
    round the requested time to the nearest grid point; requests older than
    the retained window raise OutOfRange, while requests before ``t_first``
    clamp to the oldest sample (the initial-history window).
    """

    def __init__(self, step: float, capacity: int, t_first: float, dim: int = 1):
        if step <= 0.0:
            raise ValueError("step must be positive")
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.step = float(step)
        self.capacity = int(capacity)
        self.t_first = float(t_first)
        self.dim = int(dim)
        self._data = np.zeros((self.capacity, self.dim))
        self._count = 0  # total samples ever appended

    def append(self, value) -> None:
        v = np.asarray(value, dtype=float).reshape(self.dim)
        require_finite(v, "history sample")
        self._data[self._count % self.capacity] = v
        self._count += 1

    def extend_constant(self, value, n: int) -> None:
        for _ in range(n):
            self.append(value)

    @property
    def newest_time(self) -> float:
        if self._count == 0:
            raise OutOfRange("buffer is empty")
        return self.t_first + (self._count - 1) * self.step

    def sample(self, t: float):
        """Stored value at the grid point nearest ``t``."""
        if self._count == 0:
            raise OutOfRange("buffer is empty")
        idx = round((t - self.t_first) / self.step)
        if idx < 0:
            idx = 0  # clamp inside the initial-history window
        if idx >= self._count:
            raise OutOfRange(
                f"t={t} is newer than the last stored sample "
                f"({self.newest_time})")
        oldest = self._count - self.capacity
        if idx < oldest:
            raise OutOfRange(
                f"t={t} is older than the retained history window")
        return self._data[idx % self.capacity].copy()


def rk4_step(f, t: float, x, h: float):
    """One classical fourth-order Runge-Kutta step of ``dx/dt = f(t, x)``."""
    if h <= 0.0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    k1 = np.asarray(f(t, x), dtype=float)
    k2 = np.asarray(f(t + 0.5 * h, x + 0.5 * h * k1), dtype=float)
    k3 = np.asarray(f(t + 0.5 * h, x + 0.5 * h * k2), dtype=float)
    k4 = np.asarray(f(t + h, x + h * k3), dtype=float)
    out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NonFinite("vector field returned NaN or infinity")
    return out
