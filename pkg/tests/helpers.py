"""Small shared helpers for the test suite."""

import numpy as np

from etrc.engine import Trace


def make_trace(error, u=None, h=0.5, events=(0.0,)):
    """Minimal trace around a given error sequence (states zeroed)."""
    error = np.asarray(error, dtype=float)
    n = error.shape[0]
    zeros = np.zeros(n)
    u = zeros if u is None else np.asarray(u, dtype=float)
    transmitted = np.zeros(n, dtype=np.int8)
    for te in events:
        transmitted[int(round(te / h))] = 1
    return Trace(h=h, t=np.arange(n) * h, y=zeros.copy(), y_ref=zeros.copy(),
                 error=error, u=u, u_f=u.copy(), w_true=zeros.copy(),
                 w_hat=zeros.copy(), w_tilde=zeros.copy(), v=zeros.copy(),
                 x_a=zeros.copy(), rho=np.full(n, 0.01),
                 transmitted=transmitted, x=np.zeros((n, 3)),
                 xhat=np.zeros((n, 3)), event_log=list(events))


def brute_force_metrics(error) -> dict:
    """Reference accumulation of the error indices, one term at a time."""
    acc_sq = 0.0
    acc_abs = 0.0
    for e in error:
        acc_sq += float(e) * float(e)
        acc_abs += abs(float(e))
    n = len(error)
    return {"mse": acc_sq / n, "mae": acc_abs / n,
            "rmse": (acc_sq / n) ** 0.5}
