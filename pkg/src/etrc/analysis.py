"""Tracking metrics, realized quadratic cost, inter-event statistics,
trace export/import, and side-by-side run comparison."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .engine import Trace
from .errors import EmptyWindow
from .numerics import as_matrix

# Published comparison constants for the rotational-system benchmark: the
# preview-repetitive-control baseline and the proposed controller's reported
# indices.  They are fixed external reference numbers, not computed here.
BASELINE_PREVIEW_RC = {"label": "published preview-RC baseline",
                       "rmse": 0.3950, "mse": 0.1561, "mae": 0.1212}
REPORTED_PROPOSED = {"label": "published proposed-controller results",
                     "rmse": 0.1157, "mse": 0.0134, "mae": 0.0295}


@dataclass
class MetricsReport:
    rmse: float
    mse: float
    mae: float
    window: tuple[float, float]
    event_count: int
    min_interval: float | None
    mean_interval: float | None
    max_interval: float | None
    realized_cost: float | None = None
    label: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def compute_metrics(trace: Trace, window: tuple[float, float] | None = None,
                    label: str = "") -> MetricsReport:
    """Tracking-error indices over a time window.

    rmse = sqrt(mean(e^2)), mse = mean(e^2), mae = mean(|e|) over the grid
    samples inside the window; inter-event statistics come from the portion
    of the event log inside the window.
    """
    h = trace.h
    t_end = trace.t[-1]
    if window is None:
        window = (0.0, float(t_end))
    t0, t1 = window
    i0 = int(round(t0 / h))
    i1 = int(round(t1 / h))
    if not (0 <= i0 <= i1 < len(trace)):
        raise EmptyWindow(f"window {window} is outside the trace span [0, {t_end}]")
    err = trace.error[i0:i1 + 1]
    mse = float(np.mean(err * err))
    events = [te for te in trace.event_log if t0 <= te <= t1]
    intervals = np.diff(events) if len(events) >= 2 else np.array([])
    return MetricsReport(
        rmse=math.sqrt(mse),
        mse=mse,
        mae=float(np.mean(np.abs(err))),
        window=(float(t0), float(t1)),
        event_count=len(events),
        min_interval=float(intervals.min()) if intervals.size else None,
        mean_interval=float(intervals.mean()) if intervals.size else None,
        max_interval=float(intervals.max()) if intervals.size else None,
        label=label,
    )


def realized_cost(trace: Trace, q_z, r) -> float:
    """Realized quadratic cost (1/2) integral of z'Q_z z + u'R u.

    The weighting vector z stacks the plant state, the tracking error, and
    the internal-model state, matching the ordering of the synthesis
    augmentation.  Trapezoidal quadrature over the whole trace.
    """
    n = trace.x.shape[1]
    q_z = as_matrix(q_z, rows=n + 2, cols=n + 2, name="Q_z")
    r = as_matrix(r, name="R")
    z = np.hstack([trace.x, trace.error[:, None], trace.x_a[:, None]])
    quad = np.einsum("ki,ij,kj->k", z, q_z, z)
    quad = quad + r[0, 0] * trace.u * trace.u
    return float(0.5 * np.trapezoid(quad, dx=trace.h))


def export_csv(trace: Trace, path) -> None:
    """Write the trace as decimal text, one grid step per row.

    Every float is rendered with 17 significant digits so a re-parse
    reproduces the stored values bit-exactly.
    """
    n = trace.x.shape[1]
    header = list(Trace.COLUMNS_SCALAR) \
        + [f"x{i + 1}" for i in range(n)] \
        + [f"xhat{i + 1}" for i in range(n)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(len(trace)):
            row = [trace.t[k], trace.y[k], trace.y_ref[k], trace.error[k],
                   trace.u[k], trace.u_f[k], trace.w_true[k], trace.w_hat[k],
                   trace.w_tilde[k], trace.v[k], trace.x_a[k], trace.rho[k]]
            cells = [f"{val:.17g}" for val in row]
            cells.append(str(int(trace.transmitted[k])))
            cells.extend(f"{val:.17g}" for val in trace.x[k])
            cells.extend(f"{val:.17g}" for val in trace.xhat[k])
            fh.write(",".join(cells) + "\n")


def read_csv(path) -> Trace:
    """Inverse of :func:`export_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = {name: np.array([float(row[i]) for row in rows])
            for i, name in enumerate(header)}
    n = sum(1 for name in header if name.startswith("x") and name[1:].isdigit())
    t = data["t"]
    h = float(t[1] - t[0]) if t.shape[0] > 1 else 1.0
    transmitted = data["transmitted"].astype(np.int8)
    event_log = [float(tv) for tv, flag in zip(t, transmitted) if flag]
    return Trace(
        h=h, t=t, y=data["y"], y_ref=data["y_ref"], error=data["error"],
        u=data["u"], u_f=data["u_f"], w_true=data["w_true"],
        w_hat=data["w_hat"], w_tilde=data["w_tilde"], v=data["v"],
        x_a=data["x_a"], rho=data["rho"], transmitted=transmitted,
        x=np.column_stack([data[f"x{i + 1}"] for i in range(n)]),
        xhat=np.column_stack([data[f"xhat{i + 1}"] for i in range(n)]),
        event_log=event_log,
    )


def compare_runs(reports: list[MetricsReport]) -> dict:
    """Side-by-side comparison of two or more labeled metric reports.

    Ratios are taken against the first report; the published benchmark
    constants ride along as fixed external rows.
    """
    if len(reports) < 2:
        raise ValueError("need at least two reports to compare")
    base = reports[0]

    def ratio(a, b):
        if a is None or b is None or b == 0:
            return None
        return a / b

    rows = [rep.as_dict() for rep in reports]
    ratios = []
    for rep in reports:
        ratios.append({
            "label": rep.label,
            "rmse": ratio(rep.rmse, base.rmse),
            "mse": ratio(rep.mse, base.mse),
            "mae": ratio(rep.mae, base.mae),
            "event_count": ratio(float(rep.event_count), float(base.event_count)),
            "min_interval": ratio(rep.min_interval, base.min_interval),
        })
    return {
        "rows": rows,
        "ratios_vs_first": ratios,
        "external": [dict(BASELINE_PREVIEW_RC), dict(REPORTED_PROPOSED)],
    }


def comparison_text(comparison: dict) -> str:
    """Human-readable table for a :func:`compare_runs` result."""
    cols = ("label", "rmse", "mse", "mae", "event_count", "min_interval",
            "mean_interval", "realized_cost")
    lines = ["  ".join(f"{c:>18}" for c in cols)]

    def fmt(val):
        if val is None:
            return "-"
        if isinstance(val, float):
            return f"{val:.6g}"
        return str(val)

    for row in comparison["rows"]:
        lines.append("  ".join(f"{fmt(row.get(c)):>18}" for c in cols))
    for ext in comparison["external"]:
        lines.append("  ".join(f"{fmt(ext.get(c)):>18}" for c in cols))
    lines.append("")
    lines.append("ratios vs first row:")
    rcols = ("label", "rmse", "mse", "mae", "event_count", "min_interval")
    lines.append("  ".join(f"{c:>18}" for c in rcols))
    for row in comparison["ratios_vs_first"]:
        lines.append("  ".join(f"{fmt(row.get(c)):>18}" for c in rcols))
    return "\n".join(lines)


def report_json(obj) -> str:
    """Serialize reports/comparisons to JSON (numpy-safe)."""

    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer, np.bool_)):
            return o.item()
        if isinstance(o, complex):
            return {"re": o.real, "im": o.imag}
        if hasattr(o, "as_dict"):
            return o.as_dict()
        raise TypeError(f"cannot serialize {type(o)}")

    return json.dumps(obj, indent=2, default=default)
