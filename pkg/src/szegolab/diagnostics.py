"""Post-processing of trajectories into quantitative claims.

Growth-rate fits of log Sobolev norms, spectral cascade tracking, spatial
concentration profiles, boundedness certificates for the alpha < 0 regime,
and Wiener-norm / trace-of-|K_u| tracking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import hankel, reduced
from .hardy import HardyCoeffs, evaluate
from .dynamics import TrajectoryRecord
from .reduced import L1State

__all__ = [
    "GrowthFit",
    "WienerTrack",
    "fit_growth",
    "dominant_mode",
    "concentration_profile",
    "boundedness_certificate",
    "wiener_track",
]


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares slope of log ||u||_{H^s} over a time window."""

    s: float
    window: tuple[float, float]
    slope: float
    intercept: float
    r_squared: float
    predicted: float  # (2s-1) sqrt(alpha) when alpha is supplied, else nan


@dataclass(frozen=True)
class WienerTrack:
    """Wiener-norm supremum and finite-section trace of |K_u| per sample."""

    sup_wiener: float
    trace_k: tuple[float, ...]
    max_trace_deviation: float


def fit_growth(
    records: Sequence[TrajectoryRecord],
    s: float,
    window: tuple[float, float],
    alpha: float | None = None,
) -> GrowthFit:
    """Fit a line through (t, log ||u||_{H^s}) for samples inside the window."""
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ValueError("window must satisfy t_lo < t_hi")
    ts, logs = [], []
    for rec in records:
        if t_lo - 1e-12 <= rec.t <= t_hi + 1e-12:
            value = rec.norms[float(s)]
            if value <= 0.0:
                raise ValueError(f"nonpositive norm at t = {rec.t}")
            ts.append(rec.t)
            logs.append(math.log(value))
    if len(ts) < 10:
        raise ValueError(f"need >= 10 samples in window, found {len(ts)}")
    ts = np.array(ts)
    logs = np.array(logs)
    slope, intercept = np.polyfit(ts, logs, 1)
    fitted = slope * ts + intercept
    ss_res = float(np.sum((logs - fitted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    predicted = float("nan")
    if alpha is not None and alpha > 0:
        predicted = (2.0 * s - 1.0) * math.sqrt(alpha)
    return GrowthFit(
        s=float(s),
        window=(float(t_lo), float(t_hi)),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        predicted=predicted,
    )


def dominant_mode(u: HardyCoeffs) -> int:
    """argmax over k of k |u_hat(k)|^2, the peak of the momentum density."""
    k = np.arange(u.n_modes)
    return int(np.argmax(k * np.abs(u.coeffs) ** 2))


def concentration_profile(u: HardyCoeffs, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    """|u| on a uniform theta grid over [0, 2 pi)."""
    if grid_size < 1:
        raise ValueError("grid_size must be positive")
    thetas = 2.0 * np.pi * np.arange(grid_size) / grid_size
    return thetas, np.abs(evaluate(u, thetas))


def boundedness_certificate(
    records: Sequence[TrajectoryRecord], s: float
) -> tuple[float, float]:
    """(sup ||u||_{H^s}, sup over last 10% of time / sup over first 10%).

    A ratio near 1 certifies numerically bounded norms; on exponential-growth
    trajectories the ratio itself grows like the norm.
    """
    if not records:
        raise ValueError("no records")
    ts = np.array([r.t for r in records])
    vals = np.array([r.norms[float(s)] for r in records])
    span = ts[-1] - ts[0]
    early = vals[ts <= ts[0] + 0.1 * span]
    late = vals[ts >= ts[-1] - 0.1 * span]
    sup_norm = float(vals.max())
    return sup_norm, float(late.max() / early.max())


def _record_coeffs(rec: TrajectoryRecord, n_modes: int) -> HardyCoeffs:
    if isinstance(rec.state, L1State):
        return reduced.to_fourier(rec.state, n_modes)
    return rec.state


def wiener_track(
    records: Sequence[TrajectoryRecord],
    section_size: int = 64,
    n_modes: int | None = None,
) -> WienerTrack:
    """Supremum of the Wiener norm and the per-sample trace of |K_u|.

    The trace is computed on a finite section of size ``section_size``;
    ``n_modes`` controls the Fourier conversion of reduced-state records
    (defaults to 4 * section_size).
    """
    if not records:
        raise ValueError("no records")
    if n_modes is None:
        n_modes = 4 * section_size
    sup_w = max(r.wiener for r in records)
    traces = []
    for rec in records:
        u = _record_coeffs(rec, n_modes)
        _, tr = hankel.ku2_spectrum(u, min(section_size, u.n_modes))
        traces.append(tr)
    dev = max(abs(tr - traces[0]) for tr in traces)
    return WienerTrack(
        sup_wiener=float(sup_w),
        trace_k=tuple(traces),
        max_trace_deviation=float(dev),
    )
