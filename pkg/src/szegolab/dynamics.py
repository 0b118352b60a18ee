"""Time integration of the alpha-Szego flow.

Two formulations are integrated with the same classical RK4 core: the full
truncated Galerkin system on Fourier coefficients and the reduced (b, c, p)
system on the rank-one manifold.  Trajectories are sampled at multiples of
``sample_every`` and each sample carries the conserved triple, Sobolev and
Wiener norms, the blow-up discriminant (reduced runs) and optionally the top
eigenvalues of the shifted-Hankel square (full runs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import hardy, hankel, reduced
from .hardy import ConservedTriple, HardyCoeffs
from .reduced import L1State, PoleBoundaryError

__all__ = [
    "IntegratorConfig",
    "TrajectoryRecord",
    "Trajectory",
    "full_rhs",
    "integrate_full",
    "integrate_reduced",
    "exact_trajectory",
]

_MIN_DT = 1e-12
_C_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepping parameters shared by the full and reduced integrators.

    ``t_end`` is rounded down to a whole number of sampling intervals, so
    every emitted record sits exactly on a multiple of ``sample_every``.
    ``scheme`` is "rk4_fixed" or "rk4_adaptive" (step doubling with local
    error target ``adapt_tol``).  Reduced runs stop once |p| >= pole_guard.
    """

    dt: float = 1e-3
    t_end: float = 1.0
    sample_every: float = 0.1
    scheme: str = "rk4_fixed"
    adapt_tol: float = 1e-10
    pole_guard: float = 1.0 - 1e-10

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.sample_every <= 0:
            raise ValueError("sample_every must be positive")
        if self.dt > self.sample_every:
            raise ValueError("dt must not exceed sample_every")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.scheme not in ("rk4_fixed", "rk4_adaptive"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.adapt_tol <= 0:
            raise ValueError("adapt_tol must be positive")
        if not 0.0 < self.pole_guard < 1.0:
            raise ValueError("pole_guard must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """One sampled point of a trajectory with its diagnostic scalars."""

    t: float
    state: object  # HardyCoeffs or L1State
    conserved: ConservedTriple
    norms: dict[float, float]
    wiener: float
    discriminant: float
    ku2_top_eigs: tuple[float, ...] | None = None


@dataclass
class Trajectory:
    """Sampled records plus the reason integration ended.

    ``stop_reason`` is "completed" for a full-horizon run, else one of
    "pole_guard", "nan", "stiff", "c_underflow".
    """

    records: list[TrajectoryRecord]
    stop_reason: str
    alpha: float
    mode: str

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])


def full_rhs(u: HardyCoeffs, alpha: float) -> HardyCoeffs:
    """-i (Pi(|u|^2 u) + alpha u_hat(0) e0), the Galerkin vector field."""
    out = -1j * hardy.cubic_nonlinearity(u).coeffs.copy()
    out[0] += -1j * alpha * u.coeffs[0]
    return HardyCoeffs(out)


def _rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + (0.5 * h) * k1)
    k3 = f(y + (0.5 * h) * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _advance_fixed(f, y, t0, t1, dt):
    """March y from t0 to t1 with equal RK4 steps of size <= dt."""
    span = t1 - t0
    n_sub = max(1, math.ceil(span / dt - 1e-9))
    h = span / n_sub
    for _ in range(n_sub):
        y = _rk4_step(f, y, h)
    return y


def _advance_adaptive(f, y, t0, t1, h, tol):
    """Step-doubling RK4 with local extrapolation from t0 to t1.

    Returns (y, h) or raises _StepFailure when the step size underflows.
    """
    t = t0
    while t < t1 - 1e-14 * max(1.0, abs(t1)):
        h_try = min(h, t1 - t)
        while True:
            try:
                y_big = _rk4_step(f, y, h_try)
                y_half = _rk4_step(f, y, 0.5 * h_try)
                y_two = _rk4_step(f, y_half, 0.5 * h_try)
                bad = not np.all(np.isfinite(y_two.view(np.float64)))
            except PoleBoundaryError:
                bad = True
                y_big = y_two = None
            if not bad:
                delta = y_two - y_big
                scale = tol * (1.0 + np.abs(y_two))
                err = float(np.max(np.abs(delta) / (15.0 * scale)))
                if err <= 1.0:
                    y = y_two + delta / 15.0
                    t += h_try
                    grow = 5.0 if err == 0.0 else min(5.0, 0.9 * err**-0.2)
                    h = h_try * max(0.2, grow)
                    break
            # reject: shrink and retry
            shrink = 0.25 if bad else max(0.1, min(0.9, 0.9 * err**-0.25))
            h_try *= shrink
            if h_try < _MIN_DT:
                raise _StepFailure(y, t)
    return y, h


class _StepFailure(Exception):
    def __init__(self, y, t):
        self.y = y
        self.t = t


def _sample_times(cfg: IntegratorConfig) -> np.ndarray:
    n = int(math.floor(cfg.t_end / cfg.sample_every + 1e-9))
    return np.arange(n + 1) * cfg.sample_every


def _integrate(f, y0: np.ndarray, cfg: IntegratorConfig, guard, make_record):
    """Shared driver: march between sample times, record, stop on guard."""
    times = _sample_times(cfg)
    records = [make_record(times[0], y0)]
    y = y0
    h = cfg.dt
    stop = "completed"
    for t_prev, t_next in zip(times[:-1], times[1:]):
        try:
            if cfg.scheme == "rk4_fixed":
                y = _advance_fixed(f, y, t_prev, t_next, cfg.dt)
            else:
                y, h = _advance_adaptive(f, y, t_prev, t_next, h, cfg.adapt_tol)
        except PoleBoundaryError:
            stop = "pole_guard"
            break
        except _StepFailure as fail:
            stop = guard(fail.y) or "stiff"
            break
        if not np.all(np.isfinite(y.view(np.float64))):
            stop = "nan"
            break
        reason = guard(y)
        if reason is not None:
            stop = reason
            break
        records.append(make_record(t_next, y))
    return records, stop


def _norms_full(u: HardyCoeffs, s_list: Sequence[float]) -> dict[float, float]:
    return {float(s): hardy.norm_hs(u, s) for s in s_list}


def integrate_full(
    u0: HardyCoeffs,
    alpha: float,
    cfg: IntegratorConfig,
    s_list: Sequence[float] = (1.0, 2.0),
    ku2_section: int | None = None,
) -> Trajectory:
    """Integrate the truncated Galerkin flow from u0.

    When ``ku2_section`` is given, each record carries the top eight
    eigenvalues of the K_u^2 finite section of that size (isospectrality
    diagnostics).  Aborts with the last good record on NaN/Inf.
    """
    n = u0.n_modes

    def f(y: np.ndarray) -> np.ndarray:
        cubic = hardy._cubic_fft(y)
        cubic[0] += alpha * y[0]
        return -1j * cubic

    def guard(y: np.ndarray):
        return None

    def make_record(t: float, y: np.ndarray) -> TrajectoryRecord:
        u = HardyCoeffs(y)
        top = None
        if ku2_section is not None:
            eigs, _ = hankel.ku2_spectrum(u, min(ku2_section, n))
            top = tuple(float(e) for e in eigs[:8])
        return TrajectoryRecord(
            t=float(t),
            state=u,
            conserved=hardy.conserved_triple(u, alpha),
            norms=_norms_full(u, s_list),
            wiener=hardy.norm_wiener(u),
            discriminant=float("nan"),
            ku2_top_eigs=top,
        )

    records, stop = _integrate(f, u0.coeffs.copy(), cfg, guard, make_record)
    return Trajectory(records=records, stop_reason=stop, alpha=alpha, mode="full")


def _reduced_record(t: float, y: np.ndarray, alpha: float, s_list) -> TrajectoryRecord:
    state = L1State(b=y[0], c=y[1], p=y[2])
    return TrajectoryRecord(
        t=float(t),
        state=state,
        conserved=reduced.conserved(state, alpha),
        norms={float(s): reduced.sobolev_norm(state, s) for s in s_list},
        wiener=reduced.wiener_norm(state),
        discriminant=reduced.blowup_discriminant(state),
    )


def integrate_reduced(
    s0: L1State,
    alpha: float,
    cfg: IntegratorConfig,
    s_list: Sequence[float] = (1.0, 2.0),
) -> Trajectory:
    """Integrate the reduced (b, c, p) flow from s0.

    Stops cleanly (truncated trajectory, stop_reason "pole_guard") once
    |p| >= cfg.pole_guard, and with "c_underflow" if |c| collapses below
    the double-precision floor.
    """
    if abs(s0.p) >= cfg.pole_guard:
        raise ValueError("initial |p| already beyond pole_guard")

    def f(y: np.ndarray) -> np.ndarray:
        db, dc, dp = reduced._rhs(y[0], y[1], y[2], alpha)
        return np.array([db, dc, dp], dtype=np.complex128)

    def guard(y: np.ndarray):
        if abs(y[2]) >= cfg.pole_guard:
            return "pole_guard"
        if abs(y[1]) < _C_UNDERFLOW:
            return "c_underflow"
        return None

    y0 = np.array([s0.b, s0.c, s0.p], dtype=np.complex128)
    records, stop = _integrate(
        f, y0, cfg, guard, lambda t, y: _reduced_record(t, y, alpha, s_list)
    )
    return Trajectory(records=records, stop_reason=stop, alpha=alpha, mode="reduced")


def exact_trajectory(
    alpha: float, cfg: IntegratorConfig, s_list: Sequence[float] = (1.0, 2.0)
) -> Trajectory:
    """Sample the closed-form blow-up solution (no integration)."""
    records = []
    for t in _sample_times(cfg):
        state = reduced.exact_solution(alpha, float(t))
        y = np.array([state.b, state.c, state.p])
        records.append(_reduced_record(float(t), y, alpha, s_list))
    return Trajectory(records=records, stop_reason="completed", alpha=alpha, mode="exact")
