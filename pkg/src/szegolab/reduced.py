"""The rank-one rational manifold: states u = b + c z / (1 - p z).

On this manifold the alpha-Szego flow closes into an ODE for the three
complex coordinates (b, c, p).  The module provides the coordinate form of
the conserved quantities, the ODE right-hand side, the blow-up discriminant
|b + conj(p) c / (1-|p|^2)| whose square equals alpha exactly on the
exponential-growth trajectories, the closed-form solution issued from
u0 = z + sqrt(alpha), and closed-form Sobolev/Wiener norms that stay accurate
arbitrarily close to the |p| -> 1 boundary (where truncated Fourier sums are
useless).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .hardy import HardyCoeffs, ConservedTriple

__all__ = [
    "L1State",
    "PoleBoundaryError",
    "ConditionError",
    "to_fourier",
    "conserved",
    "blowup_discriminant",
    "reduced_rhs",
    "log_c_rate_squared",
    "exact_solution",
    "sobolev_proxy",
    "sobolev_norm",
    "wiener_norm",
]


class PoleBoundaryError(ValueError):
    """The pole parameter is too close to the unit circle to proceed."""


class ConditionError(ValueError):
    """The blow-up condition required by a closed formula does not hold."""


@dataclass(frozen=True)
class L1State:
    """Coordinates (b, c, p) of u = b + c z/(1 - p z), |p| < 1, c != 0."""

    b: complex
    c: complex
    p: complex

    def __post_init__(self):
        b, c, p = complex(self.b), complex(self.c), complex(self.p)
        for name, val in (("b", b), ("c", c), ("p", p)):
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise ValueError(f"{name} must be finite")
        if c == 0:
            raise ValueError("c must be nonzero (the state leaves the manifold)")
        if abs(p) >= 1.0:
            raise ValueError(f"|p| must be < 1, got {abs(p)}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "p", p)


def to_fourier(state: L1State, n_modes: int) -> HardyCoeffs:
    """Coefficients u_hat(0) = b, u_hat(k) = c p^(k-1) for 1 <= k < n_modes."""
    out = np.empty(n_modes, dtype=np.complex128)
    out[0] = state.b
    out[1:] = state.c * state.p ** np.arange(n_modes - 1)
    return HardyCoeffs(out)


def conserved(state: L1State, alpha: float) -> ConservedTriple:
    """Closed-form (Q, M, E_alpha) in the (b, c, p) coordinates."""
    b, c, p = state.b, state.c, state.p
    b2, c2, p2 = abs(b) ** 2, abs(c) ** 2, abs(p) ** 2
    d = 1.0 - p2
    q = c2 / d + b2
    m = c2 / d**2
    quartic = (
        b2**2
        + 4.0 * b2 * c2 / d
        + c2**2 * (1.0 + p2) / d**3
        + 4.0 * c2 * (b * p * c.conjugate()).real / d**2
    )
    return ConservedTriple(q=q, m=m, e_alpha=0.25 * quartic + 0.5 * alpha * b2)


def blowup_discriminant(state: L1State) -> float:
    """|b + conj(p) c / (1-|p|^2)|; equals sqrt(alpha) exactly on blow-up orbits."""
    d = 1.0 - abs(state.p) ** 2
    return abs(state.b + state.p.conjugate() * state.c / d)


def _rhs(b: complex, c: complex, p: complex, alpha: float):
    """Right-hand side (db, dc, dp) of the reduced flow on raw coordinates."""
    if abs(p) >= 1.0 - 1e-12:
        raise PoleBoundaryError(f"|p| = {abs(p)} too close to the unit circle")
    c2 = abs(c) ** 2
    b2 = abs(b) ** 2
    d = 1.0 - abs(p) ** 2
    db = -1j * (b2 * b + 2.0 * b * c2 / d + c2 * c * p.conjugate() / d**2 + alpha * b)
    dc = -1j * (2.0 * b2 * c + 2.0 * b * c2 * p / d + c2 * c / d**2)
    dp = -1j * (c * b.conjugate() + c2 * p / d)
    return db, dc, dp


def reduced_rhs(state: L1State, alpha: float) -> tuple[complex, complex, complex]:
    """Time derivatives (db/dt, dc/dt, dp/dt) of the reduced flow.

    Raises PoleBoundaryError once |p| >= 1 - 1e-12; the caller must stop or
    shrink its step.
    """
    return _rhs(state.b, state.c, state.p, alpha)


def log_c_rate_squared(state: L1State, alpha: float, cond_tol: float = 1e-6) -> float:
    """(d log|c| / dt)^2 = -4 alpha sqrt(M) |c| + 4 Q M - (alpha - M - Q)^2.

    The closed formula is only valid when the blow-up condition
    discriminant^2 = alpha holds; it is enforced to within
    cond_tol * (1 + alpha).
    """
    disc = blowup_discriminant(state)
    if abs(disc**2 - alpha) > cond_tol * (1.0 + abs(alpha)):
        raise ConditionError(
            f"blow-up condition violated: discriminant^2 = {disc**2:.3e}, "
            f"alpha = {alpha:.3e}"
        )
    tri = conserved(state, alpha)
    q, m = tri.q, tri.m
    return -4.0 * alpha * math.sqrt(m) * abs(state.c) + 4.0 * q * m - (alpha - m - q) ** 2


def exact_solution(alpha: float, t: float) -> L1State:
    """Closed-form blow-up solution issued from u0 = z + sqrt(alpha), alpha > 0.

    b(t) = (sqrt(alpha) - i tanh(sqrt(alpha) t)) e^(-i (1+2 alpha) t),
    c(t) = sech^2(sqrt(alpha) t) e^(-i (1+2 alpha) t),
    p(t) = -i tanh(sqrt(alpha) t).

    The tanh/sech^2 form is used throughout so that no intermediate
    exponential overflows at large |t|.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive for the blow-up solution")
    x = math.sqrt(alpha) * t
    th = math.tanh(x)
    e = math.exp(-2.0 * abs(x))
    sech2 = 4.0 * e / (1.0 + e) ** 2
    phase = cmath.exp(-1j * (1.0 + 2.0 * alpha) * t)
    return L1State(
        b=(math.sqrt(alpha) - 1j * th) * phase,
        c=sech2 * phase,
        p=-1j * th,
    )


def sobolev_proxy(state: L1State, s: float) -> float:
    """|c|^2 / (1-|p|^2)^(2s+1), equivalent to ||u||_{H^s}^2 as |p| -> 1."""
    d = 1.0 - abs(state.p) ** 2
    return abs(state.c) ** 2 / d ** (2.0 * s + 1.0)


@lru_cache(maxsize=None)
def _eulerian(order: int) -> tuple[int, ...]:
    """Coefficients of the Eulerian polynomial A_order(x), exact integers.

    Li_{-m}(x) = x A_m(x) / (1-x)^(m+1) for integer m >= 1.
    """
    row = [1]
    for n in range(2, order + 1):
        row = [
            (k + 1) * (row[k] if k < len(row) else 0)
            + (n - k) * (row[k - 1] if k >= 1 else 0)
            for k in range(n)
        ]
    return tuple(row)


def _polylog_neg(order: float, x: float) -> float:
    """Li_{-order}(x) = sum_{k>=1} k^order x^k for 0 <= x < 1, order >= 0."""
    if x == 0.0:
        return 0.0
    rounded = round(order)
    if abs(order - rounded) < 1e-12:
        m = int(rounded)
        if m == 0:
            return x / (1.0 - x)
        coeffs = _eulerian(m)
        poly = 0.0
        for a in coeffs[::-1]:
            poly = poly * x + a
        return x * poly / (1.0 - x) ** (m + 1)
    return float(mpmath.polylog(-order, x))


def _weighted_tail_sum(s: float, x: float) -> float:
    """sum_{k>=1} (1+k)^(2s) x^(k-1) for 0 <= x < 1."""
    if x < 0.5:
        total = 0.0
        term_k = 1
        while True:
            term = (1.0 + term_k) ** (2.0 * s) * x ** (term_k - 1)
            total += term
            if term < 1e-18 * max(total, 1.0) or term_k > 400:
                break
            term_k += 1
        return total
    return (_polylog_neg(2.0 * s, x) - x) / x**2


def sobolev_norm(state: L1State, s: float) -> float:
    """Exact ||u||_{H^s} with weight (1+k)^(2s), summed in closed form.

    Remains accurate for |p| arbitrarily close to 1, where any fixed Fourier
    truncation fails.
    """
    if s < 0:
        raise ValueError("Sobolev index must be >= 0")
    x = abs(state.p) ** 2
    return math.sqrt(abs(state.b) ** 2 + abs(state.c) ** 2 * _weighted_tail_sum(s, x))


def wiener_norm(state: L1State) -> float:
    """||u||_W = |b| + |c| / (1 - |p|), summed in closed form."""
    return abs(state.b) + abs(state.c) / (1.0 - abs(state.p))
