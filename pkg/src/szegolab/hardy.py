"""Truncated Hardy space L^2_+ of the unit circle.

A state is the vector of its nonnegative-frequency Fourier coefficients
u_hat(0..N-1).  This module supplies the Szego projection, the cubic
nonlinearity Pi(|u|^2 u) in two independent implementations, inner products,
and the norms and functionals driven by the alpha-Szego flow

    i du/dt = Pi(|u|^2 u) + alpha * (u | 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = [
    "HardyCoeffs",
    "ConservedTriple",
    "szego_project",
    "inner_product",
    "autocorrelation",
    "cubic_nonlinearity",
    "norm_l2",
    "norm_hs",
    "norm_wiener",
    "norm_l4",
    "momentum",
    "energy_alpha",
    "evaluate",
]


@dataclass(frozen=True, eq=False)
class HardyCoeffs:
    """Fourier coefficients u_hat(k), k = 0..N-1, of a function in L^2_+.

    Negative modes are absent by construction (Szego-projected); modes at and
    above N are dropped by the Galerkin truncation.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("coefficient vector must be one-dimensional")
        if arr.size < 2:
            raise ValueError("need at least two modes (N >= 2)")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def n_modes(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class ConservedTriple:
    """Mass Q, momentum M and energy E_alpha of a state."""

    q: float
    m: float
    e_alpha: float


def szego_project(two_sided: Mapping[int, complex], n_modes: int) -> HardyCoeffs:
    """Project a two-sided coefficient map onto modes 0..n_modes-1.

    Negative modes are discarded (Szego projection), modes >= n_modes are
    discarded (Galerkin truncation).
    """
    if n_modes < 2:
        raise ValueError("need at least two modes (N >= 2)")
    out = np.zeros(n_modes, dtype=np.complex128)
    for mode, value in two_sided.items():
        if 0 <= mode < n_modes:
            out[mode] = value
    return HardyCoeffs(out)


def _check_same_size(u: HardyCoeffs, v: HardyCoeffs) -> None:
    if u.n_modes != v.n_modes:
        raise ValueError(
            f"truncation sizes differ: {u.n_modes} != {v.n_modes}"
        )


def inner_product(u: HardyCoeffs, v: HardyCoeffs) -> complex:
    """(u | v) = sum_k u_hat(k) conj(v_hat(k)), the normalized circle integral."""
    _check_same_size(u, v)
    return complex(np.vdot(v.coeffs, u.coeffs))


def autocorrelation(u: HardyCoeffs) -> np.ndarray:
    """Two-sided Fourier symbol of |u|^2.

    Returns the array w with w[m + N - 1] = sum_k u_hat(k+m) conj(u_hat(k))
    for lags m = -(N-1)..(N-1); conjugate-symmetric since |u|^2 is real.
    """
    c = u.coeffs
    # np.correlate(c, c, 'full')[k] = sum_n c[n + k - (N-1)] conj(c[n])
    return np.correlate(c, c, mode="full")


def _cubic_direct(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.size
    w = np.correlate(coeffs, coeffs, mode="full")
    # (|u|^2 u)_hat lives on modes -(N-1)..2N-2; keep 0..N-1.
    full = np.convolve(w, coeffs)
    return full[n - 1 : 2 * n - 1]


def _cubic_fft(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.size
    # Power-of-two grid with >= 3N points: |u|^2 u is band-limited to
    # [-(N-1), 2N-2], so the product is alias-free on this grid.
    pts = 1 << (3 * n - 1).bit_length()
    spec = np.zeros(pts, dtype=np.complex128)
    spec[:n] = coeffs
    vals = np.fft.ifft(spec) * pts
    cubic_vals = (vals.real**2 + vals.imag**2) * vals
    return np.fft.fft(cubic_vals)[:n] / pts


def cubic_nonlinearity(u: HardyCoeffs, method: str = "fft") -> HardyCoeffs:
    """Galerkin truncation of Pi(|u|^2 u).

    Mode m of the result is sum u_hat(a) u_hat(b) conj(u_hat(j)) over
    a + b - j = m with 0 <= a, b, j <= N-1, for m = 0..N-1.  The convolution
    is exact (unaliased) before truncation, which preserves the mass and
    momentum of the truncated flow.

    ``method`` is "fft" (zero-padded fast convolution) or "direct"
    (autocorrelation followed by an explicit linear convolution); the two
    agree to rounding and serve as mutual cross-checks.
    """
    if method == "fft":
        out = _cubic_fft(u.coeffs)
    elif method == "direct":
        out = _cubic_direct(u.coeffs)
    else:
        raise ValueError(f"unknown method {method!r}")
    return HardyCoeffs(out)


def norm_l2(u: HardyCoeffs) -> float:
    return float(np.linalg.norm(u.coeffs))


def norm_hs(u: HardyCoeffs, s: float) -> float:
    """Sobolev H^s norm with weight (1+k)^(2s); s = 0 reduces to the L2 norm."""
    if s < 0:
        raise ValueError("Sobolev index must be >= 0")
    k = np.arange(u.n_modes)
    return float(np.sqrt(np.sum((1.0 + k) ** (2.0 * s) * np.abs(u.coeffs) ** 2)))


def norm_wiener(u: HardyCoeffs) -> float:
    """Wiener norm: the absolute sum of the Fourier coefficients."""
    return float(np.sum(np.abs(u.coeffs)))


def norm_l4(u: HardyCoeffs) -> float:
    """L^4 norm; its fourth power is the lag-sum of |autocorrelation|^2."""
    w = autocorrelation(u)
    return float(np.sum(np.abs(w) ** 2) ** 0.25)


def momentum(u: HardyCoeffs) -> float:
    """M(u) = sum_k k |u_hat(k)|^2."""
    k = np.arange(u.n_modes)
    return float(np.sum(k * np.abs(u.coeffs) ** 2))


def energy_alpha(u: HardyCoeffs, alpha: float) -> float:
    """E_alpha(u) = (1/4) ||u||_L4^4 + (alpha/2) |u_hat(0)|^2."""
    return 0.25 * norm_l4(u) ** 4 + 0.5 * alpha * abs(u.coeffs[0]) ** 2


def conserved_triple(u: HardyCoeffs, alpha: float) -> ConservedTriple:
    """The three invariants (Q, M, E_alpha) of the flow, from coefficients."""
    return ConservedTriple(
        q=norm_l2(u) ** 2, m=momentum(u), e_alpha=energy_alpha(u, alpha)
    )


def evaluate(u: HardyCoeffs, theta):
    """Evaluate u at angle(s) theta: sum_k u_hat(k) e^(i k theta)."""
    th = np.asarray(theta, dtype=np.float64)
    z = np.exp(1j * th)
    acc = np.zeros_like(z)
    for coef in u.coeffs[::-1]:
        acc = acc * z + coef
    if np.isscalar(theta) or th.ndim == 0:
        return complex(acc)
    return acc
