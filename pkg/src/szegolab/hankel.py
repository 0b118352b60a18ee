"""Finite sections of Hankel, shifted-Hankel and Toeplitz operators.

The Hankel operator H_u h = Pi(u conj(h)) is antilinear with coefficient
matrix u_hat(k+l); the shifted Hankel K_u = T_z^* H_u has matrix u_hat(k+l+1).
An antilinear operator with matrix A acts as h -> A conj(h), so compositions
follow the rule "conjugate everything to the right":

    linear . antilinear      ->  T A
    antilinear . linear      ->  A conj(T)
    antilinear . antilinear  ->  A conj(B)        (linear result)

This module builds the operators, the Lax-pair generators B_u and C_u,
verifies the structural identities satisfied along the flow, and provides the
spectral and rank diagnostics that classify rational states.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .hardy import HardyCoeffs, autocorrelation, cubic_nonlinearity

__all__ = [
    "AntilinearHankel",
    "LinearOperator",
    "hankel_matrix",
    "shifted_hankel_matrix",
    "toeplitz_matrix",
    "toeplitz_abs_squared",
    "lax_operators",
    "verify_hpi",
    "verify_k_square",
    "ku2_spectrum",
    "numerical_rank",
    "rational_taylor",
    "random_rational",
]


@dataclass(frozen=True, eq=False)
class AntilinearHankel:
    """Antilinear operator h -> mat @ conj(h); mat is complex-symmetric.

    ``shift`` is 0 for H_u (entries u_hat(k+l)) and 1 for K_u = T_z^* H_u
    (entries u_hat(k+l+1)).
    """

    mat: np.ndarray
    shift: int

    def __post_init__(self):
        if self.shift not in (0, 1):
            raise ValueError("shift must be 0 (Hankel) or 1 (shifted Hankel)")
        if not np.array_equal(self.mat, self.mat.T):
            raise ValueError("Hankel coefficient matrix must be symmetric")

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def apply(self, h: np.ndarray) -> np.ndarray:
        return self.mat @ np.conj(h)

    def squared(self) -> np.ndarray:
        """Matrix of the linear operator H.H (resp. K.K): mat @ conj(mat)."""
        return self.mat @ np.conj(self.mat)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Plain linear operator h -> mat @ h (Toeplitz sections, B_u, C_u)."""

    mat: np.ndarray

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def apply(self, h: np.ndarray) -> np.ndarray:
        return self.mat @ h


def _hankel_entries(u: HardyCoeffs, size: int, shift: int) -> np.ndarray:
    if size > u.n_modes:
        raise ValueError(
            f"section size {size} exceeds truncation size {u.n_modes}"
        )
    needed = 2 * size - 1 + shift
    padded = np.zeros(needed, dtype=np.complex128)
    avail = min(needed, u.n_modes)
    padded[:avail] = u.coeffs[:avail]
    idx = np.add.outer(np.arange(size), np.arange(size)) + shift
    return padded[idx]


def hankel_matrix(u: HardyCoeffs, size: int) -> AntilinearHankel:
    """Finite section of H_u: entries u_hat(k+l), zero once k+l >= N."""
    return AntilinearHankel(_hankel_entries(u, size, 0), shift=0)


def shifted_hankel_matrix(u: HardyCoeffs, size: int) -> AntilinearHankel:
    """Finite section of K_u = T_z^* H_u: entries u_hat(k+l+1)."""
    return AntilinearHankel(_hankel_entries(u, size, 1), shift=1)


def toeplitz_matrix(symbol: Mapping[int, complex], size: int) -> LinearOperator:
    """Finite section of T_b from a two-sided symbol map: entries b_hat(k-l)."""
    two_sided = np.zeros(2 * size - 1, dtype=np.complex128)
    for mode, value in symbol.items():
        if -(size - 1) <= mode <= size - 1:
            two_sided[mode + size - 1] = value
    idx = np.subtract.outer(np.arange(size), np.arange(size)) + size - 1
    return LinearOperator(two_sided[idx])


def toeplitz_abs_squared(u: HardyCoeffs, size: int) -> LinearOperator:
    """Section of T_{|u|^2}, built from the exact autocorrelation symbol.

    The symbol of |u|^2 vanishes beyond lag N-1, so any section size is valid.
    """
    w = autocorrelation(u)
    n = u.n_modes
    half = max(size, n)
    two_sided = np.zeros(2 * half - 1, dtype=np.complex128)
    two_sided[half - n : half + n - 1] = w
    idx = np.subtract.outer(np.arange(size), np.arange(size)) + half - 1
    return LinearOperator(two_sided[idx])


def lax_operators(u: HardyCoeffs, size: int) -> tuple[LinearOperator, LinearOperator]:
    """The anti-Hermitian generators B_u = i/2 H_u^2 - i T_{|u|^2} and
    C_u = i/2 K_u^2 - i T_{|u|^2} on a common finite section."""
    h2 = hankel_matrix(u, size).squared()
    k2 = shifted_hankel_matrix(u, size).squared()
    t = toeplitz_abs_squared(u, size).mat
    b_u = LinearOperator(0.5j * h2 - 1j * t)
    c_u = LinearOperator(0.5j * k2 - 1j * t)
    return b_u, c_u


def verify_hpi(u: HardyCoeffs, size: int) -> float:
    """Residual of H_{Pi(|u|^2 u)} = T_{|u|^2} H_u + H_u T_{|u|^2} - H_u^3.

    Both sides are formed as antilinear coefficient matrices on an interior
    section.  The identity holds entrywise on the interior block provided the
    section is small against the truncation (3*size <= N), so for polynomial
    data of degree < size the residual is pure rounding noise.
    """
    if 3 * size > u.n_modes:
        raise ValueError("need 3*size <= N for an exact interior section")
    lhs = hankel_matrix(cubic_nonlinearity(u), size).mat
    h = hankel_matrix(u, size).mat
    t = toeplitz_abs_squared(u, size).mat
    rhs = t @ h + h @ np.conj(t) - h @ np.conj(h) @ h
    return float(np.max(np.abs(lhs - rhs)))


def verify_k_square(u: HardyCoeffs, size: int) -> float:
    """Residual of K_u^2 = H_u^2 - ( . | u) u on an interior section."""
    if 2 * size > u.n_modes:
        raise ValueError("need 2*size <= N for an exact interior section")
    h2 = hankel_matrix(u, size).squared()
    k2 = shifted_hankel_matrix(u, size).squared()
    head = u.coeffs[:size]
    rank_one = np.outer(head, np.conj(head))
    return float(np.max(np.abs(k2 - (h2 - rank_one))))


def ku2_spectrum(u: HardyCoeffs, size: int) -> tuple[np.ndarray, float]:
    """Eigenvalues of the K_u^2 section (descending) and the trace of |K_u|.

    K_u^2 = K conj(K) is Hermitian positive semidefinite; the trace of |K_u|
    is the sum of the singular values of the K section.  Both are conserved
    along the flow up to section leakage.
    """
    k = shifted_hankel_matrix(u, size)
    eigs = np.linalg.eigvalsh(k.squared())[::-1]
    trace_abs = float(np.sum(np.linalg.svd(k.mat, compute_uv=False)))
    return eigs, trace_abs


def numerical_rank(mat: np.ndarray, tol: float = 1e-8) -> int:
    """Number of singular values above tol times the largest one."""
    m = np.asarray(mat)
    if m.size == 0:
        return 0
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


def rational_taylor(numer: np.ndarray, denom: np.ndarray, n_modes: int) -> HardyCoeffs:
    """Taylor coefficients of A(z)/B(z) on the disk, truncated to n_modes.

    ``numer`` and ``denom`` hold ascending coefficients; B(0) must be nonzero
    and B must have no roots in the closed unit disk (so the expansion lies
    in the Hardy space).
    """
    a = np.asarray(numer, dtype=np.complex128)
    b = np.asarray(denom, dtype=np.complex128)
    if b.size == 0 or b[0] == 0:
        raise ValueError("denominator must satisfy B(0) != 0")
    if b.size > 1:
        roots = np.roots(b[::-1])
        if np.any(np.abs(roots) <= 1.0 + 1e-12):
            raise ValueError("denominator has a root in the closed unit disk")
    coeffs = np.zeros(n_modes, dtype=np.complex128)
    for n in range(n_modes):
        acc = a[n] if n < a.size else 0.0
        for i in range(1, min(n, b.size - 1) + 1):
            acc -= b[i] * coeffs[n - i]
        coeffs[n] = acc / b[0]
    return HardyCoeffs(coeffs)


def random_rational(k: int, rng: np.random.Generator, pole_radius: float = 0.7):
    """Random (A, B) with max(deg A, deg B) = k, coprime, B disk-root-free.

    Poles 1/q are generated from q in the disk of radius ``pole_radius``, so
    the Taylor series decays at least geometrically.  Returns ascending
    coefficient arrays (numer, denom).
    """
    if k < 1:
        raise ValueError("degree k must be >= 1")
    while True:
        if rng.random() < 0.5:
            deg_b = k
            deg_a = int(rng.integers(0, k + 1))
        else:
            deg_a = k
            deg_b = int(rng.integers(0, k))
        q = pole_radius * np.sqrt(rng.random(deg_b)) * np.exp(
            2j * np.pi * rng.random(deg_b)
        )
        denom = np.array([1.0 + 0j])
        for pole in q:
            denom = np.convolve(denom, np.array([1.0, -pole]))
        numer = rng.standard_normal(deg_a + 1) + 1j * rng.standard_normal(deg_a + 1)
        if abs(numer[-1]) < 0.1:
            continue
        if deg_b > 0:
            roots_b = 1.0 / q
            if np.min(np.abs(np.polyval(numer[::-1], roots_b))) < 1e-3:
                continue  # nearly common factor; resample
        return numer, denom
