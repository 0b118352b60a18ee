import numpy as np
import pytest

from szegolab.hankel import (
    hankel_matrix,
    ku2_spectrum,
    lax_operators,
    numerical_rank,
    random_rational,
    rational_taylor,
    shifted_hankel_matrix,
    toeplitz_abs_squared,
    toeplitz_matrix,
    verify_hpi,
    verify_k_square,
)
from szegolab.hardy import HardyCoeffs
from szegolab.reduced import L1State, to_fourier


def random_poly(rng, max_deg=8, n=64):
    deg = int(rng.integers(1, max_deg + 1))
    coeffs = np.zeros(n, dtype=complex)
    coeffs[: deg + 1] = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    return HardyCoeffs(coeffs)


class TestHankelMatrices:
    def test_h_z_swaps_first_two_basis_vectors(self):
        h = hankel_matrix(HardyCoeffs(np.array([0.0, 1.0])), 2)
        assert np.array_equal(h.mat, [[0, 1], [1, 0]])
        assert numerical_rank(h.mat) == 2
        e0 = np.array([1.0, 0.0])
        assert np.allclose(h.apply(e0), [0.0, 1.0])

    def test_constant_rank_one(self):
        b = 1.5 - 0.5j
        h = hankel_matrix(HardyCoeffs(np.array([b, 0.0])), 2)
        assert np.array_equal(h.mat, [[b, 0], [0, 0]])
        assert numerical_rank(h.mat) == 1

    def test_geometric_coefficients_rank_one(self):
        p = 0.6 + 0.2j
        u = rational_taylor([1.0], [1.0, -p], 32)
        h = hankel_matrix(u, 8)
        idx = np.add.outer(np.arange(8), np.arange(8))
        assert np.allclose(h.mat, p**idx)
        assert numerical_rank(h.mat) == 1

    def test_section_exceeds_truncation(self):
        with pytest.raises(ValueError):
            hankel_matrix(HardyCoeffs(np.zeros(4)), 5)

    def test_symmetry_enforced(self, rng):
        u = random_poly(rng)
        for mat in (hankel_matrix(u, 10).mat, shifted_hankel_matrix(u, 10).mat):
            assert np.array_equal(mat, mat.T)


class TestShiftedHankel:
    def test_k_z(self):
        k = shifted_hankel_matrix(HardyCoeffs(np.array([0.0, 1.0])), 2)
        assert np.array_equal(k.mat, [[1, 0], [0, 0]])
        assert numerical_rank(k.mat) == 1

    def test_constant_is_zero(self):
        k = shifted_hankel_matrix(HardyCoeffs(np.array([2.0, 0.0])), 2)
        assert not k.mat.any()
        assert numerical_rank(k.mat) == 0

    def test_rank_one_manifold_entries(self):
        st = L1State(0.4 + 0.1j, 0.9 - 0.3j, 0.5 + 0.2j)
        u = to_fourier(st, 64)
        k = shifted_hankel_matrix(u, 8)
        idx = np.add.outer(np.arange(8), np.arange(8))
        assert np.allclose(k.mat, st.c * st.p**idx)
        assert numerical_rank(k.mat) == 1


class TestToeplitz:
    def test_identity_symbol(self):
        t = toeplitz_matrix({0: 1.0}, 4)
        assert np.array_equal(t.mat, np.eye(4))

    def test_abs_squared_of_one_plus_z(self):
        u = HardyCoeffs(np.array([1.0, 1.0]))
        t = toeplitz_abs_squared(u, 3)
        expected = toeplitz_matrix({-1: 1.0, 0: 2.0, 1: 1.0}, 3)
        assert np.allclose(t.mat, expected.mat)
        assert np.allclose(t.mat, t.mat.conj().T)  # Hermitian: real symbol

    def test_shift_symbol(self):
        t = toeplitz_matrix({1: 1.0}, 3)
        assert np.array_equal(t.mat, np.diag([1.0, 1.0], -1))


class TestLaxOperators:
    def test_h_z_squared_is_projection(self):
        u = HardyCoeffs(np.array([0.0, 1.0, 0.0]))
        h2 = hankel_matrix(u, 3).squared()
        assert np.allclose(h2, np.diag([1.0, 1.0, 0.0]))

    def test_zero_state(self):
        u = HardyCoeffs(np.zeros(4))
        b_u, c_u = lax_operators(u, 2)
        assert not b_u.mat.any() and not c_u.mat.any()

    def test_anti_hermitian(self):
        u = HardyCoeffs(np.array([1.0, 1.0, 0.0, 0.0, 0.0, 0.0]))
        b_u, c_u = lax_operators(u, 2)
        for op in (b_u, c_u):
            assert np.max(np.abs(op.mat + op.mat.conj().T)) <= 1e-14


class TestIdentities:
    def test_hpi_for_z(self):
        u = HardyCoeffs(np.concatenate([[0.0, 1.0], np.zeros(6)]))
        assert verify_hpi(u, 2) <= 1e-15

    def test_hpi_for_zero(self):
        assert verify_hpi(HardyCoeffs(np.zeros(8)), 2) == 0.0

    def test_k_square_for_z(self):
        u = HardyCoeffs(np.concatenate([[0.0, 1.0], np.zeros(2)]))
        assert verify_k_square(u, 2) <= 1e-15

    def test_random_polynomials(self, rng):
        worst_hpi = worst_ksq = 0.0
        for _ in range(100):
            u = random_poly(rng)
            worst_hpi = max(worst_hpi, verify_hpi(u, 16))
            worst_ksq = max(worst_ksq, verify_k_square(u, 16))
        assert worst_hpi <= 1e-10
        assert worst_ksq <= 1e-12

    def test_interior_section_required(self):
        u = HardyCoeffs(np.zeros(8))
        with pytest.raises(ValueError):
            verify_hpi(u, 3)  # 3*3 > 8
        with pytest.raises(ValueError):
            verify_k_square(u, 5)  # 2*5 > 8


class TestSpectrum:
    def test_rank_one_state_single_eigenvalue(self):
        st = L1State(0.5, 0.7, 0.5)
        eigs, trace = ku2_spectrum(to_fourier(st, 64), 16)
        assert eigs[0] > 1e-3
        assert np.max(np.abs(eigs[1:])) <= 1e-12 * eigs[0]
        # rank one: trace of |K| equals the single singular value
        assert abs(trace - np.sqrt(eigs[0])) <= 1e-12

    def test_constant_spectrum_vanishes(self):
        eigs, trace = ku2_spectrum(HardyCoeffs(np.array([3.0, 0.0, 0.0])), 3)
        assert not eigs.any() and trace == 0.0

    def test_psd_and_interlacing(self, rng):
        # K^2 = H^2 - rank-one PSD term, so eigenvalues interlace below.
        for _ in range(20):
            u = random_poly(rng)
            h2 = hankel_matrix(u, 12).squared()
            k2 = shifted_hankel_matrix(u, 12).squared()
            eh = np.linalg.eigvalsh(h2)[::-1]
            ek = np.linalg.eigvalsh(k2)[::-1]
            assert ek.min() >= -1e-12 * max(ek.max(), 1e-30)
            assert eh.min() >= -1e-12 * max(eh.max(), 1e-30)
            assert np.all(ek <= eh + 1e-10)


class TestNumericalRank:
    def test_zero_and_empty(self):
        assert numerical_rank(np.zeros((3, 3))) == 0
        assert numerical_rank(np.zeros((0, 0))) == 0

    def test_monomial_z2(self):
        u = HardyCoeffs(np.array([0.0, 0.0, 1.0, 0.0]))
        assert numerical_rank(shifted_hankel_matrix(u, 4).mat) == 2

    def test_kronecker_rank_of_random_rationals(self, rng):
        for k in (1, 2, 3, 4):
            for _ in range(10):
                numer, denom = random_rational(k, rng)
                u = rational_taylor(numer, denom, 16 * k)
                section = shifted_hankel_matrix(u, 4 * k)
                assert numerical_rank(section.mat, 1e-8) == k


class TestRationalTaylor:
    def test_geometric_series(self):
        u = rational_taylor([1.0], [1.0, -0.5], 6)
        assert np.allclose(u.coeffs, 0.5 ** np.arange(6))

    def test_rejects_pole_in_disk(self):
        with pytest.raises(ValueError):
            rational_taylor([1.0], [1.0, -1.5], 8)  # root at z = 2/3

    def test_rejects_vanishing_constant_term(self):
        with pytest.raises(ValueError):
            rational_taylor([1.0], [0.0, 1.0], 8)
