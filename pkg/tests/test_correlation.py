"""Correlation matrices and spectra against LAPACK and characteristic-polynomial oracles."""

import math

import numpy as np
import pytest

from fas_edof import (
    BranchWeights,
    CorrelationMatrix,
    FasGeometry,
    NumericError,
    Spectrum,
    build_jakes,
    eigendecompose,
    kron_spectrum,
    normalized_weights,
    truncation_mse,
)

J0_PI = -0.3042421776440938  # power-series value of J0(pi)
J0_HALF_PI = 0.4720012157682347


def identity_spectrum(n: int) -> Spectrum:
    return Spectrum(eigenvalues=np.ones(n), eigenvectors=np.eye(n))


def charpoly_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues via Faddeev-LeVerrier coefficients and companion roots.

    Independent of any symmetric eigensolver; usable only for small orders.
    """
    n = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    roots = np.roots(coeffs)
    assert np.max(np.abs(roots.imag)) < 1e-8
    return np.sort(roots.real)[::-1]


class TestBuildJakes:
    def test_two_port_structure(self):
        from fas_edof import bessel_j0

        for w in (0.3, 1.0, 2.5):
            r = build_jakes(FasGeometry(2, w)).entries
            rho = bessel_j0(2 * math.pi * w)
            assert np.allclose(r, [[1.0, rho], [rho, 1.0]], atol=0)

    def test_three_port_half_wavelength(self):
        r = build_jakes(FasGeometry(3, 0.5)).entries
        assert r[0, 2] == pytest.approx(J0_PI, abs=1e-10)
        assert r[2, 0] == r[0, 2]

    def test_unit_diagonal_exact(self):
        for geom in (FasGeometry(7, 1.3), FasGeometry(20, 3.0), FasGeometry(33, 5.0)):
            r = build_jakes(geom).entries
            assert np.all(np.diag(r) == 1.0)
            assert np.trace(r) == geom.ports

    def test_symmetry(self):
        r = build_jakes(FasGeometry(11, 2.0)).entries
        assert np.array_equal(r, r.T)


class TestCorrelationMatrixValidation:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            CorrelationMatrix(np.ones((2, 3)))

    def test_rejects_non_unit_diagonal(self):
        with pytest.raises(ValueError):
            CorrelationMatrix(np.array([[1.0, 0.2], [0.2, 0.9]]))

    def test_rejects_asymmetry(self):
        with pytest.raises(ValueError):
            CorrelationMatrix(np.array([[1.0, 0.2], [0.3, 1.0]]))


class TestEigendecompose:
    def test_identity_matrix(self):
        spectrum = eigendecompose(CorrelationMatrix(np.eye(6)))
        assert np.allclose(spectrum.eigenvalues, 1.0)
        assert np.allclose(spectrum.eigenvectors @ spectrum.eigenvectors.T, np.eye(6))

    def test_two_port_closed_form(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(2, 0.25)))
        assert spectrum.eigenvalues[0] == pytest.approx(1.0 + J0_HALF_PI, abs=1e-10)
        assert spectrum.eigenvalues[1] == pytest.approx(1.0 - J0_HALF_PI, abs=1e-10)

    @pytest.mark.parametrize("ports,aperture", [(3, 0.4), (4, 1.1)])
    def test_small_orders_match_charpoly_roots(self, ports, aperture):
        r = build_jakes(FasGeometry(ports, aperture))
        spectrum = eigendecompose(r)
        assert np.allclose(
            spectrum.eigenvalues, charpoly_eigenvalues(r.entries), atol=1e-9
        )

    @pytest.mark.parametrize(
        "ports,aperture", [(8, 0.7), (20, 3.0), (20, 1.0), (40, 3.0), (31, 5.0)]
    )
    def test_matches_lapack(self, ports, aperture):
        r = build_jakes(FasGeometry(ports, aperture))
        spectrum = eigendecompose(r)
        reference = np.linalg.eigvalsh(r.entries)[::-1]
        assert np.max(np.abs(spectrum.eigenvalues - np.clip(reference, 0, None))) < 1e-9

    def test_spectrum_invariants(self):
        geom = FasGeometry(20, 3.0)
        r = build_jakes(geom)
        spectrum = eigendecompose(r)
        lam, u = spectrum.eigenvalues, spectrum.eigenvectors
        assert abs(lam.sum() - geom.ports) <= 1e-8 * geom.ports
        assert np.max(np.abs(u.T @ u - np.eye(geom.ports))) <= 1e-8
        assert np.max(np.abs((u * lam) @ u.T - r.entries)) <= 1e-8
        assert np.all(np.diff(lam) <= 0)
        assert np.all(lam >= 0)

    def test_dominant_mode_concentration(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(20, 3.0)))
        assert spectrum.eigenvalues[:7].sum() >= 0.9 * 20

    def test_concentration_grows_with_port_count(self):
        # N >= 4K* keeps >= 90% of the power in the leading K* modes
        ratios = []
        for ports in (16, 24, 40):
            spectrum = eigendecompose(build_jakes(FasGeometry(ports, 1.0)))
            ratios.append(spectrum.eigenvalues[:3].sum() / ports)
        assert all(r >= 0.9 for r in ratios)
        assert ratios[0] < ratios[1] < ratios[2]

    def test_permutation_stability(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(12, 2.0)))
        rebuilt = (spectrum.eigenvectors * spectrum.eigenvalues) @ spectrum.eigenvectors.T
        np.fill_diagonal(rebuilt, 1.0)  # remove ~1e-16 diagonal drift before re-validating
        again = eigendecompose(CorrelationMatrix(rebuilt))
        assert np.max(np.abs(again.eigenvalues - spectrum.eigenvalues)) <= 1e-8

    def test_tiny_negative_eigenvalue_clamped(self):
        # rank-deficient PSD matrix: eigenvalues {2, 0}, rounding may dip below 0
        spectrum = eigendecompose(CorrelationMatrix(np.array([[1.0, 1.0], [1.0, 1.0]])))
        assert spectrum.eigenvalues[0] == pytest.approx(2.0, abs=1e-12)
        assert spectrum.eigenvalues[1] == 0.0

    def test_genuinely_negative_eigenvalue_raises(self):
        with pytest.raises(NumericError):
            eigendecompose(CorrelationMatrix(np.array([[1.0, 1.5], [1.5, 1.0]])))


class TestNormalizedWeights:
    def test_uniform_spectrum_gives_unit_weights(self):
        n, k = 12, 3
        lam = np.full(n, 0.0)
        lam[:k] = n / k
        spectrum = Spectrum(eigenvalues=lam, eigenvectors=None)
        weights = normalized_weights(spectrum, k)
        assert np.allclose(weights.beta, 1.0)

    @pytest.mark.parametrize(
        "aperture,kstar,b_max,b_min",
        [(1.0, 3, 1.23, 0.60), (3.0, 7, 1.50, 0.67)],
    )
    def test_reference_weight_table(self, aperture, kstar, b_max, b_min):
        spectrum = eigendecompose(build_jakes(FasGeometry(20, aperture)))
        weights = normalized_weights(spectrum, kstar)
        assert weights.beta.mean() == pytest.approx(0.97, abs=0.02)
        assert weights.beta.max() == pytest.approx(b_max, abs=0.02)
        assert weights.beta.min() == pytest.approx(b_min, abs=0.02)

    def test_out_of_range_kstar(self):
        spectrum = identity_spectrum(4)
        with pytest.raises(ValueError):
            normalized_weights(spectrum, 5)

    def test_weight_sum_bounded_by_count(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(20, 3.0)))
        weights = normalized_weights(spectrum, 7)
        assert float(weights.beta.sum()) <= 7 + 1e-6

    def test_oversized_weight_sum_warns(self):
        with pytest.warns(UserWarning, match="exceeds the branch count"):
            BranchWeights(beta=np.array([2.0, 0.5]))

    def test_rejects_unsorted_weights(self):
        with pytest.raises(ValueError):
            BranchWeights(beta=np.array([0.5, 2.0]))

    def test_rejects_non_positive_weights(self):
        with pytest.raises(ValueError):
            BranchWeights(beta=np.array([1.0, 0.0]))


class TestTruncationMse:
    def test_full_rank_is_zero(self):
        spectrum = identity_spectrum(5)
        assert truncation_mse(spectrum, 5) == 0.0

    def test_identity_rank_one(self):
        spectrum = identity_spectrum(10)
        assert truncation_mse(spectrum, 1) == pytest.approx(0.9)

    def test_dominant_rank_keeps_error_small(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(20, 3.0)))
        assert truncation_mse(spectrum, 7) <= 0.1

    def test_non_increasing_in_rank(self):
        spectrum = eigendecompose(build_jakes(FasGeometry(20, 3.0)))
        values = [truncation_mse(spectrum, rank) for rank in range(1, 21)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_rank_bounds(self):
        spectrum = identity_spectrum(4)
        with pytest.raises(ValueError):
            truncation_mse(spectrum, 0)
        with pytest.raises(ValueError):
            truncation_mse(spectrum, 5)


class TestKronSpectrum:
    def test_identity_times_identity(self):
        product = kron_spectrum(identity_spectrum(3), identity_spectrum(4))
        assert np.allclose(product.eigenvalues, 1.0)
        assert product.eigenvectors is None

    def test_two_port_products(self):
        axis = eigendecompose(build_jakes(FasGeometry(2, 0.25)))
        product = kron_spectrum(axis, axis)
        expected = sorted(
            [
                (1 + J0_HALF_PI) ** 2,
                (1 + J0_HALF_PI) * (1 - J0_HALF_PI),
                (1 - J0_HALF_PI) * (1 + J0_HALF_PI),
                (1 - J0_HALF_PI) ** 2,
            ],
            reverse=True,
        )
        assert np.allclose(product.eigenvalues, expected, atol=1e-9)
        assert np.allclose(
            product.eigenvalues, [2.1668, 0.7772, 0.7772, 0.2788], atol=1e-4
        )

    def test_trace_is_port_product(self):
        sx = eigendecompose(build_jakes(FasGeometry(12, 1.5)))
        sy = eigendecompose(build_jakes(FasGeometry(9, 2.5)))
        total = float(kron_spectrum(sx, sy).eigenvalues.sum())
        assert total == pytest.approx(12 * 9, rel=1e-6)

    def test_dominant_count_matches_2d_edof(self):
        axis = eigendecompose(build_jakes(FasGeometry(20, 2.0)))
        product = kron_spectrum(axis, axis)
        threshold = 0.5 * (400 / 25)
        count = int((product.eigenvalues >= threshold).sum())
        assert abs(count - 25) <= 2
