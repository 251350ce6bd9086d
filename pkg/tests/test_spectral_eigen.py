"""
Tests para el solver de Jacobi y el clustering espectral.
"""

import pytest
import numpy as np
from app.core.exceptions import ClusteringError, EigenConvergenceError
from app.models.clustering import SpectralAffinity
from app.services.eigen import symmetric_eigen
from app.services.spectral import (
    SpectralClustering,
    affinity_matrix,
    normalized_laplacian,
    spectral_clustering,
    spectral_clustering_affinity,
)


class TestSymmetricEigen:
    """Tests del método de Jacobi."""

    def test_reconstruction(self):
        """‖VΛVᵀ − M‖∞ < 1e-7 en matrices simétricas aleatorias 20 × 20."""
        rng = np.random.default_rng(0)
        for _ in range(10):
            B = rng.normal(size=(20, 20))
            M = (B + B.T) / 2.0
            values, vectors = symmetric_eigen(M)

            assert np.max(np.abs(vectors @ np.diag(values) @ vectors.T - M)) < 1e-7
            assert np.max(np.abs(vectors.T @ vectors - np.eye(20))) < 1e-9
            assert np.all(np.diff(values) >= 0.0)

    def test_matches_numpy(self):
        """Los autovalores coinciden con numpy."""
        B = np.random.default_rng(1).normal(size=(8, 8))
        M = B @ B.T
        values, _ = symmetric_eigen(M)

        np.testing.assert_allclose(values, np.linalg.eigvalsh(M), atol=1e-9)

    def test_diagonal_input(self):
        """Una matriz diagonal ya está resuelta."""
        values, vectors = symmetric_eigen(np.diag([3.0, 1.0, 2.0]))

        np.testing.assert_array_equal(values, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])

    def test_asymmetric_rejected(self):
        """Una matriz asimétrica es un error."""
        with pytest.raises(ClusteringError):
            symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_too_large(self):
        """Tamaño por encima del límite."""
        with pytest.raises(ClusteringError):
            symmetric_eigen(np.eye(5), max_size=4)

    def test_no_convergence(self):
        """Sin barridos suficientes se informa la no convergencia."""
        B = np.random.default_rng(2).normal(size=(10, 10))
        with pytest.raises(EigenConvergenceError):
            symmetric_eigen(B + B.T, max_sweeps=1, tol=1e-300)


class TestSpectralClustering:
    """Tests del clustering espectral."""

    def test_disconnected_components(self):
        """Dos componentes sin aristas entre sí, k=2: recuperación exacta."""
        A = np.zeros((7, 7))
        A[:4, :4] = 1.0
        A[4:, 4:] = 1.0
        np.fill_diagonal(A, 0.0)
        result = spectral_clustering_affinity(A, 2)

        assert result.labels == [0, 0, 0, 0, 1, 1, 1]

    def test_laplacian_psd(self):
        """El Laplaciano normalizado tiene autovalores en [0, 2]."""
        X = np.random.default_rng(3).normal(size=(12, 4))
        values, _ = symmetric_eigen(normalized_laplacian(affinity_matrix(X)))

        assert values[0] >= -1e-9
        assert values[-1] <= 2.0 + 1e-9

    def test_affinities(self):
        """cosine-shifted con diagonal nula y rbf con diagonal 1, ambas en [0, 1]."""
        X = np.random.default_rng(4).normal(size=(6, 3))
        shifted = affinity_matrix(X, SpectralAffinity.COSINE_SHIFTED)
        rbf = affinity_matrix(X, SpectralAffinity.RBF, gamma=0.5)

        assert np.all(np.diag(shifted) == 0.0)
        assert np.all(np.diag(rbf) == 1.0)
        for A in (shifted, rbf):
            assert np.all((A >= 0.0) & (A <= 1.0 + 1e-12))
            np.testing.assert_allclose(A, A.T)

    def test_two_directions(self):
        """Puntos alrededor de dos direcciones ortogonales."""
        rng = np.random.default_rng(5)
        X = np.vstack([
            np.array([1.0, 0.0, 0.0]) + rng.normal(scale=0.05, size=(10, 3)),
            np.array([0.0, 1.0, 0.0]) + rng.normal(scale=0.05, size=(10, 3)),
        ])
        result = spectral_clustering(X, 2, affinity=SpectralAffinity.RBF, gamma=2.0)

        assert result.labels == [0] * 10 + [1] * 10

    def test_k_one(self):
        """k=1 no necesita descomposición."""
        result = spectral_clustering(np.random.default_rng(6).normal(size=(5, 2)), 1)

        assert result.labels == [0] * 5

    def test_single_point_rejected(self):
        """n < 2 es un error."""
        with pytest.raises(ClusteringError):
            spectral_clustering(np.ones((1, 3)), 1)

    def test_negative_affinity_rejected(self):
        """La afinidad debe ser no negativa."""
        with pytest.raises(ClusteringError):
            spectral_clustering_affinity(np.array([[0.0, -1.0], [-1.0, 0.0]]), 2)

    def test_estimator(self):
        """fit_predict del estimador."""
        A_points = np.vstack([np.tile([1.0, 0.0], (4, 1)), np.tile([0.0, 1.0], (4, 1))])
        labels = SpectralClustering(n_clusters=2).fit_predict(A_points)

        assert labels.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
