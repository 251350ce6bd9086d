"""
Clustering espectral con Laplaciano normalizado simétrico.
Usa el solver de Jacobi para la descomposición y K-Means sobre el embedding espectral.
"""

from typing import Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from sklearn.base import BaseEstimator, ClusterMixin  # Interfaz de estimador
from app.core.exceptions import ClusteringError  # Errores de dominio
from app.models.clustering import ClusterAssignment, SpectralAffinity  # Tipos de dominio
from app.services.eigen import DEFAULT_MAX_SIZE, symmetric_eigen  # Solver de autovalores
from app.services.kmeans import kmeans  # Agrupación final de filas
from app.services.similarity import cosine, neg_sq_euclidean  # Similitudes base

# Se suma al grado para que los vértices aislados no dividan por cero
DEGREE_EPSILON = 1e-12


def affinity_matrix(
    X: np.ndarray,
    affinity: Union[SpectralAffinity, str] = SpectralAffinity.COSINE_SHIFTED,
    gamma: float = 1.0
) -> np.ndarray:
    """
    Afinidad no negativa entre filas.

    cosine-shifted: (1 + cos)/2 con diagonal nula; rbf: exp(−γ‖x_i − x_j‖²).
    """
    X = np.asarray(X, dtype=np.float64)
    if SpectralAffinity(affinity) == SpectralAffinity.RBF:
        return np.exp(gamma * neg_sq_euclidean(X))
    A = (1.0 + cosine(X)) / 2.0
    np.fill_diagonal(A, 0.0)
    return A


def normalized_laplacian(A: np.ndarray) -> np.ndarray:
    """L = I − D^{−1/2} A D^{−1/2}, con ε en el grado."""
    degree = A.sum(axis=1) + DEGREE_EPSILON
    inv_sqrt = 1.0 / np.sqrt(degree)
    L = np.eye(A.shape[0]) - inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return (L + L.T) / 2.0


def spectral_embedding(A: np.ndarray, k: int, max_size: int = DEFAULT_MAX_SIZE) -> np.ndarray:
    """Filas normalizadas de los k autovectores de menor autovalor del Laplaciano."""
    _, vectors = symmetric_eigen(normalized_laplacian(A), max_size=max_size)
    U = vectors[:, :k]
    norms = np.linalg.norm(U, axis=1)
    return U / np.where(norms > 0.0, norms, 1.0)[:, None]


def spectral_clustering_affinity(
    A: np.ndarray,
    k: int,
    seed: int = 42,
    max_size: int = DEFAULT_MAX_SIZE,
    n_restarts: int = 10,
    max_iter: int = 300
) -> ClusterAssignment:
    """
    Clustering espectral sobre una afinidad precalculada.

    Args:
        A: Afinidad n × n simétrica no negativa
        k: Número de clusters
        seed: Semilla de K-Means
        max_size: Tamaño máximo para el solver
        n_restarts: Reinicios de K-Means
        max_iter: Iteraciones de K-Means

    Returns:
        Asignación canónica

    Raises:
        ClusteringError: n < 2 o k fuera de [1, n]
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    if n < 2:
        raise ClusteringError("El clustering espectral necesita al menos 2 puntos", n=n)
    if not 1 <= k <= n:
        raise ClusteringError("k fuera de [1, n]", k=k, n=n)
    if np.any(A < 0.0):
        raise ClusteringError("La afinidad debe ser no negativa")
    if k == 1:
        return ClusterAssignment(labels=[0] * n, exemplars=[0], k=1, converged=True, n_iter=0)

    embedding = spectral_embedding(A, k, max_size)
    return kmeans(embedding, k, seed=seed, max_iter=max_iter, n_restarts=n_restarts)


def spectral_clustering(
    X: np.ndarray,
    k: int,
    seed: int = 42,
    affinity: Union[SpectralAffinity, str] = SpectralAffinity.COSINE_SHIFTED,
    gamma: float = 1.0,
    max_size: int = DEFAULT_MAX_SIZE,
    n_restarts: int = 10,
    max_iter: int = 300
) -> ClusterAssignment:
    """
    Clustering espectral de las filas de X en k grupos.

    Args:
        X: Matriz n × dim
        k: Número de clusters
        seed: Semilla
        affinity: cosine-shifted o rbf
        gamma: Parámetro de la afinidad rbf

    Returns:
        Asignación canónica
    """
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < 2:
        raise ClusteringError("El clustering espectral necesita al menos 2 puntos", n=X.shape[0])
    A = affinity_matrix(X, affinity, gamma)
    return spectral_clustering_affinity(A, k, seed, max_size, n_restarts, max_iter)


class SpectralClustering(ClusterMixin, BaseEstimator):
    """Estimador estilo scikit-learn sobre spectral_clustering."""

    def __init__(
        self,
        n_clusters: int = 2,
        affinity: str = SpectralAffinity.COSINE_SHIFTED.value,
        gamma: float = 1.0,
        random_state: int = 42
    ):
        self.n_clusters = n_clusters
        self.affinity = affinity
        self.gamma = gamma
        self.random_state = random_state

    def fit(self, X: np.ndarray, y=None) -> "SpectralClustering":
        """Agrupa las filas de X."""
        assignment = spectral_clustering(X, self.n_clusters, self.random_state, self.affinity, self.gamma)
        self.assignment_ = assignment
        self.labels_ = np.asarray(assignment.labels)
        return self
