"""
K-Means con inicialización k-means++ e iteraciones de Lloyd.
Se usa en la estrategia de dos etapas con el k que induce Affinity Propagation.
"""

from typing import List, Optional, Tuple  # Tipos de datos
import numpy as np  # Álgebra lineal
from sklearn.base import BaseEstimator, ClusterMixin  # Interfaz de estimador
from app.core.exceptions import ClusteringError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging
from app.models.clustering import ClusterAssignment  # Tipos de dominio
from app.utils.labels import canonicalize_labels  # Etiquetado canónico

logger = get_logger(__name__)

# Tolerancia relativa al verificar que la inercia no crece
INERTIA_TOLERANCE = 1e-9


def _sq_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Distancias cuadradas n × k calculadas por diferencias."""
    distances = np.empty((X.shape[0], centers.shape[0]))
    for j, center in enumerate(centers):
        diff = X - center
        distances[:, j] = np.einsum('ij,ij->i', diff, diff)
    return distances


def kmeans_plus_plus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    Elige k centros iniciales con muestreo proporcional a D².

    Si todos los puntos restantes coinciden con algún centro, toma el primer
    índice aún no elegido.
    """
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = _sq_distances(X, X[chosen])[:, 0]
    while len(chosen) < k:
        total = closest.sum()
        if total <= 0.0:
            candidate = next(i for i in range(n) if i not in chosen)
        else:
            candidate = int(rng.choice(n, p=closest / total))
        chosen.append(candidate)
        closest = np.minimum(closest, _sq_distances(X, X[[candidate]])[:, 0])
    return X[chosen].copy()


def _repair_empty(labels: np.ndarray, distances: np.ndarray, k: int) -> np.ndarray:
    """Re-siembra cada cluster vacío en el punto más lejano de su centro."""
    labels = labels.copy()
    own = distances[np.arange(labels.size), labels].copy()
    for j in range(k):
        if np.any(labels == j):
            continue
        sizes = np.bincount(labels, minlength=k)
        movable = sizes[labels] > 1
        candidates = np.where(movable, own, -np.inf)
        farthest = int(np.argmax(candidates))
        labels[farthest] = j
        own[farthest] = 0.0
    return labels


def _lloyd(
    X: np.ndarray,
    centers: np.ndarray,
    max_iter: int
) -> Tuple[np.ndarray, np.ndarray, float, List[float], int, bool]:
    k = centers.shape[0]
    labels: Optional[np.ndarray] = None
    path: List[float] = []
    converged = False
    n_iter = 0

    for n_iter in range(1, max_iter + 1):
        distances = _sq_distances(X, centers)
        new_labels = _repair_empty(np.argmin(distances, axis=1), distances, k)
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        centers = np.array([X[labels == j].mean(axis=0) for j in range(k)])

        diff = X - centers[labels]
        inertia = float(np.einsum('ij,ij->', diff, diff))
        if path and inertia > path[-1] + INERTIA_TOLERANCE * max(1.0, path[-1]):
            raise ClusteringError(
                "La inercia de K-Means aumentó entre iteraciones",
                n_iter=n_iter,
                previous=path[-1],
                current=inertia
            )
        path.append(inertia)

    return labels, centers, path[-1], path, n_iter, converged


def kmeans_with_path(
    X: np.ndarray,
    k: int,
    seed: int = 42,
    max_iter: int = 300,
    n_restarts: int = 10
) -> Tuple[ClusterAssignment, np.ndarray, List[float]]:
    """
    K-Means devolviendo también los centroides y la inercia por iteración del mejor reinicio.

    Args:
        X: Matriz n × dim
        k: Número de clusters, 1 <= k <= n
        seed: Semilla de la inicialización
        max_iter: Iteraciones de Lloyd por reinicio
        n_restarts: Reinicios; gana el de menor inercia

    Returns:
        (asignación, centroides en orden canónico, trayectoria de inercia)

    Raises:
        ClusteringError: k fuera de rango o inercia creciente
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if k < 1:
        raise ClusteringError("k debe ser >= 1", k=k)
    if k > n:
        raise ClusteringError("k no puede superar el número de puntos", k=k, n=n)
    if not np.all(np.isfinite(X)):
        raise ClusteringError("La matriz contiene valores no finitos")

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_restarts):
        initial = kmeans_plus_plus(X, k, rng)
        result = _lloyd(X, initial, max_iter)
        if best is None or result[2] < best[2]:
            best = result

    labels, centers, inertia, path, n_iter, converged = best
    canonical = canonicalize_labels(labels.tolist())
    order = list(dict.fromkeys(labels.tolist()))
    centers = centers[order]

    # Punto más cercano a cada centroide, dentro de su cluster
    canonical_arr = np.asarray(canonical)
    distances = _sq_distances(X, centers)
    exemplars = []
    for j in range(k):
        members = np.flatnonzero(canonical_arr == j)
        exemplars.append(int(members[np.argmin(distances[members, j])]))

    assignment = ClusterAssignment(
        labels=canonical,
        exemplars=sorted(exemplars),
        k=k,
        converged=converged,
        n_iter=n_iter,
        inertia=inertia
    )
    return assignment, centers, path


def kmeans(
    X: np.ndarray,
    k: int,
    seed: int = 42,
    max_iter: int = 300,
    n_restarts: int = 10
) -> ClusterAssignment:
    """
    K-Means determinista dada la semilla.

    Args:
        X: Matriz n × dim
        k: Número de clusters, 1 <= k <= n
        seed: Semilla
        max_iter: Iteraciones de Lloyd por reinicio
        n_restarts: Número de reinicios k-means++

    Returns:
        Asignación canónica del reinicio de menor inercia
    """
    return kmeans_with_path(X, k, seed, max_iter, n_restarts)[0]


class KMeans(ClusterMixin, BaseEstimator):
    """Estimador estilo scikit-learn sobre kmeans."""

    def __init__(self, n_clusters: int = 2, max_iter: int = 300, n_init: int = 10, random_state: int = 42):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.n_init = n_init
        self.random_state = random_state

    def fit(self, X: np.ndarray, y=None) -> "KMeans":
        """Agrupa las filas de X."""
        assignment, centers, path = kmeans_with_path(
            X, self.n_clusters, self.random_state, self.max_iter, self.n_init
        )
        self.assignment_ = assignment
        self.labels_ = np.asarray(assignment.labels)
        self.cluster_centers_ = centers
        self.inertia_ = assignment.inertia
        self.inertia_path_ = path
        self.n_iter_ = assignment.n_iter
        return self
