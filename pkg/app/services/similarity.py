"""
Construcción de matrices de similitud para Affinity Propagation.
"""

from typing import Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.exceptions import ClusteringError  # Errores de dominio
from app.models.clustering import Metric, Preference, SimilarityMatrix  # Tipos de dominio

# Escala relativa del ruido que rompe empates exactos
NOISE_SCALE = 1e-12


def _check_finite(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ClusteringError("Se esperaba una matriz n × dim", shape=X.shape)
    if X.shape[0] < 1:
        raise ClusteringError("Se necesita al menos un punto")
    if not np.all(np.isfinite(X)):
        raise ClusteringError("La matriz contiene valores no finitos")
    return X


def neg_sq_euclidean(X: np.ndarray) -> np.ndarray:
    """−‖x_i − x_j‖² calculado por diferencias: exacto en filas idénticas y simétrico."""
    n = X.shape[0]
    s = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        diff = X - X[i]
        s[i] = -np.einsum('ij,ij->i', diff, diff)
    return s


def cosine(X: np.ndarray) -> np.ndarray:
    """Coseno entre filas; los vectores nulos tienen similitud 0 con todo."""
    norms = np.linalg.norm(X, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    unit = X / safe[:, None]
    unit[norms == 0.0] = 0.0
    s = unit @ unit.T
    return np.clip((s + s.T) / 2.0, -1.0, 1.0)


def resolve_preference(s: np.ndarray, preference: Preference) -> float:
    """Devuelve la preferencia numérica; 'median' usa la mediana fuera de la diagonal."""
    if preference != "median":
        return float(preference)
    n = s.shape[0]
    if n < 2:
        return 0.0
    off_diagonal = s[~np.eye(n, dtype=bool)]
    return float(np.median(off_diagonal))


def similarity_matrix(
    X: np.ndarray,
    metric: Union[Metric, str] = Metric.NEG_SQ_EUCLIDEAN,
    preference: Preference = -0.65
) -> SimilarityMatrix:
    """
    Matriz de similitudes por pares con la preferencia en la diagonal.

    Args:
        X: Matriz n × dim de huellas
        metric: neg-sq-euclidean o cosine
        preference: Valor de la diagonal, o 'median'

    Returns:
        Matriz simétrica fuera de la diagonal

    Raises:
        ClusteringError: Si X está vacía o tiene valores no finitos
    """
    X = _check_finite(X)
    metric = Metric(metric)
    s = neg_sq_euclidean(X) if metric == Metric.NEG_SQ_EUCLIDEAN else cosine(X)
    value = resolve_preference(s, preference)
    np.fill_diagonal(s, value)
    return SimilarityMatrix(s, metric, value)


def add_tie_breaking_noise(s: np.ndarray, seed: int) -> np.ndarray:
    """
    Suma ruido determinista de magnitud 1e-12·|s| fuera de la diagonal.

    Args:
        s: Matriz de similitud
        seed: Semilla del generador

    Returns:
        Copia de s con ruido; la diagonal no cambia
    """
    rng = np.random.default_rng(seed)
    n = s.shape[0]
    noise = NOISE_SCALE * np.abs(s) * rng.standard_normal((n, n))
    np.fill_diagonal(noise, 0.0)
    return s + noise
