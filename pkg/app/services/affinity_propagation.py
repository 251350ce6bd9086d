"""
Affinity Propagation por paso de mensajes (responsabilidades y disponibilidades).
Agrupa huellas y, en la estrategia de dos etapas, solo induce el número de sentidos.
"""

from typing import Optional  # Tipos de datos
import numpy as np  # Álgebra lineal
from sklearn.base import BaseEstimator, ClusterMixin  # Interfaz de estimador
from app.core.exceptions import ClusteringError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging
from app.models.clustering import APParams, ClusterAssignment, Metric, SimilarityMatrix  # Tipos de dominio
from app.services.similarity import add_tie_breaking_noise, similarity_matrix  # Matriz de similitud
from app.utils.labels import canonicalize_labels  # Etiquetado canónico

logger = get_logger(__name__)


def _validate(S: SimilarityMatrix, params: APParams) -> None:
    if S.n < 1:
        raise ClusteringError("Affinity Propagation necesita al menos un punto")
    if not 0.5 <= params.damping < 1.0:
        raise ClusteringError("damping fuera de [0.5, 1)", damping=params.damping)
    s = S.s
    if not np.all(np.isfinite(s)):
        raise ClusteringError("La matriz de similitud contiene valores no finitos")
    if not np.allclose(s, s.T, rtol=1e-9, atol=1e-12):
        raise ClusteringError("La matriz de similitud no es simétrica")
    diagonal = np.diag(s)
    if not np.all(diagonal == diagonal[0]):
        raise ClusteringError("La diagonal de la matriz de similitud debe ser uniforme")


def _update_responsibilities(s: np.ndarray, A: np.ndarray, R: np.ndarray, damping: float) -> np.ndarray:
    """r(i,k) ← s(i,k) − max_{k'≠k}[a(i,k') + s(i,k')], amortiguado."""
    n = s.shape[0]
    rows = np.arange(n)
    AS = A + s
    first = np.argmax(AS, axis=1)
    best = AS[rows, first]
    AS[rows, first] = -np.inf
    second = AS.max(axis=1)

    R_new = s - best[:, None]
    R_new[rows, first] = s[rows, first] - second
    return damping * R + (1.0 - damping) * R_new


def _update_availabilities(R: np.ndarray, A: np.ndarray, damping: float) -> np.ndarray:
    """a(i,k) ← min(0, r(k,k) + Σ_{i'∉{i,k}} max(0, r(i',k))); a(k,k) ← Σ_{i'≠k} max(0, r(i',k))."""
    n = R.shape[0]
    rows = np.arange(n)
    Rp = np.maximum(R, 0.0)
    Rp[rows, rows] = 0.0

    # Sumas por columna sobre memoria contigua: mismo orden que una suma 1-D
    totals = np.ascontiguousarray(Rp.T).sum(axis=1)
    A_new = np.minimum(0.0, (np.diag(R) + totals)[None, :] - Rp)
    A_new[rows, rows] = totals
    return damping * A + (1.0 - damping) * A_new


def affinity_propagation(S: SimilarityMatrix, params: APParams) -> ClusterAssignment:
    """
    Ejecuta Affinity Propagation sobre una matriz de similitud.

    Los ejemplares son los puntos con r(k,k) + a(k,k) > 0. Converge cuando el
    conjunto de ejemplares no cambia durante convergence_window iteraciones
    seguidas. Cada punto se asigna al ejemplar de mayor similitud y cada
    ejemplar a su propio cluster. Si no surge ningún ejemplar, devuelve k=1
    con el punto de mayor similitud total como ejemplar.

    Args:
        S: Matriz de similitud con la preferencia en la diagonal
        params: Parámetros de AP

    Returns:
        Asignación canónica; converged=False si se agotó max_iter

    Raises:
        ClusteringError: Entrada inválida o mensajes no finitos
    """
    _validate(S, params)
    n = S.n
    if n == 1:
        return ClusterAssignment(labels=[0], exemplars=[0], k=1, converged=True, n_iter=0)

    s = add_tie_breaking_noise(S.s, params.seed)
    R = np.zeros((n, n))
    A = np.zeros((n, n))
    previous: Optional[np.ndarray] = None
    stable = 0
    converged = False
    n_iter = 0

    for n_iter in range(1, params.max_iter + 1):
        R = _update_responsibilities(s, A, R, params.damping)
        A = _update_availabilities(R, A, params.damping)
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(A))):
            raise ClusteringError("Mensajes no finitos durante la iteración", n_iter=n_iter)

        is_exemplar = (np.diag(A) + np.diag(R)) > 0.0
        if previous is not None and np.array_equal(is_exemplar, previous):
            stable += 1
        else:
            stable = 1
        previous = is_exemplar
        if stable >= params.convergence_window and is_exemplar.any():
            converged = True
            break

    exemplars = np.flatnonzero(previous)
    if exemplars.size == 0:
        exemplar = int(np.argmax(S.s.sum(axis=1)))
        return ClusterAssignment(
            labels=[0] * n, exemplars=[exemplar], k=1, converged=converged, n_iter=n_iter
        )

    raw = np.argmax(s[:, exemplars], axis=1)
    raw[exemplars] = np.arange(exemplars.size)
    return ClusterAssignment(
        labels=canonicalize_labels(raw.tolist()),
        exemplars=exemplars.tolist(),
        k=int(exemplars.size),
        converged=converged,
        n_iter=n_iter
    )


def induce_k(S: SimilarityMatrix, params: APParams) -> int:
    """
    Número de sentidos inducido por Affinity Propagation, acotado a [1, n].

    Args:
        S: Matriz de similitud
        params: Parámetros de AP

    Returns:
        k inducido
    """
    assignment = affinity_propagation(S, params)
    return int(min(max(assignment.k, 1), S.n))


class AffinityPropagation(ClusterMixin, BaseEstimator):
    """Estimador estilo scikit-learn sobre affinity_propagation."""

    def __init__(
        self,
        preference=-0.65,
        damping: float = 0.75,
        max_iter: int = 1000,
        convergence_window: int = 50,
        metric: str = Metric.NEG_SQ_EUCLIDEAN.value,
        random_state: int = 42
    ):
        self.preference = preference
        self.damping = damping
        self.max_iter = max_iter
        self.convergence_window = convergence_window
        self.metric = metric
        self.random_state = random_state

    def fit(self, X: np.ndarray, y=None) -> "AffinityPropagation":
        """Agrupa las filas de X."""
        params = APParams(
            preference=self.preference,
            damping=self.damping,
            max_iter=self.max_iter,
            convergence_window=self.convergence_window,
            seed=self.random_state
        )
        S = similarity_matrix(X, self.metric, params.preference)
        assignment = affinity_propagation(S, params)
        self.assignment_ = assignment
        self.labels_ = np.asarray(assignment.labels)
        self.cluster_centers_indices_ = np.asarray(assignment.exemplars)
        self.n_iter_ = assignment.n_iter
        self.converged_ = assignment.converged
        self.preference_ = S.preference
        return self
