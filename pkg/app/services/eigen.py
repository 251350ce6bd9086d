"""
Solver de autovalores para matrices simétricas densas por rotaciones de Jacobi cíclicas.
"""

from typing import Tuple  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.exceptions import ClusteringError, EigenConvergenceError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging

logger = get_logger(__name__)

DEFAULT_MAX_SIZE = 2048
DEFAULT_MAX_SWEEPS = 100
DEFAULT_TOLERANCE = 1e-10
SYMMETRY_TOLERANCE = 1e-9


def _off_diagonal_norm(M: np.ndarray) -> float:
    off = M - np.diag(np.diag(M))
    return float(np.sqrt(np.einsum('ij,ij->', off, off)))


def _rotate(M: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
    """Anula M[p, q] con una rotación de Jacobi, in situ."""
    apq = M[p, q]
    theta = (M[q, q] - M[p, p]) / (2.0 * apq)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p = M[:, p].copy()
    col_q = M[:, q].copy()
    M[:, p] = c * col_p - s * col_q
    M[:, q] = s * col_p + c * col_q

    row_p = M[p, :].copy()
    row_q = M[q, :].copy()
    M[p, :] = c * row_p - s * row_q
    M[q, :] = s * row_p + c * row_q
    M[p, q] = M[q, p] = 0.0

    vec_p = V[:, p].copy()
    vec_q = V[:, q].copy()
    V[:, p] = c * vec_p - s * vec_q
    V[:, q] = s * vec_p + c * vec_q


def symmetric_eigen(
    M: np.ndarray,
    tol: float = DEFAULT_TOLERANCE,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    max_size: int = DEFAULT_MAX_SIZE
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Autovalores ascendentes y autovectores ortonormales de una matriz simétrica.

    Barre todos los pares (p, q) de forma cíclica hasta que la norma de
    Frobenius fuera de la diagonal baje de tol.

    Args:
        M: Matriz n × n simétrica (hasta 1e-9)
        tol: Umbral de la norma fuera de la diagonal
        max_sweeps: Barridos máximos
        max_size: Tamaño máximo admitido

    Returns:
        (autovalores ascendentes, matriz con los autovectores por columnas)

    Raises:
        ClusteringError: Matriz no cuadrada, asimétrica o demasiado grande
        EigenConvergenceError: Si no converge en max_sweeps barridos
    """
    M = np.array(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ClusteringError("Se esperaba una matriz cuadrada", shape=M.shape)
    n = M.shape[0]
    if n > max_size:
        raise ClusteringError("Matriz demasiado grande para Jacobi", n=n, max_size=max_size)
    if not np.all(np.isfinite(M)):
        raise ClusteringError("La matriz contiene valores no finitos")
    if n and np.max(np.abs(M - M.T)) > SYMMETRY_TOLERANCE:
        raise ClusteringError("La matriz no es simétrica")

    M = (M + M.T) / 2.0
    V = np.eye(n)
    sweep = 0
    while _off_diagonal_norm(M) >= tol:
        if sweep >= max_sweeps:
            raise EigenConvergenceError(
                "Jacobi no convergió",
                sweeps=sweep,
                off_norm=_off_diagonal_norm(M)
            )
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                if M[p, q] != 0.0:
                    _rotate(M, V, p, q)

    eigenvalues = np.diag(M).copy()
    order = np.argsort(eigenvalues, kind='stable')
    logger.debug(f"Jacobi convergió en {sweep} barridos", extra={'n_iter': sweep})
    return eigenvalues[order], V[:, order]
