"""
Proyección 2-D por componentes principales para inspeccionar los clusters.
"""

import csv  # Escritura de CSV con comillas donde haga falta
from pathlib import Path  # Rutas de archivos
from typing import Sequence, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.exceptions import ClusteringError  # Errores de dominio
from app.models.corpus import ContextRecord  # Tipos de dominio
from app.services.eigen import DEFAULT_MAX_SIZE, symmetric_eigen  # Solver de autovalores

# Autovalores por debajo de esto se consideran nulos
RANK_TOLERANCE = 1e-12


def _fix_signs(axes: np.ndarray, coords: np.ndarray) -> None:
    """La carga de mayor magnitud de cada eje queda positiva."""
    for j in range(axes.shape[1]):
        if not np.any(axes[:, j]):
            continue
        pivot = int(np.argmax(np.abs(axes[:, j])))
        if axes[pivot, j] < 0.0:
            axes[:, j] *= -1.0
            coords[:, j] *= -1.0


def project_2d(X: np.ndarray, max_size: int = DEFAULT_MAX_SIZE) -> np.ndarray:
    """
    Proyecta las filas centradas sobre los dos ejes principales.

    Descompone la covarianza dim × dim, o la matriz de Gram n × n cuando hay
    menos puntos que dimensiones (mismos autovalores no nulos).

    Args:
        X: Matriz n × dim, n >= 2
        max_size: Tamaño máximo para el solver

    Returns:
        Coordenadas n × 2

    Raises:
        ClusteringError: Si n < 2
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if X.ndim != 2 or n < 2:
        raise ClusteringError("La proyección necesita al menos 2 puntos", n=n)
    centered = X - X.mean(axis=0)
    dim = centered.shape[1]
    coords = np.zeros((n, 2))
    axes = np.zeros((dim, 2))

    if dim <= n:
        covariance = centered.T @ centered / (n - 1)
        _, vectors = symmetric_eigen(covariance, max_size=max_size)
        top = vectors[:, ::-1][:, :min(2, dim)]
        axes[:, :top.shape[1]] = top
        coords[:, :top.shape[1]] = centered @ top
    else:
        gram = centered @ centered.T
        values, vectors = symmetric_eigen(gram, max_size=max_size)
        for j in range(2):
            value = values[n - 1 - j]
            if value <= RANK_TOLERANCE * max(1.0, values[-1]):
                continue
            u = vectors[:, n - 1 - j]
            coords[:, j] = u * np.sqrt(value)
            axes[:, j] = centered.T @ u / np.sqrt(value)

    _fix_signs(axes, coords)
    return coords


def write_projection_csv(
    records: Sequence[ContextRecord],
    coords: np.ndarray,
    path: Union[str, Path]
) -> None:
    """Escribe context_id, x, y, gold_sense_id, predicted_sense_id por fila."""
    with Path(path).open('w', encoding='utf-8', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(["context_id", "x", "y", "gold_sense_id", "predicted_sense_id"])
        for record, (x, y) in zip(records, coords):
            writer.writerow([
                record.context_id,
                f"{x:.10f}",
                f"{y:.10f}",
                record.gold_sense_id or '',
                record.predicted_sense_id or ''
            ])
