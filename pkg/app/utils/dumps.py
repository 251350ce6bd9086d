"""
Volcados CSV de depuración: huellas, matrices de similitud y asignaciones.
"""

import csv  # Escritura de CSV
import re  # Saneado de nombres de archivo
from pathlib import Path  # Rutas de archivos
from typing import Sequence, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.models.clustering import ClusterAssignment  # Tipos de dominio

PathLike = Union[str, Path]


def safe_name(word: str) -> str:
    """Nombre de archivo seguro para una palabra (conserva letras unicode)."""
    return re.sub(r'[^\w.-]+', '_', word) or "_"


def write_matrix_csv(path: PathLike, row_ids: Sequence[str], matrix: np.ndarray) -> None:
    """Una fila por id: id seguido de los valores de la fila."""
    with Path(path).open('w', encoding='utf-8', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        for row_id, row in zip(row_ids, np.atleast_2d(matrix)):
            writer.writerow([row_id, *(repr(float(v)) for v in row)])


def write_assignment_csv(path: PathLike, row_ids: Sequence[str], assignment: ClusterAssignment) -> None:
    """context_id, label, is_exemplar por fila."""
    exemplars = set(assignment.exemplars)
    with Path(path).open('w', encoding='utf-8', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(["context_id", "label", "is_exemplar"])
        for index, (row_id, label) in enumerate(zip(row_ids, assignment.labels)):
            writer.writerow([row_id, label, int(index in exemplars)])
