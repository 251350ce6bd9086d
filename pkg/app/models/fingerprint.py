"""
Modelo de la huella semántica de un contexto.
"""

from enum import Enum  # Enumeraciones de opciones
from typing import List  # Tipos de datos
import numpy as np  # Álgebra lineal


class BagOfWords(str, Enum):
    """Tratamiento de lemas repetidos dentro de un contexto."""

    BINARY = "binary"
    COUNT = "count"


class Averaging(str, Enum):
    """Denominador del promedio ponderado."""

    WEIGHTED = "weighted"
    COUNT = "count"


class Fingerprint:
    """Vector denso que representa un contexto."""

    __slots__ = ("vector", "n_hits", "is_zero")

    def __init__(self, vector: np.ndarray, n_hits: int):
        self.vector = vector
        self.n_hits = int(n_hits)
        self.is_zero = self.n_hits == 0

    @classmethod
    def zero(cls, dim: int) -> "Fingerprint":
        return cls(np.zeros(dim, dtype=np.float64), 0)

    def __repr__(self) -> str:
        return f"Fingerprint(dim={self.vector.shape[0]}, n_hits={self.n_hits}, is_zero={self.is_zero})"


class FingerprintBatch:
    """Matriz n × dim de huellas más la marca de huella nula por fila."""

    __slots__ = ("matrix", "is_zero", "n_hits")

    def __init__(self, matrix: np.ndarray, is_zero: np.ndarray, n_hits: List[int]):
        self.matrix = matrix
        self.is_zero = is_zero
        self.n_hits = n_hits

    def __len__(self) -> int:
        return int(self.matrix.shape[0])
