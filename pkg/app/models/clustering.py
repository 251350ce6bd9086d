"""
Modelos de dominio para el clustering de huellas semánticas.
Incluye la matriz de similitud, los parámetros de Affinity Propagation y la asignación resultante.
"""

from enum import Enum  # Enumeraciones de opciones
from typing import List, Literal, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from pydantic import BaseModel, Field, field_validator, model_validator  # Modelos y validación de datos


class Metric(str, Enum):
    """Métrica de similitud entre huellas."""

    NEG_SQ_EUCLIDEAN = "neg-sq-euclidean"
    COSINE = "cosine"


class SpectralAffinity(str, Enum):
    """Afinidad usada para construir el grafo del clustering espectral."""

    COSINE_SHIFTED = "cosine-shifted"
    RBF = "rbf"


class Strategy(str, Enum):
    """Estrategia de clustering por palabra."""

    AP_DIRECT = "ap-direct"
    AP_THEN_KMEANS = "ap-then-kmeans"
    AP_THEN_SPECTRAL = "ap-then-spectral"


Preference = Union[float, Literal["median"]]


class APParams(BaseModel):
    """Parámetros de Affinity Propagation."""

    preference: Preference = Field(
        default=-0.65,
        description="Valor de la diagonal de S, o 'median' para la mediana fuera de la diagonal"
    )
    damping: float = Field(
        default=0.75,
        ge=0.5,
        lt=1.0,
        description="Factor de amortiguación de los mensajes [0.5, 1)"
    )
    max_iter: int = Field(default=1000, ge=1, description="Máximo de iteraciones")
    convergence_window: int = Field(
        default=50,
        ge=1,
        description="Iteraciones consecutivas con el mismo conjunto de ejemplares para declarar convergencia"
    )
    seed: int = Field(
        default=42,
        ge=0,
        lt=2 ** 64,
        description="Semilla del ruido que rompe empates"
    )

    model_config = {"frozen": True}

    @field_validator('preference', mode='before')
    @classmethod
    def validate_preference(cls, v: Union[str, float]) -> Union[str, float]:
        """Acepta un número o el valor con nombre 'median'."""
        if isinstance(v, str):
            if v.strip().lower() == "median":
                return "median"
            try:
                return float(v)
            except ValueError:
                raise ValueError("preference debe ser un número o 'median'") from None
        if not np.isfinite(v):
            raise ValueError("preference debe ser finita")
        return v

    @model_validator(mode='after')
    def validate_window(self) -> "APParams":
        """La ventana de convergencia debe ser menor que max_iter."""
        if self.convergence_window >= self.max_iter:
            raise ValueError("convergence_window debe ser menor que max_iter")
        return self


class SimilarityMatrix:
    """
    Matriz de similitudes n × n con la preferencia en la diagonal.

    Simétrica fuera de la diagonal. La matriz no es escribible.
    """

    def __init__(self, s: np.ndarray, metric: Metric, preference: float):
        s = np.array(s, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("La matriz de similitud debe ser cuadrada")
        s.setflags(write=False)
        self.s = s
        self.metric = Metric(metric)
        self.preference = float(preference)

    @property
    def n(self) -> int:
        return int(self.s.shape[0])

    def __repr__(self) -> str:
        return f"SimilarityMatrix(n={self.n}, metric={self.metric.value}, preference={self.preference:.4f})"


class ClusterAssignment(BaseModel):
    """Resultado de un clustering: etiquetas canónicas, ejemplares y metadatos."""

    labels: List[int] = Field(..., description="Etiqueta de sentido por contexto, en [0, k)")
    exemplars: List[int] = Field(default_factory=list, description="Índices de ejemplares (o medoides), ordenados")
    k: int = Field(..., ge=1, description="Número de clusters")
    converged: bool = Field(default=True, description="Si el algoritmo convergió")
    n_iter: int = Field(default=0, ge=0, description="Iteraciones ejecutadas")
    inertia: float = Field(default=0.0, description="Inercia (solo K-Means)")

    model_config = {"frozen": True}

    @model_validator(mode='after')
    def validate_labels(self) -> "ClusterAssignment":
        """Cada etiqueta en [0, k) aparece al menos una vez."""
        if self.labels and sorted(set(self.labels)) != list(range(self.k)):
            raise ValueError("Las etiquetas deben cubrir exactamente 0..k-1")
        return self
