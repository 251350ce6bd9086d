"""
Modelos de la búsqueda en rejilla de hiperparámetros.
"""

from enum import Enum  # Enumeraciones de opciones
from typing import List  # Tipos de datos
import numpy as np  # Para la rejilla por defecto
from pydantic import BaseModel, Field, field_validator  # Modelos y validación de datos


class Objective(str, Enum):
    """Agregado que maximiza la búsqueda en rejilla."""

    WEIGHTED_ARI = "weighted-ari"
    MACRO_ARI = "macro-ari"


def _default_preferences() -> List[float]:
    return [round(float(v), 2) for v in np.arange(-0.80, -0.40 + 1e-9, 0.05)]


def _default_dampings() -> List[float]:
    return [round(float(v), 2) for v in np.arange(0.60, 0.90 + 1e-9, 0.05)]


class GridSpec(BaseModel):
    """Rejilla de preferencias y dampings a evaluar."""

    preferences: List[float] = Field(default_factory=_default_preferences, description="Valores de preferencia")
    dampings: List[float] = Field(default_factory=_default_dampings, description="Valores de damping en [0.5, 1)")
    objective: Objective = Field(default=Objective.WEIGHTED_ARI, description="Agregado a maximizar")

    @field_validator('preferences')
    @classmethod
    def validate_preferences(cls, v: List[float]) -> List[float]:
        """La lista de preferencias no puede estar vacía."""
        if not v:
            raise ValueError("preferences no puede estar vacío")
        return v

    @field_validator('dampings')
    @classmethod
    def validate_dampings(cls, v: List[float]) -> List[float]:
        """Valida que haya dampings y que estén en [0.5, 1)."""
        if not v:
            raise ValueError("dampings no puede estar vacío")
        for damping in v:
            if not 0.5 <= damping < 1.0:
                raise ValueError(f"damping fuera de [0.5, 1): {damping}")
        return v


class GridCell(BaseModel):
    """Resultado de una celda de la rejilla."""

    preference: float
    damping: float
    macro_ari: float
    weighted_ari: float

    def score(self, objective: Objective) -> float:
        if objective == Objective.MACRO_ARI:
            return self.macro_ari
        return self.weighted_ari


class GridResult(BaseModel):
    """Mejor celda y la rejilla completa, en orden de evaluación."""

    best: GridCell
    cells: List[GridCell]
    objective: Objective
