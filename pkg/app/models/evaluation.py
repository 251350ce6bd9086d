"""
Modelos del reporte de evaluación.
El ARI ponderado por número de contextos es la cifra principal del reporte.
"""

from typing import Dict  # Tipos de datos
from pydantic import BaseModel, Field, model_validator  # Modelos y validación de datos


class WordScore(BaseModel):
    """ARI y tamaños de una palabra ambigua."""

    ari: float = Field(..., ge=-1.0, le=1.0, description="Adjusted Rand Index de la palabra")
    n_contexts: int = Field(..., ge=1, description="Número de contextos evaluados")
    k_gold: int = Field(..., ge=1, description="Número de sentidos anotados")
    k_pred: int = Field(..., ge=1, description="Número de sentidos inducidos")


class EvaluationReport(BaseModel):
    """Reporte de evaluación por palabra y agregado."""

    per_word: Dict[str, WordScore] = Field(..., description="Puntuación por palabra ambigua")
    aggregate_macro: float = Field(..., description="Media no ponderada del ARI por palabra")
    aggregate_weighted: float = Field(..., description="Media ponderada por n_contexts (cifra principal)")

    model_config = {
        "json_schema_extra": {
            "example": {
                "per_word": {
                    "бор": {"ari": 0.9, "n_contexts": 100, "k_gold": 2, "k_pred": 2}
                },
                "aggregate_macro": 0.9,
                "aggregate_weighted": 0.9
            }
        }
    }

    @model_validator(mode='after')
    def validate_aggregates(self) -> "EvaluationReport":
        """Un reporte emitido nunca está vacío y sus agregados caen en [min, max]."""
        if not self.per_word:
            raise ValueError("per_word no puede estar vacío")
        values = [score.ari for score in self.per_word.values()]
        low, high = min(values) - 1e-12, max(values) + 1e-12
        if not (low <= self.aggregate_macro <= high and low <= self.aggregate_weighted <= high):
            raise ValueError("Los agregados deben estar dentro del rango de ARI por palabra")
        return self
