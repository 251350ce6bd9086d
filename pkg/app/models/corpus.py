"""
Modelos de dominio para los datasets de contextos.
Cada fila del TSV se representa como un ContextRecord inmutable.
"""

from enum import Enum  # Enumeraciones de opciones
from typing import Dict, List, Optional  # Tipos de datos
from pydantic import BaseModel, Field, field_validator, model_validator  # Modelos y validación de datos


class TokenMode(str, Enum):
    """Modos de normalización de tokens hacia las convenciones del modelo."""

    AS_IS = "as-is"
    LOWERCASE = "lowercase"
    STRIP_TAGS = "strip-tags"
    ATTACH_DEFAULT_TAG = "attach-default-tag"
    # Contexto sin lematizar: se tokeniza el texto crudo en minúsculas
    RAW = "raw"


class ContextRecord(BaseModel):
    """Un contexto de una palabra ambigua, ya lematizado."""

    context_id: str = Field(..., description="Identificador único del contexto en el dataset")
    query_word: str = Field(..., description="Lema ambiguo cuyo sentido se induce")
    gold_sense_id: Optional[str] = Field(default=None, description="Sentido anotado (ausente en test)")
    predicted_sense_id: Optional[str] = Field(default=None, description="Sentido predicho por el sistema")
    positions: str = Field(default="", description="Posiciones del query word, tal cual vienen en el TSV")
    context: str = Field(default="", description="Texto del contexto tal cual viene en el TSV")
    tokens: List[str] = Field(default_factory=list, description="Tokens lema(+tag) del contexto")
    extra: Dict[str, str] = Field(default_factory=dict, description="Columnas adicionales preservadas")

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "example": {
                "context_id": "1",
                "query_word": "бор",
                "gold_sense_id": "1",
                "predicted_sense_id": None,
                "positions": "0-3",
                "context": "бор_NOUN сосновый_ADJ",
                "tokens": ["бор_NOUN", "сосновый_ADJ"]
            }
        }
    }

    @field_validator('gold_sense_id', 'predicted_sense_id', mode='before')
    @classmethod
    def empty_to_none(cls, v: Optional[str]) -> Optional[str]:
        """Cadena vacía significa sentido ausente."""
        if v is None or (isinstance(v, str) and v == ""):
            return None
        return str(v)

    @model_validator(mode='after')
    def sync_context_tokens(self) -> "ContextRecord":
        """Completa tokens desde el texto, o el texto desde los tokens."""
        if not self.tokens and self.context:
            object.__setattr__(self, 'tokens', self.context.split())
        elif self.tokens and not self.context:
            object.__setattr__(self, 'context', " ".join(self.tokens))
        return self

    def with_prediction(self, sense_id: str) -> "ContextRecord":
        """Devuelve una copia del registro con la predicción asignada."""
        return self.model_copy(update={'predicted_sense_id': str(sense_id)})
