"""
Modelos de dominio para embeddings y esquemas de pesos.
Define el contenedor inmutable del modelo y la configuración de pesado por frecuencia.
"""

from enum import Enum  # Enumeraciones de opciones
from types import MappingProxyType  # Vistas de solo lectura
from typing import Dict, Iterator, Mapping, Optional, Sequence  # Tipos de datos
import numpy as np  # Álgebra lineal
from pydantic import BaseModel, Field, field_validator  # Modelos y validación de datos


class ModelFormat(str, Enum):
    """Formatos de archivo word2vec soportados."""

    TEXT = "word2vec-text"
    BINARY = "word2vec-binary"


class WeightKind(str, Enum):
    """Esquemas de pesado por frecuencia global."""

    UNIFORM = "uniform"
    LINEAR_INVERSE = "linear-inverse"
    LOG_INVERSE = "log-inverse"
    RECIPROCAL = "reciprocal"


class WeightScheme(BaseModel):
    """Esquema de pesos por token: inverso a la frecuencia en el corpus de entrenamiento."""

    kind: WeightKind = Field(
        default=WeightKind.LOG_INVERSE,
        description="Fórmula de pesado (uniform|linear-inverse|log-inverse|reciprocal)"
    )
    floor: float = Field(
        default=0.0,
        ge=0.0,
        lt=1.0,
        description="Peso mínimo tras el recorte"
    )

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "example": {
                "kind": "log-inverse",
                "floor": 0.0
            }
        }
    }


class EmbeddingModel:
    """
    Modelo de embeddings pre-entrenado cargado en memoria.

    Inmutable tras la carga: el vocabulario es una vista de solo lectura y la
    matriz de vectores no es escribible, así que puede compartirse entre hilos.
    """

    def __init__(
        self,
        vocab: Sequence[str],
        vectors: np.ndarray,
        frequencies: Optional[Mapping[str, int]] = None
    ):
        vectors = np.asarray(vectors)
        if vectors.ndim != 2:
            raise ValueError("vectors debe ser una matriz n_vocab × dim")
        if vectors.shape[1] < 1:
            raise ValueError("dim debe ser >= 1")
        if vectors.shape[0] != len(vocab):
            raise ValueError(
                f"El vocabulario tiene {len(vocab)} tokens pero hay {vectors.shape[0]} vectores"
            )

        index: Dict[str, int] = {}
        for position, token in enumerate(vocab):
            if token in index:
                raise ValueError(f"Token duplicado '{token}' en la posición {position}")
            index[token] = position

        if frequencies is not None:
            for token, count in frequencies.items():
                if count < 1:
                    raise ValueError(f"Frecuencia inválida para '{token}': {count}")

        vectors = vectors.copy()
        vectors.setflags(write=False)

        self._vocab = MappingProxyType(index)
        self._tokens = tuple(vocab)
        self._vectors = vectors
        self._frequencies = MappingProxyType(dict(frequencies)) if frequencies is not None else None
        self._max_frequency = max(frequencies.values()) if frequencies else None
        self._min_frequency = min(frequencies.values()) if frequencies else None

    @property
    def dim(self) -> int:
        return int(self._vectors.shape[1])

    @property
    def vocab(self) -> Mapping[str, int]:
        return self._vocab

    @property
    def tokens(self) -> Sequence[str]:
        return self._tokens

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def frequencies(self) -> Optional[Mapping[str, int]]:
        return self._frequencies

    @property
    def max_frequency(self) -> Optional[int]:
        """Frecuencia máxima de la tabla cargada (no del contexto)."""
        return self._max_frequency

    @property
    def min_frequency(self) -> Optional[int]:
        """Frecuencia mínima de la tabla cargada."""
        return self._min_frequency

    def frequency(self, token: str) -> Optional[int]:
        if self._frequencies is None:
            return None
        return self._frequencies.get(token)

    def vector(self, token: str) -> np.ndarray:
        """
        Devuelve el embedding de un token.

        Raises:
            KeyError: Si el token no está en el vocabulario
        """
        return self._vectors[self._vocab[token]]

    def with_frequencies(self, frequencies: Mapping[str, int]) -> "EmbeddingModel":
        """Devuelve una copia del modelo con otra tabla de frecuencias."""
        return EmbeddingModel(self._tokens, self._vectors, frequencies)

    def __contains__(self, token: object) -> bool:
        return token in self._vocab

    def __len__(self) -> int:
        return len(self._tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self._tokens)

    def __repr__(self) -> str:
        n_freq = len(self._frequencies) if self._frequencies is not None else 0
        return f"EmbeddingModel(n_vocab={len(self)}, dim={self.dim}, frequencies={n_freq})"


class ModelStats(BaseModel):
    """Estadísticas del modelo para el subcomando inspect-model."""

    n_vocab: int = Field(..., description="Tamaño del vocabulario")
    dim: int = Field(..., description="Dimensión de los vectores")
    n_with_frequency: int = Field(default=0, description="Tokens con entrada en la tabla de frecuencias")
    frequency_coverage: float = Field(default=0.0, description="Fracción del vocabulario con frecuencia")
    max_frequency: Optional[int] = Field(default=None, description="Frecuencia máxima de la tabla")
    min_frequency: Optional[int] = Field(default=None, description="Frecuencia mínima de la tabla")
    tag_counts: Dict[str, int] = Field(default_factory=dict, description="Tokens por etiqueta PoS")

    @field_validator('frequency_coverage')
    @classmethod
    def validate_coverage(cls, v: float) -> float:
        """Valida que la cobertura sea una fracción."""
        if not 0.0 <= v <= 1.0:
            raise ValueError("frequency_coverage debe estar en [0, 1]")
        return v
