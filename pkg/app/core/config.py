"""
Configuración del pipeline usando Pydantic Settings.
Se lee de variables de entorno con prefijo WSI_ y de archivos key=value (ver configs/).
"""

from pathlib import Path  # Rutas de archivos
from typing import Any, Dict, Optional  # Tipos de datos
from pydantic import Field, ValidationError, field_validator, model_validator  # Validación de campos Pydantic
from pydantic_settings import BaseSettings, SettingsConfigDict  # Configuración 12-factor
from app.core.exceptions import ConfigurationError  # Errores de configuración
from app.models.clustering import APParams, Metric, SpectralAffinity, Strategy  # Parámetros de clustering
from app.models.corpus import TokenMode  # Normalización de tokens
from app.models.embedding import ModelFormat, WeightScheme  # Formato de modelo y pesos
from app.models.fingerprint import Averaging, BagOfWords  # Variantes de la huella


class PipelineConfig(BaseSettings):
    """Configuración completa de una corrida de inducción de sentidos."""

    model_config = SettingsConfigDict(
        env_prefix="WSI_",
        env_nested_delimiter="__",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        protected_namespaces=()
    )

    # Modelo de embeddings
    model_path: Optional[Path] = Field(
        default=None,
        description="Ruta del modelo word2vec"
    )
    model_format: ModelFormat = Field(
        default=ModelFormat.BINARY,
        description="Formato del modelo (word2vec-text|word2vec-binary)"
    )
    frequency_path: Optional[Path] = Field(
        default=None,
        description="Ruta del archivo token<TAB>frecuencia (opcional)"
    )

    # Huellas semánticas
    weight_scheme: WeightScheme = Field(
        default_factory=WeightScheme,
        description="Esquema de pesos por frecuencia global"
    )
    normalize: bool = Field(
        default=True,
        description="Normalizar las huellas a norma L2 unitaria"
    )
    token_mode: TokenMode = Field(
        default=TokenMode.AS_IS,
        description="Normalización de tokens hacia el vocabulario del modelo"
    )
    bag_of_words: BagOfWords = Field(
        default=BagOfWords.BINARY,
        description="binary colapsa repeticiones; count las conserva"
    )
    averaging: Averaging = Field(
        default=Averaging.WEIGHTED,
        description="Denominador del promedio: suma de pesos o número de tokens"
    )

    # Clustering
    strategy: Strategy = Field(
        default=Strategy.AP_DIRECT,
        description="ap-direct|ap-then-kmeans|ap-then-spectral"
    )
    metric: Metric = Field(
        default=Metric.NEG_SQ_EUCLIDEAN,
        description="Métrica de similitud para Affinity Propagation"
    )
    ap: APParams = Field(
        default_factory=APParams,
        description="Parámetros de Affinity Propagation"
    )
    spectral_affinity: SpectralAffinity = Field(
        default=SpectralAffinity.COSINE_SHIFTED,
        description="Afinidad del grafo espectral"
    )
    spectral_gamma: float = Field(
        default=1.0,
        gt=0.0,
        description="Gamma de la afinidad rbf"
    )
    kmeans_max_iter: int = Field(default=300, ge=1, le=10000, description="Iteraciones de Lloyd por reinicio")
    kmeans_restarts: int = Field(default=10, ge=1, le=1000, description="Reinicios de K-Means")
    eigen_max_size: int = Field(default=2048, ge=2, description="Tamaño máximo de matriz para Jacobi")
    seed: int = Field(default=42, ge=0, lt=2 ** 63, description="Semilla única de toda la aleatoriedad")

    # Ejecución
    n_jobs: int = Field(default=1, ge=1, le=256, description="Hilos de trabajo por palabra")
    dump_dir: Optional[Path] = Field(
        default=None,
        description="Directorio para volcados CSV de huellas, similitudes y asignaciones"
    )
    log_level: str = Field(default="INFO", description="Nivel de logging")
    log_json: bool = Field(default=True, description="Logs en formato JSON")

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Valida el nivel de logging."""
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f"LOG_LEVEL debe ser uno de: {valid_levels}")
        return v.upper()

    @model_validator(mode='after')
    def sync_seed(self) -> "PipelineConfig":
        """Toda la aleatoriedad sale de la semilla global, incluido el ruido de AP."""
        if self.ap.seed != self.seed:
            object.__setattr__(self, 'ap', self.ap.model_copy(update={'seed': self.seed}))
        return self

    @property
    def two_stage(self) -> bool:
        """True si AP solo induce k."""
        return self.strategy != Strategy.AP_DIRECT


def _deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Path] = None, **overrides: Any) -> PipelineConfig:
    """
    Construye la configuración: overrides > entorno > archivo > valores por defecto.

    Args:
        path: Archivo key=value con claves WSI_* (opcional)
        **overrides: Valores explícitos (por ejemplo, flags del CLI); los dicts se fusionan

    Returns:
        Configuración validada

    Raises:
        ConfigurationError: Si el archivo no existe o algún valor es inválido
    """
    if path is not None and not Path(path).is_file():
        raise ConfigurationError("Archivo de configuración no encontrado", path=str(path))

    cleaned = {k: v for k, v in overrides.items() if v is not None}
    try:
        if path is None:
            return PipelineConfig(**cleaned)
        base = PipelineConfig(_env_file=path)
        return PipelineConfig(**_deep_merge(base.model_dump(), cleaned))
    except ValidationError as e:
        raise ConfigurationError(f"Configuración inválida: {e}", path=str(path) if path else None) from e


# Instancia global de configuración
settings = PipelineConfig()
