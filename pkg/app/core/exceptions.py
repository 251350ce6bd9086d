"""
Jerarquía de excepciones del toolkit de inducción de sentidos.
Cada error lleva contexto estructurado para el log y para el código de salida del CLI.
"""

from typing import Any, Dict, Optional  # Tipos de datos


class WSIError(Exception):
    """Error base del toolkit."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = {k: v for k, v in context.items() if v is not None}

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.message} ({details})"


class ModelFormatError(WSIError):
    """Archivo de modelo word2vec mal formado."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None,
                 token: Optional[str] = None, offset: Optional[int] = None):
        super().__init__(message, path=path, line=line, token=token, offset=offset)


class FrequencyFormatError(WSIError):
    """Archivo de frecuencias mal formado."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None,
                 offset: Optional[int] = None):
        super().__init__(message, path=path, line=line, offset=offset)


class DatasetFormatError(WSIError):
    """Dataset TSV mal formado o incompleto."""

    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None,
                 column: Optional[str] = None, offset: Optional[int] = None):
        super().__init__(message, path=path, row=row, column=column, offset=offset)


class ConfigurationError(WSIError):
    """Configuración inválida o incompleta."""


class ClusteringError(WSIError):
    """Entrada inválida o estado numérico inválido durante el clustering."""


class EigenConvergenceError(ClusteringError):
    """El método de Jacobi no convergió en el número máximo de barridos."""


class EvaluationError(WSIError):
    """Etiquetas inválidas para la evaluación."""


class UnknownTokenError(WSIError, KeyError):
    """Token ausente del vocabulario del modelo."""

    def __init__(self, token: str):
        super().__init__("Token fuera del vocabulario", token=token)
