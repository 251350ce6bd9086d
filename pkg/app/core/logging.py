"""
Configuración de logging estructurado JSON.
Proporciona logs estructurados para seguir cada etapa del pipeline de inducción.
"""

import logging  # Sistema de logging de Python
import sys  # Para stdout/stderr
from datetime import datetime, timezone  # Para timestamps
from typing import Any, Dict, Optional  # Tipos de datos
from pythonjsonlogger import jsonlogger  # Formatter JSON para logs

# Campos de dominio que se copian al registro JSON si están presentes
DOMAIN_FIELDS = (
    'query_word',
    'n_contexts',
    'n_zero',
    'k',
    'n_iter',
    'converged',
    'strategy',
    'latency_ms',
    'ari',
    'path',
    'preference',
    'damping',
)


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """Formatter personalizado para logs JSON estructurados."""

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord, message_dict: Dict[str, Any]) -> None:
        """Agrega campos personalizados al log record."""
        super().add_fields(log_record, record, message_dict)

        # Campos obligatorios
        log_record['timestamp'] = datetime.now(timezone.utc).isoformat().replace('+00:00', 'Z')
        log_record['level'] = record.levelname
        log_record['logger'] = record.name

        # Campos opcionales
        for field in DOMAIN_FIELDS:
            if hasattr(record, field):
                log_record[field] = getattr(record, field)


def setup_logging(log_level: str = "INFO", json_format: bool = True) -> None:
    """
    Configura el sistema de logging.

    Los logs van a stderr: stdout queda libre para la salida del CLI.

    Args:
        log_level: Nivel de logging (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_format: Si es False usa un formato de texto plano legible
    """
    level = getattr(logging, log_level.upper())

    # Configurar el logger raíz
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Remover handlers existentes
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)

    if json_format:
        formatter: logging.Formatter = CustomJsonFormatter(
            fmt='%(timestamp)s %(level)s %(logger)s %(message)s'
        )
    else:
        formatter = logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s')
    handler.setFormatter(formatter)

    root_logger.addHandler(handler)

    # Silenciar librerías ruidosas
    logging.getLogger("nltk").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """
    Obtiene un logger con el nombre especificado.

    Args:
        name: Nombre del logger

    Returns:
        Logger configurado
    """
    return logging.getLogger(name)


def log_stage(
    logger: logging.Logger,
    stage: str,
    latency_ms: int,
    **kwargs: Any
) -> None:
    """
    Loggea la finalización de una etapa del pipeline.

    Args:
        logger: Logger a utilizar
        stage: Nombre de la etapa (load_model, induce, gridsearch, ...)
        latency_ms: Latencia en milisegundos
        **kwargs: Campos adicionales para el log
    """
    extra = {
        'latency_ms': latency_ms,
        **kwargs
    }

    logger.info(
        f"Etapa completada: {stage}",
        extra=extra
    )


def log_clustering(
    logger: logging.Logger,
    query_word: str,
    n_contexts: int,
    k: int,
    strategy: str,
    converged: bool,
    n_iter: int,
    **kwargs: Any
) -> None:
    """
    Loggea el resultado del clustering de una palabra.

    Un AP no convergido se registra como WARNING; el pipeline sigue adelante.

    Args:
        logger: Logger a utilizar
        query_word: Palabra ambigua procesada
        n_contexts: Número de contextos agrupados
        k: Número de clusters resultante
        strategy: Estrategia de clustering usada
        converged: Si Affinity Propagation convergió
        n_iter: Iteraciones ejecutadas por Affinity Propagation
        **kwargs: Campos adicionales para el log
    """
    extra = {
        'query_word': query_word,
        'n_contexts': n_contexts,
        'k': k,
        'strategy': strategy,
        'converged': converged,
        'n_iter': n_iter,
        **kwargs
    }

    if converged:
        logger.info(f"Sentidos inducidos para '{query_word}': k={k}", extra=extra)
    else:
        logger.warning(
            f"Affinity Propagation no convergió para '{query_word}' tras {n_iter} iteraciones",
            extra=extra
        )


def log_error(
    logger: logging.Logger,
    error: Exception,
    command: Optional[str] = None,
    **kwargs: Any
) -> None:
    """
    Loggea errores de manera estructurada.

    Args:
        logger: Logger a utilizar
        error: Excepción ocurrida
        command: Subcomando donde ocurrió el error (opcional)
        **kwargs: Campos adicionales para el log
    """
    extra = {
        'error_type': type(error).__name__,
        'error_message': str(error),
        **kwargs
    }

    if command:
        extra['command'] = command

    logger.error(
        f"Error en {command or 'aplicación'}: {error}",
        extra=extra,
        exc_info=logger.isEnabledFor(logging.DEBUG)
    )
