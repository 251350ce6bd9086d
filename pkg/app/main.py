"""
Punto de entrada del toolkit de inducción de sentidos.
Traduce las excepciones a códigos de salida: 0 éxito, 1 uso incorrecto, 2 error de datos o modelo.
"""

import sys  # Para stderr y el código de salida
from typing import Optional, Sequence  # Tipos de datos
from app.cli import UsageError, run  # Interfaz de línea de comandos
from app.core.config import settings  # Configuración por defecto
from app.core.exceptions import ConfigurationError, WSIError  # Errores de dominio
from app.core.logging import get_logger, log_error, setup_logging  # Sistema de logging

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

logger = get_logger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ejecuta el CLI y devuelve el código de salida.

    Args:
        argv: Argumentos sin el nombre del programa (por defecto sys.argv[1:])

    Returns:
        Código de salida del proceso
    """
    try:
        return run(argv)
    except UsageError as e:
        sys.stderr.write(e.usage)
        sys.stderr.write(f"error: {e.message}\n")
        return EXIT_USAGE
    except ConfigurationError as e:
        # La configuración puede fallar antes de configurar el logging
        setup_logging(settings.log_level, settings.log_json)
        log_error(logger, e, command="config")
        return EXIT_USAGE
    except (WSIError, OSError) as e:
        log_error(logger, e, command=argv[0] if argv else None)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
