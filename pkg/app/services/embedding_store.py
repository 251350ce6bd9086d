"""
Carga y escritura de modelos word2vec y de tablas de frecuencias.
Calcula el peso de cada token en proporción inversa a su frecuencia global.
"""

import logging  # Niveles para before_sleep_log
import math  # Logaritmos de los pesos
import time  # Para medir latencia
from collections import Counter  # Conteo de etiquetas PoS
from pathlib import Path  # Rutas de archivos
from typing import Dict, List, Optional, Sequence, Tuple, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from tenacity import (  # Biblioteca para retries automáticos
    retry,
    stop_after_attempt,
    wait_exponential,
    retry_if_exception,
    before_sleep_log
)
from app.core.exceptions import FrequencyFormatError, ModelFormatError, UnknownTokenError  # Errores de dominio
from app.core.logging import get_logger, log_stage  # Sistema de logging
from app.models.embedding import EmbeddingModel, ModelFormat, ModelStats, WeightKind, WeightScheme  # Tipos de dominio

logger = get_logger(__name__)

PathLike = Union[str, Path]

# word2vec binario: float32 little-endian
BINARY_DTYPE = np.dtype('<f4')


def _is_transient(error: BaseException) -> bool:
    """Solo se reintentan errores de E/S que no sean de archivo ausente o permisos."""
    if isinstance(error, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return False
    return isinstance(error, OSError)


@retry(
    stop=stop_after_attempt(3),
    wait=wait_exponential(multiplier=0.1, min=0.1, max=1),
    retry=retry_if_exception(_is_transient),
    before_sleep=before_sleep_log(logger, logging.WARNING),
    reraise=True
)
def _read_bytes(path: Path) -> bytes:
    return path.read_bytes()


def _read_model_bytes(path: Path) -> bytes:
    try:
        return _read_bytes(path)
    except OSError as e:
        raise ModelFormatError(f"No se pudo leer el modelo: {e}", path=str(path)) from e


def _parse_header(line: str, path: Path) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise ModelFormatError("Cabecera mal formada, se esperaba 'n_vocab dim'", path=str(path), line=1)
    try:
        n_vocab, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise ModelFormatError("Cabecera mal formada, se esperaba 'n_vocab dim'", path=str(path), line=1) from None
    if n_vocab < 0 or dim < 1:
        raise ModelFormatError(f"Cabecera inválida: n_vocab={n_vocab}, dim={dim}", path=str(path), line=1)
    return n_vocab, dim


def _check_duplicate(seen: Dict[str, int], token: str, position: int, path: Path, **where: int) -> None:
    if token in seen:
        raise ModelFormatError(
            f"Token duplicado (primera aparición en la posición {seen[token]}, repetido en la {position})",
            path=str(path),
            token=token,
            **where
        )
    seen[token] = position


def _parse_text(data: bytes, path: Path) -> Tuple[List[str], np.ndarray]:
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        raise ModelFormatError(f"El modelo no es UTF-8 válido: {e}", path=str(path), offset=e.start) from e

    lines = text.split('\n')
    if not lines:
        raise ModelFormatError("Archivo vacío, falta la cabecera", path=str(path))
    n_vocab, dim = _parse_header(lines[0], path)

    rows = [(line_number, line) for line_number, line in enumerate(lines[1:], start=2) if line.strip()]
    if len(rows) != n_vocab:
        raise ModelFormatError(
            f"La cabecera declara {n_vocab} tokens pero el archivo tiene {len(rows)} filas",
            path=str(path)
        )

    vocab: List[str] = []
    seen: Dict[str, int] = {}
    vectors = np.empty((n_vocab, dim), dtype=np.float32)
    for position, (line_number, line) in enumerate(rows):
        parts = line.split()
        token, values = parts[0], parts[1:]
        if len(values) != dim:
            raise ModelFormatError(
                f"La fila tiene {len(values)} valores, se esperaban {dim}",
                path=str(path), line=line_number, token=token
            )
        _check_duplicate(seen, token, position, path, line=line_number)
        try:
            vectors[position] = np.asarray(values, dtype=np.float64)
        except ValueError:
            raise ModelFormatError("Valor no numérico en el vector", path=str(path), line=line_number, token=token) from None
        vocab.append(token)

    return vocab, vectors


def _parse_binary(data: bytes, path: Path) -> Tuple[List[str], np.ndarray]:
    newline = data.find(b'\n')
    if newline < 0:
        raise ModelFormatError("Falta la cabecera 'n_vocab dim'", path=str(path))
    try:
        header = data[:newline].decode('ascii')
    except UnicodeDecodeError:
        raise ModelFormatError("Cabecera no ASCII", path=str(path), line=1) from None
    n_vocab, dim = _parse_header(header, path)

    record_bytes = dim * BINARY_DTYPE.itemsize
    vocab: List[str] = []
    seen: Dict[str, int] = {}
    vectors = np.empty((n_vocab, dim), dtype=np.float32)
    offset = newline + 1
    for position in range(n_vocab):
        # El escritor de referencia separa registros con '\n'
        while offset < len(data) and data[offset:offset + 1] == b'\n':
            offset += 1
        space = data.find(b' ', offset)
        if space < 0:
            raise ModelFormatError(
                f"Fin de archivo tras {position} de {n_vocab} tokens",
                path=str(path), offset=offset
            )
        try:
            token = data[offset:space].decode('utf-8')
        except UnicodeDecodeError:
            raise ModelFormatError("Token no UTF-8", path=str(path), offset=offset) from None
        if not token:
            raise ModelFormatError("Token vacío", path=str(path), offset=offset)
        start = space + 1
        if start + record_bytes > len(data):
            raise ModelFormatError("Vector truncado", path=str(path), token=token, offset=start)
        _check_duplicate(seen, token, position, path, offset=offset)
        vectors[position] = np.frombuffer(data, dtype=BINARY_DTYPE, count=dim, offset=start)
        vocab.append(token)
        offset = start + record_bytes

    return vocab, vectors


def load_model(
    path: PathLike,
    format: ModelFormat = ModelFormat.BINARY,
    frequencies: Optional[Dict[str, int]] = None
) -> EmbeddingModel:
    """
    Carga un modelo word2vec en formato texto o binario.

    Args:
        path: Ruta del archivo
        format: word2vec-text o word2vec-binary
        frequencies: Tabla de frecuencias a adjuntar (opcional)

    Returns:
        Modelo con exactamente n_vocab tokens en el orden del archivo

    Raises:
        ModelFormatError: Cabecera mal formada, fila de longitud incorrecta,
            token duplicado o archivo ilegible
    """
    start_time = time.perf_counter()
    path = Path(path)
    data = _read_model_bytes(path)

    if ModelFormat(format) == ModelFormat.TEXT:
        vocab, vectors = _parse_text(data, path)
    else:
        vocab, vectors = _parse_binary(data, path)
    model = EmbeddingModel(vocab, vectors, frequencies)

    log_stage(
        logger,
        stage="load_model",
        latency_ms=int((time.perf_counter() - start_time) * 1000),
        path=str(path),
        n_vocab=len(model),
        dim=model.dim
    )
    return model


def write_model(model: EmbeddingModel, path: PathLike, format: ModelFormat = ModelFormat.TEXT) -> None:
    """
    Escribe un modelo en formato word2vec.

    Args:
        model: Modelo a escribir
        path: Ruta de destino
        format: word2vec-text o word2vec-binary
    """
    path = Path(path)
    header = f"{len(model)} {model.dim}\n"

    if ModelFormat(format) == ModelFormat.TEXT:
        with path.open('w', encoding='utf-8', newline='\n') as handle:
            handle.write(header)
            for token, row in zip(model.tokens, model.vectors):
                values = ' '.join(repr(float(v)) for v in row)
                handle.write(f"{token} {values}\n")
    else:
        with path.open('wb') as handle:
            handle.write(header.encode('ascii'))
            for token, row in zip(model.tokens, model.vectors):
                handle.write(token.encode('utf-8') + b' ')
                handle.write(np.asarray(row, dtype=BINARY_DTYPE).tobytes())
                handle.write(b'\n')

    logger.info(f"Modelo escrito en {path}", extra={'path': str(path)})


def load_frequencies(path: PathLike) -> Dict[str, int]:
    """
    Lee un archivo 'token<TAB>frecuencia' en UTF-8.

    Las líneas duplicadas sobrescriben a las anteriores. Un archivo vacío
    devuelve un mapa vacío (los pesos caen entonces a uniformes).

    Args:
        path: Ruta del archivo

    Returns:
        Mapa token → frecuencia (>= 1)

    Raises:
        FrequencyFormatError: Frecuencia no entera, menor que 1, token vacío
            o archivo que no es UTF-8 válido
    """
    path = Path(path)
    try:
        text = _read_bytes(path).decode('utf-8')
    except UnicodeDecodeError as e:
        raise FrequencyFormatError(f"Las frecuencias no son UTF-8 válido: {e.reason}", path=str(path), offset=e.start) from e

    counts: Dict[str, int] = {}
    for line_number, line in enumerate(text.split('\n'), start=1):
        line = line.rstrip('\r')
        if not line.strip():
            continue
        token, sep, raw_count = line.partition('\t')
        if not sep:
            raise FrequencyFormatError("Se esperaba 'token<TAB>frecuencia'", path=str(path), line=line_number)
        if not token.strip():
            raise FrequencyFormatError("Token vacío", path=str(path), line=line_number)
        try:
            count = int(raw_count.strip())
        except ValueError:
            raise FrequencyFormatError(f"Frecuencia no entera: '{raw_count}'", path=str(path), line=line_number) from None
        if count < 1:
            raise FrequencyFormatError(f"Frecuencia menor que 1: {count}", path=str(path), line=line_number)
        counts[token] = count

    logger.info(
        f"Frecuencias cargadas: {len(counts)} tokens",
        extra={'path': str(path)}
    )
    return counts


def _weight_from_frequency(frequency: int, scheme: WeightScheme, f_max: int, f_min: int) -> float:
    if scheme.kind == WeightKind.LOG_INVERSE:
        log_max = math.log(f_max)
        raw = 1.0 - math.log(frequency) / log_max if log_max > 0 else 1.0
    elif scheme.kind == WeightKind.LINEAR_INVERSE:
        raw = 1.0 - frequency / f_max
    elif scheme.kind == WeightKind.RECIPROCAL:
        raw = f_min / frequency
    else:
        raw = 1.0
    return min(1.0, max(scheme.floor, raw))


def token_weight(model: EmbeddingModel, scheme: WeightScheme, token: str) -> float:
    """
    Peso de un token en [floor, 1], no creciente con su frecuencia.

    Los tokens sin entrada en la tabla de frecuencias pesan 1.0.

    Args:
        model: Modelo con tabla de frecuencias opcional
        scheme: Esquema de pesado
        token: Token del vocabulario

    Returns:
        Peso del token

    Raises:
        UnknownTokenError: Si el token no está en el vocabulario
    """
    if token not in model:
        raise UnknownTokenError(token)
    if scheme.kind == WeightKind.UNIFORM:
        return 1.0
    frequency = model.frequency(token)
    if frequency is None:
        return 1.0
    return _weight_from_frequency(frequency, scheme, model.max_frequency, model.min_frequency)


def token_weights(model: EmbeddingModel, scheme: WeightScheme, tokens: Sequence[str]) -> np.ndarray:
    """Pesos de varios tokens del vocabulario, en el mismo orden."""
    return np.array([token_weight(model, scheme, token) for token in tokens], dtype=np.float64)


def model_stats(model: EmbeddingModel) -> ModelStats:
    """
    Estadísticas del vocabulario para inspect-model.

    Args:
        model: Modelo cargado

    Returns:
        Tamaño, dimensión, cobertura de frecuencias y etiquetas PoS
    """
    tags = Counter(token.rsplit('_', 1)[1] for token in model.tokens if '_' in token.strip('_'))
    n_with_frequency = sum(1 for token in model.tokens if model.frequency(token) is not None)
    coverage = n_with_frequency / len(model) if len(model) else 0.0
    return ModelStats(
        n_vocab=len(model),
        dim=model.dim,
        n_with_frequency=n_with_frequency,
        frequency_coverage=coverage,
        max_frequency=model.max_frequency,
        min_frequency=model.min_frequency,
        tag_counts=dict(sorted(tags.items(), key=lambda item: (-item[1], item[0])))
    )
