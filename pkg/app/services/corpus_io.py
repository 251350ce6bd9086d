"""
Lectura y escritura de datasets de contextos en TSV.
Normaliza los tokens hacia las convenciones del modelo y elimina la palabra consultada.
"""

import io  # Lectura línea a línea del texto decodificado
import re  # Expresiones regulares para etiquetas PoS
from collections import OrderedDict  # Agrupación en orden de aparición
from pathlib import Path  # Rutas de archivos
from typing import Dict, Iterable, List, Sequence, Set, Tuple, Union  # Tipos de datos
from nltk.tokenize import wordpunct_tokenize  # Tokenizador de respaldo (sin descargas)
from app.core.exceptions import DatasetFormatError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging
from app.models.corpus import ContextRecord, TokenMode  # Tipos de dominio

logger = get_logger(__name__)

PathLike = Union[str, Path]

COL_SEP = "\t"
REQUIRED_COLUMNS = ('context_id', 'word', 'gold_sense_id', 'predicted_sense_id', 'positions', 'context')
DEFAULT_TAG = "X"

# lema_TAG con etiqueta en mayúsculas (UPOS)
TAG_PATTERN = re.compile(r'^(?P<lemma>.+)_(?P<tag>[A-Z]+)$')
SPAN_PATTERN = re.compile(r'^\s*(\d+)\s*-\s*(\d+)\s*$')


def read_dataset(path: PathLike) -> List[ContextRecord]:
    """
    Lee un dataset TSV con cabecera.

    Args:
        path: Ruta del TSV (UTF-8, cabecera obligatoria)

    Returns:
        Un registro por fila de datos, en el orden del archivo

    Raises:
        DatasetFormatError: Falta una columna obligatoria, una fila tiene un
            número de campos distinto al de la cabecera, un context_id se repite
            o el archivo no es UTF-8 válido
    """
    path = Path(path)
    try:
        text = path.read_bytes().decode('utf-8')
    except UnicodeDecodeError as e:
        raise DatasetFormatError(f"El dataset no es UTF-8 válido: {e.reason}", path=str(path), offset=e.start) from e
    lines = [line.rstrip('\r\n') for line in io.StringIO(text, newline='')]

    if not lines or not lines[0].strip():
        raise DatasetFormatError("Falta la fila de cabecera", path=str(path), row=1)

    header = lines[0].split(COL_SEP)
    for column in REQUIRED_COLUMNS:
        if column not in header:
            raise DatasetFormatError("Falta una columna obligatoria", path=str(path), column=column)
    index = {name: position for position, name in enumerate(header)}
    extra_columns = [name for name in header if name not in REQUIRED_COLUMNS]

    records: List[ContextRecord] = []
    seen_ids: Set[str] = set()
    for row_number, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(COL_SEP)
        if len(fields) != len(header):
            raise DatasetFormatError(
                f"La fila tiene {len(fields)} campos, la cabecera {len(header)}",
                path=str(path),
                row=row_number
            )
        context_id = fields[index['context_id']]
        if context_id in seen_ids:
            raise DatasetFormatError(f"context_id repetido: {context_id}", path=str(path), row=row_number)
        seen_ids.add(context_id)

        context = fields[index['context']]
        records.append(ContextRecord(
            context_id=context_id,
            query_word=fields[index['word']],
            gold_sense_id=fields[index['gold_sense_id']],
            predicted_sense_id=fields[index['predicted_sense_id']],
            positions=fields[index['positions']],
            context=context,
            tokens=context.split(),
            extra={name: fields[index[name]] for name in extra_columns}
        ))

    logger.info(
        f"Dataset leído: {len(records)} contextos",
        extra={'path': str(path), 'n_contexts': len(records)}
    )
    return records


def _format_rows(records: Sequence[ContextRecord]) -> Tuple[List[str], List[List[str]]]:
    extra_columns: List[str] = []
    for record in records:
        for name in record.extra:
            if name not in extra_columns:
                extra_columns.append(name)
    header = list(REQUIRED_COLUMNS) + extra_columns

    rows = []
    for record in records:
        rows.append([
            record.context_id,
            record.query_word,
            record.gold_sense_id or "",
            record.predicted_sense_id or "",
            record.positions,
            record.context,
            *(record.extra.get(name, "") for name in extra_columns)
        ])
    return header, rows


def write_dataset(records: Sequence[ContextRecord], path: PathLike) -> None:
    """
    Escribe registros con el mismo formato TSV que lee read_dataset.

    Salida determinista: mismo orden de filas, LF y UTF-8.
    """
    header, rows = _format_rows(records)
    with Path(path).open('w', encoding='utf-8', newline='\n') as handle:
        handle.write(COL_SEP.join(header) + "\n")
        for row in rows:
            handle.write(COL_SEP.join(row) + "\n")


def write_predictions(records: Sequence[ContextRecord], path: PathLike) -> None:
    """
    Escribe las predicciones en el formato TSV del dataset.

    Args:
        records: Registros con predicted_sense_id asignado
        path: Ruta de destino

    Raises:
        DatasetFormatError: Si algún registro no tiene predicción
    """
    for row_number, record in enumerate(records, start=2):
        if record.predicted_sense_id is None:
            raise DatasetFormatError(
                f"El contexto {record.context_id} no tiene predicción",
                path=str(path),
                row=row_number,
                column='predicted_sense_id'
            )
    write_dataset(records, path)
    logger.info(
        f"Predicciones escritas: {len(records)} contextos",
        extra={'path': str(path), 'n_contexts': len(records)}
    )


def split_tag(token: str) -> Tuple[str, str]:
    """Separa 'lema_TAG' en (lema, TAG); sin etiqueta devuelve (token, '')."""
    match = TAG_PATTERN.match(token)
    if match is None:
        return token, ""
    return match.group('lemma'), match.group('tag')


def _normalize_one(tokens: List[str], mode: TokenMode) -> List[str]:
    if mode == TokenMode.LOWERCASE:
        return [token.lower() for token in tokens]
    if mode == TokenMode.STRIP_TAGS:
        return [split_tag(token)[0] for token in tokens]
    if mode == TokenMode.ATTACH_DEFAULT_TAG:
        return [token if split_tag(token)[1] else f"{token}_{DEFAULT_TAG}" for token in tokens]
    return list(tokens)


def normalize_tokens(
    tokens: Sequence[str],
    mode: Union[TokenMode, str, Iterable[Union[TokenMode, str]]] = TokenMode.AS_IS
) -> List[str]:
    """
    Ajusta la grafía de los tokens al vocabulario del modelo.

    Args:
        tokens: Tokens del contexto
        mode: Un modo o una secuencia de modos aplicados en orden

    Returns:
        Tokens normalizados
    """
    modes = [mode] if isinstance(mode, (TokenMode, str)) else list(mode)
    result = list(tokens)
    for current in modes:
        result = _normalize_one(result, TokenMode(current))
    return result


def tokenize_raw(text: str) -> List[str]:
    """
    Tokenizador de respaldo para contextos sin lematizar.

    Usa wordpunct de nltk, pasa a minúsculas y descarta la puntuación.
    """
    return [token.lower() for token in wordpunct_tokenize(text) if any(ch.isalnum() for ch in token)]


def _token_spans(context: str) -> List[Tuple[int, int]]:
    return [(m.start(), m.end()) for m in re.finditer(r'\S+', context)]


def _positions_to_spans(positions: str) -> List[Tuple[int, int]]:
    spans = []
    for part in positions.split(','):
        match = SPAN_PATTERN.match(part)
        if match:
            spans.append((int(match.group(1)), int(match.group(2))))
    return spans


def remove_query_word(record: ContextRecord) -> List[str]:
    """
    Quita del contexto todas las apariciones de la palabra consultada.

    La comparación es por lema, sin tener en cuenta la etiqueta PoS. Si
    ningún lema coincide, las posiciones del TSV sirven de señal secundaria.

    Args:
        record: Registro del contexto

    Returns:
        Tokens sin la palabra consultada
    """
    query_lemma = split_tag(record.query_word)[0]
    kept = [token for token in record.tokens if split_tag(token)[0] != query_lemma]
    if len(kept) < len(record.tokens) or not record.positions:
        return kept

    spans = _positions_to_spans(record.positions)
    if not spans or record.tokens != record.context.split():
        return kept
    drop = set()
    for index, (start, end) in enumerate(_token_spans(record.context)):
        # Las posiciones de RUSSE son inclusivas
        if any(start <= span_end and span_start < end for span_start, span_end in spans):
            drop.add(index)
    return [token for index, token in enumerate(record.tokens) if index not in drop]


def context_tokens(
    record: ContextRecord,
    mode: Union[TokenMode, str, Iterable[Union[TokenMode, str]]] = TokenMode.AS_IS
) -> List[str]:
    """
    Tokens del contexto listos para la huella: sin la palabra consultada y normalizados.

    Con el modo raw el contexto se tokeniza desde el texto crudo con
    tokenize_raw y la palabra consultada se quita comparando su lema en
    minúsculas. Los demás modos se aplican después, en orden.

    Args:
        record: Registro del contexto
        mode: Un modo o una secuencia de modos

    Returns:
        Tokens del contexto
    """
    modes = [TokenMode(m) for m in ([mode] if isinstance(mode, (TokenMode, str)) else mode)]
    if TokenMode.RAW in modes:
        query_lemma = split_tag(record.query_word)[0].lower()
        tokens = [token for token in tokenize_raw(record.context) if token != query_lemma]
    else:
        tokens = remove_query_word(record)
    return normalize_tokens(tokens, modes)


def group_by_word(records: Iterable[ContextRecord]) -> Dict[str, List[ContextRecord]]:
    """Agrupa los registros por palabra consultada, en orden de primera aparición."""
    groups: Dict[str, List[ContextRecord]] = OrderedDict()
    for record in records:
        groups.setdefault(record.query_word, []).append(record)
    return groups
