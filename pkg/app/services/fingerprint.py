"""
Huellas semánticas: promedio ponderado de los embeddings de un contexto.
Los lemas repetidos cuentan una vez (bolsa de palabras binaria) y los frecuentes pesan menos.
"""

from collections import Counter  # Conteo de tokens
from concurrent.futures import ThreadPoolExecutor  # Paralelismo por filas
from typing import List, Sequence, Tuple  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.logging import get_logger  # Sistema de logging
from app.models.corpus import ContextRecord, TokenMode  # Tipos de dominio
from app.models.embedding import EmbeddingModel, WeightScheme  # Modelo y pesos
from app.models.fingerprint import Averaging, BagOfWords, Fingerprint, FingerprintBatch  # Huellas
from app.services.corpus_io import context_tokens  # Preprocesado de contextos
from app.services.embedding_store import token_weights  # Pesos por frecuencia

logger = get_logger(__name__)


def _hits(tokens: Sequence[str], model: EmbeddingModel, bag_of_words: BagOfWords) -> Tuple[List[str], np.ndarray]:
    """Tokens del vocabulario ordenados por índice del modelo, con su multiplicidad."""
    counts = Counter(token for token in tokens if token in model)
    ordered = sorted(counts, key=model.vocab.__getitem__)
    if bag_of_words == BagOfWords.BINARY:
        multiplicity = np.ones(len(ordered), dtype=np.float64)
    else:
        multiplicity = np.array([counts[token] for token in ordered], dtype=np.float64)
    return ordered, multiplicity


def fingerprint(
    tokens: Sequence[str],
    model: EmbeddingModel,
    scheme: WeightScheme,
    normalize: bool = True,
    bag_of_words: BagOfWords = BagOfWords.BINARY,
    averaging: Averaging = Averaging.WEIGHTED
) -> Fingerprint:
    """
    Calcula la huella semántica de un contexto.

    Con bolsa binaria, H es el conjunto de tokens distintos presentes en el
    vocabulario y v = Σ w(t)·emb(t) / Σ w(t). Los tokens fuera del vocabulario
    se ignoran; si no queda ninguno, o si sus vectores se anulan y el
    promedio es exactamente cero, la huella es nula.

    Args:
        tokens: Tokens ya normalizados a las convenciones del modelo
        model: Modelo de embeddings
        scheme: Esquema de pesos por frecuencia
        normalize: Normalizar el resultado a norma L2 unitaria
        bag_of_words: binary colapsa repeticiones, count las conserva
        averaging: weighted divide por Σw, count por el número de tokens

    Returns:
        Huella con el vector, el número de tokens usados y la marca de nula
    """
    hits, multiplicity = _hits(tokens, model, bag_of_words)
    if not hits:
        return Fingerprint.zero(model.dim)

    weights = token_weights(model, scheme, hits) * multiplicity
    if weights.sum() <= 0.0:
        # Todos los pesos recortados a 0: promedio simple
        weights = multiplicity

    rows = model.vectors[[model.vocab[token] for token in hits]].astype(np.float64)
    denominator = weights.sum() if averaging == Averaging.WEIGHTED else multiplicity.sum()
    vector = weights @ rows / denominator

    norm = np.linalg.norm(vector)
    if norm == 0.0:
        # Vectores que se anulan entre sí: sin dirección, la huella es nula
        logger.warning(
            "Huella de norma cero con tokens en el vocabulario",
            extra={'n_hits': len(hits)}
        )
        return Fingerprint.zero(model.dim)
    if normalize:
        vector = vector / norm

    return Fingerprint(vector, len(hits))


def fingerprint_batch(
    records: Sequence[ContextRecord],
    model: EmbeddingModel,
    scheme: WeightScheme,
    normalize: bool = True,
    token_mode: TokenMode = TokenMode.AS_IS,
    bag_of_words: BagOfWords = BagOfWords.BINARY,
    averaging: Averaging = Averaging.WEIGHTED,
    n_jobs: int = 1
) -> FingerprintBatch:
    """
    Huellas de un grupo de contextos de la misma palabra.

    La fila i es la huella de context_tokens(records[i], token_mode). El
    orden se conserva con cualquier número de hilos.

    Args:
        records: Contextos de una misma palabra consultada
        model: Modelo de embeddings (solo lectura)
        scheme: Esquema de pesos
        normalize: Normalización L2
        token_mode: Normalización de tokens
        bag_of_words: Tratamiento de repeticiones
        averaging: Denominador del promedio
        n_jobs: Hilos de trabajo

    Returns:
        Matriz n × dim con las marcas de huella nula por fila
    """
    def compute(record: ContextRecord) -> Fingerprint:
        return fingerprint(context_tokens(record, token_mode), model, scheme, normalize, bag_of_words, averaging)

    if n_jobs > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as executor:
            prints = list(executor.map(compute, records))
    else:
        prints = [compute(record) for record in records]

    matrix = np.zeros((len(prints), model.dim), dtype=np.float64)
    for row, item in enumerate(prints):
        matrix[row] = item.vector
    is_zero = np.array([item.is_zero for item in prints], dtype=bool)

    if is_zero.any():
        logger.info(
            f"{int(is_zero.sum())} contextos sin tokens en el vocabulario",
            extra={'n_contexts': len(prints), 'n_zero': int(is_zero.sum())}
        )
    return FingerprintBatch(matrix, is_zero, [item.n_hits for item in prints])
