"""
Generador de datasets sintéticos con sentidos plantados.
Cada sentido es una dirección ortonormal aleatoria; los tokens de un contexto
se muestrean cerca de la dirección de su sentido. Sirve para pruebas de
extremo a extremo sin corpus reales.
"""

from pathlib import Path  # Rutas de archivos
from typing import Dict, List, NamedTuple, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.exceptions import ConfigurationError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging
from app.models.corpus import ContextRecord  # Tipos de dominio
from app.models.embedding import EmbeddingModel, ModelFormat  # Modelo de embeddings
from app.services.corpus_io import write_dataset  # Escritura del TSV
from app.services.embedding_store import write_model  # Escritura del modelo

logger = get_logger(__name__)

# Frecuencias globales de las tres clases de token
SENSE_FREQUENCY = 50
QUERY_FREQUENCY = 5000
COMMON_FREQUENCY = 1000000


class PlantedDataset(NamedTuple):
    """Modelo con frecuencias y registros etiquetados con el sentido plantado."""

    model: EmbeddingModel
    records: List[ContextRecord]
    frequencies: Dict[str, int]


def make_planted_dataset(
    n_senses: int = 2,
    n_contexts: int = 50,
    dim: int = 50,
    sigma: float = 0.05,
    seed: int = 42,
    word: str = "ключ_NOUN",
    tokens_per_context: int = 8,
    vocab_per_sense: int = 20,
    n_common: int = 10,
    common_per_context: int = 2
) -> PlantedDataset:
    """
    Genera una palabra ambigua con n_senses sentidos plantados.

    Los contextos se reparten por turnos entre los sentidos. Cada contexto
    lleva tokens_per_context tokens distintos de su sentido, algunos tokens
    comunes de alta frecuencia y la propia palabra consultada.

    Args:
        n_senses: Número de sentidos (<= dim)
        n_contexts: Contextos de la palabra
        dim: Dimensión de los embeddings
        sigma: Desviación del ruido gaussiano por coordenada
        seed: Semilla
        word: Palabra consultada, como token lema_TAG
        tokens_per_context: Tokens de sentido por contexto
        vocab_per_sense: Tamaño del vocabulario de cada sentido
        n_common: Tokens comunes en el vocabulario
        common_per_context: Tokens comunes por contexto

    Returns:
        Modelo, registros con gold_sense_id y tabla de frecuencias

    Raises:
        ConfigurationError: Parámetros incoherentes
    """
    if not 1 <= n_senses <= dim:
        raise ConfigurationError("n_senses debe estar en [1, dim]", n_senses=n_senses, dim=dim)
    if n_contexts < 1 or tokens_per_context > vocab_per_sense or common_per_context > n_common:
        raise ConfigurationError(
            "Parámetros del generador incoherentes",
            n_contexts=n_contexts,
            tokens_per_context=tokens_per_context,
            common_per_context=common_per_context
        )

    rng = np.random.default_rng(seed)
    directions, _ = np.linalg.qr(rng.standard_normal((dim, n_senses)))

    vocab: List[str] = []
    rows: List[np.ndarray] = []
    frequencies: Dict[str, int] = {}
    sense_tokens: List[List[str]] = []
    for sense in range(n_senses):
        tokens = [f"sense{sense}w{j}_NOUN" for j in range(vocab_per_sense)]
        sense_tokens.append(tokens)
        for token in tokens:
            vocab.append(token)
            rows.append(directions[:, sense] + sigma * rng.standard_normal(dim))
            frequencies[token] = SENSE_FREQUENCY

    common_tokens = [f"common{j}_ADP" for j in range(n_common)]
    for token in common_tokens:
        vocab.append(token)
        rows.append(rng.standard_normal(dim) / np.sqrt(dim))
        frequencies[token] = COMMON_FREQUENCY

    vocab.append(word)
    rows.append(rng.standard_normal(dim) / np.sqrt(dim))
    frequencies[word] = QUERY_FREQUENCY

    model = EmbeddingModel(vocab, np.vstack(rows).astype(np.float32), frequencies)

    records: List[ContextRecord] = []
    for index in range(n_contexts):
        sense = index % n_senses
        picked = [str(t) for t in rng.choice(sense_tokens[sense], size=tokens_per_context, replace=False)]
        picked += [str(t) for t in rng.choice(common_tokens, size=common_per_context, replace=False)]
        order = rng.permutation(len(picked) + 1)
        tokens = [word if position == len(picked) else picked[position] for position in order]

        query_index = tokens.index(word)
        start = sum(len(token) + 1 for token in tokens[:query_index])
        records.append(ContextRecord(
            context_id=str(index + 1),
            query_word=word,
            gold_sense_id=str(sense),
            positions=f"{start}-{start + len(word) - 1}",
            tokens=tokens
        ))

    logger.debug(
        f"Dataset plantado: {n_senses} sentidos, {n_contexts} contextos",
        extra={'query_word': word, 'n_contexts': n_contexts, 'k': n_senses}
    )
    return PlantedDataset(model, records, frequencies)


def write_fixture(
    directory: Union[str, Path],
    dataset: PlantedDataset,
    format: ModelFormat = ModelFormat.TEXT
) -> Dict[str, Path]:
    """
    Escribe modelo, frecuencias y TSV en un directorio.

    Returns:
        Rutas escritas, con claves model, frequencies y dataset
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    suffix = "txt" if ModelFormat(format) == ModelFormat.TEXT else "bin"
    paths = {
        'model': directory / f"model.{suffix}",
        'frequencies': directory / "frequencies.tsv",
        'dataset': directory / "dataset.tsv",
    }
    write_model(dataset.model, paths['model'], format)
    with paths['frequencies'].open('w', encoding='utf-8', newline='\n') as handle:
        for token, count in dataset.frequencies.items():
            handle.write(f"{token}\t{count}\n")
    write_dataset(dataset.records, paths['dataset'])
    return paths
