"""
Orquestación del flujo completo de inducción de sentidos.
Contextos → huellas → similitudes → Affinity Propagation (→ K-Means o espectral) → predicciones.
"""

import csv  # Escritura de la rejilla
import itertools  # Producto de la rejilla
import time  # Para medir latencia
from concurrent.futures import ThreadPoolExecutor  # Paralelismo por palabra y por celda
from pathlib import Path  # Rutas de archivos
from typing import Callable, Dict, List, Optional, Sequence, TypeVar, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.config import PipelineConfig  # Configuración del pipeline
from app.core.exceptions import ConfigurationError, DatasetFormatError  # Errores de dominio
from app.core.logging import get_logger, log_clustering, log_stage  # Sistema de logging
from app.models.clustering import ClusterAssignment, Strategy  # Tipos de clustering
from app.models.corpus import ContextRecord  # Tipos de dominio
from app.models.embedding import EmbeddingModel, WeightKind, WeightScheme  # Modelo y pesos
from app.models.evaluation import EvaluationReport  # Reporte
from app.models.fingerprint import BagOfWords, FingerprintBatch  # Huellas
from app.models.pipeline import GridCell, GridResult, GridSpec  # Rejilla
from app.services.affinity_propagation import affinity_propagation  # Affinity Propagation
from app.services.corpus_io import group_by_word  # Agrupación por palabra
from app.services.embedding_store import load_frequencies, load_model  # Carga del modelo
from app.services.evaluation import evaluate  # ARI
from app.services.fingerprint import fingerprint_batch  # Huellas semánticas
from app.services.kmeans import kmeans  # K-Means
from app.services.similarity import similarity_matrix  # Matriz de similitud
from app.services.spectral import spectral_clustering  # Clustering espectral
from app.utils.dumps import safe_name, write_assignment_csv, write_matrix_csv  # Volcados de depuración
from app.utils.labels import canonicalize_labels  # Etiquetado canónico

logger = get_logger(__name__)

T = TypeVar('T')
R = TypeVar('R')

ABLATION_CONDITIONS = ("count-bow", "binary-bow", "binary-bow+weights")


def _ordered_map(func: Callable[[T], R], items: Sequence[T], n_jobs: int) -> List[R]:
    """map con hilos que conserva el orden de entrada."""
    if n_jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as executor:
            return list(executor.map(func, items))
    return [func(item) for item in items]


def load_pipeline_model(config: PipelineConfig) -> EmbeddingModel:
    """
    Carga el modelo y, si está configurada, la tabla de frecuencias.

    Raises:
        ConfigurationError: Si no hay model_path
    """
    if config.model_path is None:
        raise ConfigurationError("Falta model_path (flag --model o WSI_MODEL_PATH)")
    frequencies = load_frequencies(config.frequency_path) if config.frequency_path else None
    if frequencies is not None and not frequencies:
        logger.warning("Tabla de frecuencias vacía: los pesos serán uniformes")
    elif frequencies is None and config.weight_scheme.kind != WeightKind.UNIFORM:
        logger.warning(
            "Sin tabla de frecuencias: los pesos serán uniformes",
            extra={'path': str(config.model_path)}
        )
    return load_model(config.model_path, config.model_format, frequencies)


def prepare_fingerprints(
    dataset: Sequence[ContextRecord],
    model: EmbeddingModel,
    config: PipelineConfig
) -> Dict[str, FingerprintBatch]:
    """Huellas por palabra consultada; no dependen de los parámetros de AP."""
    groups = group_by_word(dataset)
    words = list(groups)

    def compute(word: str) -> FingerprintBatch:
        return fingerprint_batch(
            groups[word],
            model,
            config.weight_scheme,
            normalize=config.normalize,
            token_mode=config.token_mode,
            bag_of_words=config.bag_of_words,
            averaging=config.averaging
        )

    batches = _ordered_map(compute, words, config.n_jobs)
    return dict(zip(words, batches))


def _second_stage(X: np.ndarray, k: int, config: PipelineConfig) -> ClusterAssignment:
    if config.strategy == Strategy.AP_THEN_SPECTRAL:
        return spectral_clustering(
            X,
            k,
            seed=config.seed,
            affinity=config.spectral_affinity,
            gamma=config.spectral_gamma,
            max_size=config.eigen_max_size,
            n_restarts=config.kmeans_restarts,
            max_iter=config.kmeans_max_iter
        )
    return kmeans(X, k, seed=config.seed, max_iter=config.kmeans_max_iter, n_restarts=config.kmeans_restarts)


def _assign_zero_rows(labels: np.ndarray, is_zero: np.ndarray) -> np.ndarray:
    """Las huellas nulas van al cluster más grande (empate: etiqueta menor)."""
    if not is_zero.any():
        return labels
    if is_zero.all():
        return np.zeros_like(labels)
    counts = np.bincount(labels[~is_zero])
    labels = labels.copy()
    labels[is_zero] = int(np.argmax(counts))
    return labels


def _dump(config: PipelineConfig, word: str, ids: List[str], batch: FingerprintBatch,
          s: Optional[np.ndarray], assignment: Optional[ClusterAssignment]) -> None:
    directory = Path(config.dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stem = safe_name(word)
    write_matrix_csv(directory / f"{stem}.fingerprints.csv", ids, batch.matrix)
    if s is not None:
        nonzero_ids = [i for i, zero in zip(ids, batch.is_zero) if not zero]
        write_matrix_csv(directory / f"{stem}.similarity.csv", nonzero_ids, s)
        if assignment is not None:
            write_assignment_csv(directory / f"{stem}.assignment.csv", nonzero_ids, assignment)


def induce_word(
    word: str,
    records: Sequence[ContextRecord],
    batch: FingerprintBatch,
    config: PipelineConfig
) -> List[int]:
    """
    Etiquetas de sentido de los contextos de una palabra.

    Args:
        word: Palabra consultada
        records: Sus contextos
        batch: Huellas de esos contextos
        config: Configuración

    Returns:
        Etiquetas canónicas, una por contexto
    """
    n = len(records)
    if n == 1:
        return [0]

    is_zero = batch.is_zero
    X = batch.matrix[~is_zero]
    labels = np.zeros(n, dtype=np.int64)
    S = None
    final: Optional[ClusterAssignment] = None

    if X.shape[0] >= 2:
        S = similarity_matrix(X, config.metric, config.ap.preference)
        ap_assignment = affinity_propagation(S, config.ap)
        k = int(min(max(ap_assignment.k, 1), X.shape[0]))
        if config.strategy == Strategy.AP_DIRECT:
            final = ap_assignment
        elif k == 1:
            final = ClusterAssignment(labels=[0] * X.shape[0], exemplars=[0], k=1)
        else:
            final = _second_stage(X, k, config)
        labels[~is_zero] = final.labels

        log_clustering(
            logger,
            query_word=word,
            n_contexts=n,
            k=final.k,
            strategy=config.strategy.value,
            converged=ap_assignment.converged,
            n_iter=ap_assignment.n_iter,
            n_zero=int(is_zero.sum()),
            preference=S.preference,
            damping=config.ap.damping
        )

    if config.dump_dir is not None:
        _dump(config, word, [r.context_id for r in records], batch, None if S is None else S.s, final)

    return canonicalize_labels(_assign_zero_rows(labels, is_zero).tolist())


def run_wsi(
    dataset: Sequence[ContextRecord],
    config: PipelineConfig,
    model: Optional[EmbeddingModel] = None,
    fingerprints: Optional[Dict[str, FingerprintBatch]] = None,
    n_jobs: Optional[int] = None
) -> List[ContextRecord]:
    """
    Ejecuta el flujo completo y devuelve los registros con predicción.

    Cada palabra consultada es una unidad independiente; la salida conserva
    el orden del dataset con cualquier número de hilos.

    Args:
        dataset: Contextos de una o varias palabras
        config: Configuración del pipeline
        model: Modelo ya cargado (si no, se carga desde config)
        fingerprints: Huellas precalculadas por palabra (opcional)
        n_jobs: Hilos de trabajo (por defecto config.n_jobs)

    Returns:
        Registros con predicted_sense_id
    """
    start_time = time.perf_counter()
    if model is None:
        model = load_pipeline_model(config)
    if fingerprints is None:
        fingerprints = prepare_fingerprints(dataset, model, config)

    groups = group_by_word(dataset)
    missing = [word for word in groups if word not in fingerprints]
    if missing:
        raise DatasetFormatError(f"Faltan huellas para las palabras: {missing}")
    words = list(groups)

    all_labels = _ordered_map(
        lambda word: induce_word(word, groups[word], fingerprints[word], config),
        words,
        n_jobs or config.n_jobs
    )

    predictions: Dict[str, str] = {}
    for word, labels in zip(words, all_labels):
        for record, label in zip(groups[word], labels):
            predictions[record.context_id] = str(label)

    result = [record.with_prediction(predictions[record.context_id]) for record in dataset]
    log_stage(
        logger,
        stage="induce",
        latency_ms=int((time.perf_counter() - start_time) * 1000),
        n_contexts=len(result),
        strategy=config.strategy.value
    )
    return result


def _with_ap(config: PipelineConfig, preference: float, damping: float) -> PipelineConfig:
    ap = config.ap.model_copy(update={'preference': preference, 'damping': damping})
    return config.model_copy(update={'ap': ap})


def grid_search(
    train: Sequence[ContextRecord],
    config: PipelineConfig,
    grid: GridSpec,
    model: Optional[EmbeddingModel] = None,
    n_jobs: Optional[int] = None
) -> GridResult:
    """
    Evalúa run_wsi + evaluate en cada celda preferencia × damping.

    Gana el mayor objetivo; los empates se rompen por mayor preferencia y
    luego mayor damping. Las celdas son independientes y pueden ir en paralelo.

    Args:
        train: Dataset con sentidos gold
        config: Configuración base
        grid: Rejilla a recorrer
        model: Modelo ya cargado (opcional)
        n_jobs: Hilos de trabajo (por defecto config.n_jobs)

    Returns:
        Mejor celda y rejilla completa en orden preferencia × damping
    """
    start_time = time.perf_counter()
    if model is None:
        model = load_pipeline_model(config)
    fingerprints = prepare_fingerprints(train, model, config)
    cells = list(itertools.product(grid.preferences, grid.dampings))

    def run_cell(cell) -> GridCell:
        preference, damping = cell
        cell_config = _with_ap(config, preference, damping).model_copy(update={'n_jobs': 1, 'dump_dir': None})
        report = evaluate(run_wsi(train, cell_config, model, fingerprints))
        return GridCell(
            preference=preference,
            damping=damping,
            macro_ari=report.aggregate_macro,
            weighted_ari=report.aggregate_weighted
        )

    results = _ordered_map(run_cell, cells, n_jobs or config.n_jobs)
    best = max(results, key=lambda c: (c.score(grid.objective), c.preference, c.damping))

    log_stage(
        logger,
        stage="gridsearch",
        latency_ms=int((time.perf_counter() - start_time) * 1000),
        preference=best.preference,
        damping=best.damping,
        ari=best.score(grid.objective)
    )
    return GridResult(best=best, cells=results, objective=grid.objective)


def write_grid_csv(result: GridResult, path: Union[str, Path]) -> None:
    """Columnas: preference, damping, macro_ari, weighted_ari."""
    with Path(path).open('w', encoding='utf-8', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(["preference", "damping", "macro_ari", "weighted_ari"])
        for cell in result.cells:
            writer.writerow([
                f"{cell.preference:.4f}",
                f"{cell.damping:.4f}",
                f"{cell.macro_ari:.6f}",
                f"{cell.weighted_ari:.6f}"
            ])


def ablation(
    train: Sequence[ContextRecord],
    config: PipelineConfig,
    model: Optional[EmbeddingModel] = None
) -> Dict[str, EvaluationReport]:
    """
    Compara las variantes de promedio de la huella con el resto de la configuración fijo.

    Condiciones: bolsa de conteo sin pesos, bolsa binaria sin pesos y bolsa
    binaria con pesos por frecuencia global.

    Returns:
        Reporte por condición, en ese orden
    """
    if model is None:
        model = load_pipeline_model(config)
    weighted = config.weight_scheme
    if weighted.kind == WeightKind.UNIFORM:
        weighted = WeightScheme()
    uniform = WeightScheme(kind=WeightKind.UNIFORM)

    variants = {
        "count-bow": {'bag_of_words': BagOfWords.COUNT, 'weight_scheme': uniform},
        "binary-bow": {'bag_of_words': BagOfWords.BINARY, 'weight_scheme': uniform},
        "binary-bow+weights": {'bag_of_words': BagOfWords.BINARY, 'weight_scheme': weighted},
    }
    reports: Dict[str, EvaluationReport] = {}
    for name in ABLATION_CONDITIONS:
        variant = config.model_copy(update=variants[name])
        reports[name] = evaluate(run_wsi(train, variant, model))
        logger.info(
            f"Ablación {name}: ARI ponderado {reports[name].aggregate_weighted:.4f}",
            extra={'ari': reports[name].aggregate_weighted}
        )
    return reports
