"""
Evaluación de clusterings de sentidos con Adjusted Rand Index.
Calcula el ARI por palabra y los agregados macro y ponderado por número de contextos.
"""

import json  # Serialización del reporte
from typing import Dict, Hashable, List, Sequence  # Tipos de datos
import numpy as np  # Álgebra lineal
from app.core.exceptions import EvaluationError  # Errores de dominio
from app.core.logging import get_logger  # Sistema de logging
from app.models.corpus import ContextRecord  # Tipos de dominio
from app.models.evaluation import EvaluationReport, WordScore  # Reporte
from app.services.corpus_io import group_by_word  # Agrupación por palabra

logger = get_logger(__name__)


def _comb2(values: np.ndarray) -> float:
    values = values.astype(np.int64)
    return float((values * (values - 1) // 2).sum())


def contingency_table(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> np.ndarray:
    """Tabla de contingencia clases gold × clusters predichos (etiquetas opacas)."""
    gold_ids = {label: i for i, label in enumerate(dict.fromkeys(gold))}
    pred_ids = {label: j for j, label in enumerate(dict.fromkeys(pred))}
    table = np.zeros((len(gold_ids), len(pred_ids)), dtype=np.int64)
    for g, p in zip(gold, pred):
        table[gold_ids[g], pred_ids[p]] += 1
    return table


def adjusted_rand_index(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """
    Adjusted Rand Index entre dos particiones.

    Si el denominador es 0 (ambas particiones triviales del mismo modo)
    devuelve 1.0.

    Args:
        gold: Etiquetas de referencia
        pred: Etiquetas predichas, misma longitud

    Returns:
        ARI en [−1, 1]

    Raises:
        EvaluationError: Longitudes distintas o secuencias vacías
    """
    gold, pred = list(gold), list(pred)
    if len(gold) != len(pred):
        raise EvaluationError("Las etiquetas tienen longitudes distintas", gold=len(gold), pred=len(pred))
    n = len(gold)
    if n == 0:
        raise EvaluationError("No hay etiquetas que evaluar")

    table = contingency_table(gold, pred)
    index = _comb2(table.ravel())
    sum_a = _comb2(table.sum(axis=1))
    sum_b = _comb2(table.sum(axis=0))
    total = n * (n - 1) / 2.0
    if total == 0.0:
        return 1.0

    expected = sum_a * sum_b / total
    maximum = (sum_a + sum_b) / 2.0
    denominator = maximum - expected
    if denominator == 0.0:
        return 1.0
    return float((index - expected) / denominator)


def evaluate(records: Sequence[ContextRecord]) -> EvaluationReport:
    """
    ARI por palabra consultada más los agregados macro y ponderado.

    Args:
        records: Registros con sentido gold y predicho

    Returns:
        Reporte de evaluación

    Raises:
        EvaluationError: Algún registro sin gold o sin predicción, o lista vacía
    """
    if not records:
        raise EvaluationError("No hay registros que evaluar")
    for record in records:
        if record.gold_sense_id is None or record.predicted_sense_id is None:
            raise EvaluationError(
                "El registro no tiene sentido gold y predicho",
                context_id=record.context_id
            )

    per_word: Dict[str, WordScore] = {}
    for word, group in group_by_word(records).items():
        gold = [record.gold_sense_id for record in group]
        pred = [record.predicted_sense_id for record in group]
        per_word[word] = WordScore(
            ari=adjusted_rand_index(gold, pred),
            n_contexts=len(group),
            k_gold=len(set(gold)),
            k_pred=len(set(pred))
        )

    values = np.array([score.ari for score in per_word.values()])
    sizes = np.array([score.n_contexts for score in per_word.values()], dtype=np.float64)
    report = EvaluationReport(
        per_word=per_word,
        aggregate_macro=float(values.mean()),
        aggregate_weighted=float((values * sizes).sum() / sizes.sum())
    )

    logger.info(
        f"Evaluación completada: ARI ponderado {report.aggregate_weighted:.4f}",
        extra={'ari': report.aggregate_weighted, 'n_contexts': int(sizes.sum())}
    )
    return report


def report_to_json(report: EvaluationReport) -> str:
    """Reporte como JSON con claves per_word, aggregate_macro y aggregate_weighted."""
    return json.dumps(report.model_dump(), ensure_ascii=False, indent=2)


def render_report_table(report: EvaluationReport) -> str:
    """
    Tabla legible del reporte; el ARI ponderado es la cifra principal.

    Args:
        report: Reporte de evaluación

    Returns:
        Tabla en texto plano
    """
    width = max([len("word")] + [len(word) for word in report.per_word])
    lines: List[str] = [
        f"{'word':<{width}}  {'ari':>8}  {'n':>5}  {'k_gold':>6}  {'k_pred':>6}",
        "-" * (width + 33)
    ]
    for word, score in report.per_word.items():
        lines.append(
            f"{word:<{width}}  {score.ari:>8.4f}  {score.n_contexts:>5}  {score.k_gold:>6}  {score.k_pred:>6}"
        )
    lines.append("-" * (width + 33))
    lines.append(f"ARI weighted (headline): {report.aggregate_weighted:.4f}")
    lines.append(f"ARI macro:               {report.aggregate_macro:.4f}")
    return "\n".join(lines)
