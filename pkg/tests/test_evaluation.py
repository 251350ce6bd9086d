"""
Tests para el Adjusted Rand Index y los reportes de evaluación.
"""

import json
import itertools
import pytest
import numpy as np
from sklearn.metrics import adjusted_rand_score
from app.core.exceptions import EvaluationError
from app.models.corpus import ContextRecord
from app.services.evaluation import (
    adjusted_rand_index,
    contingency_table,
    evaluate,
    render_report_table,
    report_to_json,
)


def pair_counting_ari(gold, pred):
    """ARI enumerando todos los pares de elementos."""
    n = len(gold)
    if n < 2:
        return 1.0
    both = same_gold = same_pred = 0
    for i, j in itertools.combinations(range(n), 2):
        g = gold[i] == gold[j]
        p = pred[i] == pred[j]
        both += g and p
        same_gold += g
        same_pred += p
    pairs = n * (n - 1) / 2
    expected = same_gold * same_pred / pairs
    maximum = (same_gold + same_pred) / 2
    if maximum == expected:
        return 1.0
    return (both - expected) / (maximum - expected)


def _record(context_id, word, gold, pred):
    return ContextRecord(context_id=context_id, query_word=word, gold_sense_id=gold, predicted_sense_id=pred)


class TestAdjustedRandIndex:
    """Tests del ARI."""

    def test_matches_pair_counting(self):
        """Coincide con el conteo de pares en 200 particiones aleatorias."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(1, 13))
            gold = rng.integers(0, rng.integers(1, 5), size=n).tolist()
            pred = rng.integers(0, rng.integers(1, 5), size=n).tolist()

            assert adjusted_rand_index(gold, pred) == pytest.approx(pair_counting_ari(gold, pred), abs=1e-12)

    def test_matches_sklearn(self):
        """Coincide con scikit-learn."""
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            gold = rng.integers(0, 4, size=n).tolist()
            pred = rng.integers(0, 5, size=n).tolist()

            assert adjusted_rand_index(gold, pred) == pytest.approx(adjusted_rand_score(gold, pred), abs=1e-12)

    def test_symmetry_and_relabeling(self):
        """Simétrico e invariante a renombrar etiquetas."""
        rng = np.random.default_rng(2)
        for _ in range(50):
            gold = rng.integers(0, 3, size=15).tolist()
            pred = rng.integers(0, 4, size=15).tolist()
            renamed = [f"sense-{7 - p}" for p in pred]

            assert adjusted_rand_index(gold, pred) == pytest.approx(adjusted_rand_index(pred, gold), abs=1e-15)
            assert adjusted_rand_index(gold, pred) == pytest.approx(adjusted_rand_index(gold, renamed), abs=1e-15)

    def test_self_is_one(self):
        """ARI de una partición consigo misma es 1."""
        labels = ["a", "b", "a", "c", "b"]

        assert adjusted_rand_index(labels, labels) == 1.0

    def test_known_values(self):
        """Valores calculados a mano sobre la tabla de contingencia."""
        assert adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
        assert adjusted_rand_index([0, 0, 1, 1], [0, 0, 0, 0]) == 0.0
        assert adjusted_rand_index([0, 0, 1, 1, 1], [0, 0, 1, 1, 0]) == pytest.approx(1 / 6, abs=1e-12)

    def test_random_labeling_mean_near_zero(self):
        """La media sobre etiquetados aleatorios está cerca de 0."""
        rng = np.random.default_rng(3)
        scores = [
            adjusted_rand_index(rng.integers(0, 3, size=20).tolist(), rng.integers(0, 3, size=20).tolist())
            for _ in range(1000)
        ]

        assert abs(np.mean(scores)) < 0.02

    def test_degenerate_cases(self):
        """n=1 y particiones triviales iguales dan 1; longitudes distintas fallan."""
        assert adjusted_rand_index(["a"], ["x"]) == 1.0
        assert adjusted_rand_index([1, 1, 1], [5, 5, 5]) == 1.0
        assert adjusted_rand_index([1, 2, 3], [4, 5, 6]) == 1.0
        assert adjusted_rand_index([1, 1, 1], [1, 2, 3]) == 0.0
        with pytest.raises(EvaluationError):
            adjusted_rand_index([1, 2], [1])
        with pytest.raises(EvaluationError):
            adjusted_rand_index([], [])

    def test_contingency_table(self):
        """Tabla clases × clusters en orden de aparición."""
        table = contingency_table(["a", "a", "b"], [1, 2, 2])

        np.testing.assert_array_equal(table, [[1, 1], [0, 1]])


class TestEvaluate:
    """Tests del reporte por palabra."""

    def _records(self):
        return [
            _record("1", "замок", "1", "0"),
            _record("2", "замок", "1", "0"),
            _record("3", "замок", "2", "1"),
            _record("4", "замок", "2", "1"),
            _record("5", "лук", "1", "0"),
            _record("6", "лук", "2", "0"),
        ]

    def test_per_word_and_aggregates(self):
        """ARI por palabra, macro y ponderado por número de contextos."""
        report = evaluate(self._records())

        assert report.per_word["замок"].ari == 1.0
        assert report.per_word["лук"].ari == 0.0
        assert report.per_word["замок"].k_gold == 2
        assert report.per_word["лук"].k_pred == 1
        assert report.aggregate_macro == pytest.approx(0.5)
        assert report.aggregate_weighted == pytest.approx(4 / 6)

    def test_missing_labels(self):
        """Un registro sin predicción es un error."""
        with pytest.raises(EvaluationError):
            evaluate([_record("1", "замок", "1", None)])

    def test_empty(self):
        """Sin registros no hay reporte."""
        with pytest.raises(EvaluationError):
            evaluate([])

    def test_json_and_table(self):
        """Serialización JSON y tabla legible."""
        report = evaluate(self._records())
        data = json.loads(report_to_json(report))
        table = render_report_table(report)

        assert set(data) == {"per_word", "aggregate_macro", "aggregate_weighted"}
        assert data["per_word"]["лук"]["n_contexts"] == 2
        assert "ARI weighted (headline): 0.6667" in table
        assert "замок" in table
