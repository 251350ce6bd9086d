"""
Tests del flujo completo: huellas, clustering, rejilla y ablación.
Usan datasets sintéticos con sentidos plantados.
"""

import pytest
import numpy as np
from app.core.config import PipelineConfig
from app.core.exceptions import ConfigurationError, DatasetFormatError
from app.models.clustering import Strategy
from app.models.corpus import ContextRecord, TokenMode
from app.models.embedding import EmbeddingModel
from app.models.pipeline import GridSpec, Objective
from app.services.corpus_io import read_dataset
from app.services.evaluation import evaluate
from app.services.pipeline import (
    ABLATION_CONDITIONS,
    ablation,
    grid_search,
    load_pipeline_model,
    prepare_fingerprints,
    run_wsi,
    write_grid_csv,
)
from app.services.synthetic import make_planted_dataset, write_fixture


def _k(records, word=None):
    return len({r.predicted_sense_id for r in records if word is None or r.query_word == word})


class TestRunWSI:
    """Tests de run_wsi sobre sentidos plantados."""

    def test_two_senses_ap_direct(self, planted_two_senses, direct_config):
        """AP directo recupera dos sentidos plantados."""
        result = run_wsi(planted_two_senses.records, direct_config, model=planted_two_senses.model)

        assert evaluate(result).aggregate_weighted >= 0.9
        assert _k(result) == 2

    def test_four_senses_two_stage(self, planted_four_senses, two_stage_config):
        """AP seguido de K-Means recupera cuatro sentidos."""
        result = run_wsi(planted_four_senses.records, two_stage_config, model=planted_four_senses.model)

        assert evaluate(result).aggregate_weighted >= 0.7

    def test_spectral_strategy(self, planted_two_senses):
        """La variante espectral también separa los sentidos."""
        config = PipelineConfig(strategy=Strategy.AP_THEN_SPECTRAL)
        result = run_wsi(planted_two_senses.records, config, model=planted_two_senses.model)

        assert evaluate(result).aggregate_weighted >= 0.9

    def test_strategies_agree_on_k(self, planted_four_senses, direct_config, two_stage_config):
        """En dos etapas, K-Means usa el k inducido por AP."""
        dataset = planted_four_senses
        direct = run_wsi(dataset.records, direct_config, model=dataset.model)
        two_stage = run_wsi(dataset.records, two_stage_config, model=dataset.model)

        assert _k(direct) == _k(two_stage)

    def test_order_preserved(self, planted_two_senses, direct_config):
        """La salida conserva el orden y los campos del dataset."""
        records = planted_two_senses.records
        result = run_wsi(records, direct_config, model=planted_two_senses.model)

        assert [r.context_id for r in result] == [r.context_id for r in records]
        assert [r.gold_sense_id for r in result] == [r.gold_sense_id for r in records]
        assert all(r.predicted_sense_id is not None for r in result)

    def test_deterministic_and_parallel(self, planted_two_senses, two_stage_config):
        """Mismas predicciones entre corridas y con cualquier número de hilos."""
        model = planted_two_senses.model
        # Segunda palabra con el mismo modelo: se reutilizan los contextos con otro query word
        renamed = [
            r.model_copy(update={'context_id': f"b{r.context_id}", 'query_word': "other_NOUN"})
            for r in planted_two_senses.records[:20]
        ]
        dataset = planted_two_senses.records + renamed

        first = run_wsi(dataset, two_stage_config, model=model)
        second = run_wsi(dataset, two_stage_config, model=model)
        parallel = run_wsi(dataset, two_stage_config, model=model, n_jobs=4)

        assert first == second == parallel

    def test_words_independent(self, tiny_model, sample_dataset_file, direct_config):
        """Las predicciones de una palabra no dependen de las demás."""
        dataset = read_dataset(sample_dataset_file)
        full = run_wsi(dataset, direct_config, model=tiny_model)
        only = run_wsi([r for r in dataset if r.query_word == "замок_NOUN"], direct_config, model=tiny_model)

        assert [r for r in full if r.query_word == "замок_NOUN"] == only

    def test_single_context_word(self, tiny_model, sample_dataset_file, direct_config):
        """Una palabra con un único contexto recibe el sentido 0."""
        result = run_wsi(read_dataset(sample_dataset_file), direct_config, model=tiny_model)

        assert [r.predicted_sense_id for r in result if r.query_word == "ключ_NOUN"] == ["0"]

    def test_zero_fingerprint_joins_largest_cluster(self, planted_two_senses, direct_config):
        """Un contexto sin tokens conocidos va al cluster más grande."""
        word = planted_two_senses.records[0].query_word
        unknown = ContextRecord(
            context_id="oov",
            query_word=word,
            gold_sense_id="0",
            tokens=["desconocido_NOUN", word]
        )
        dataset = planted_two_senses.records + [unknown]
        result = run_wsi(dataset, direct_config, model=planted_two_senses.model)

        # Empate entre clusters de 25: gana la etiqueta menor, la del primer contexto
        assert result[-1].predicted_sense_id == result[0].predicted_sense_id

    def test_missing_fingerprints(self, planted_two_senses, direct_config):
        """Huellas precalculadas incompletas son un error de datos."""
        with pytest.raises(DatasetFormatError):
            run_wsi(planted_two_senses.records, direct_config, model=planted_two_senses.model, fingerprints={})

    def test_dump_dir(self, tmp_path, planted_two_senses):
        """Con dump_dir se escriben huellas, similitudes y asignaciones."""
        config = PipelineConfig(dump_dir=tmp_path / "dumps")
        run_wsi(planted_two_senses.records, config, model=planted_two_senses.model)
        names = sorted(p.name for p in (tmp_path / "dumps").iterdir())

        assert len(names) == 3
        assert any(name.endswith(".fingerprints.csv") for name in names)
        assert any(name.endswith(".similarity.csv") for name in names)
        assert any(name.endswith(".assignment.csv") for name in names)

    def test_raw_text_contexts(self, direct_config):
        """Con token_mode raw los contextos sin lematizar se tokenizan y se agrupan por sentido."""
        model = EmbeddingModel(
            ["замок", "дверь", "ключ", "король", "башня"],
            np.array([
                [0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0],
                [0.95, 0.05, 0.0],
                [0.0, 1.0, 0.0],
                [0.05, 0.95, 0.0],
            ])
        )
        contexts = [
            ("0", "Замок: дверь и ключ."),
            ("1", "Король и башня. Замок!"),
            ("0", "Ключ, дверь, замок!"),
            ("1", "Башня, король... замок."),
            ("0", "Замок; ключ и дверь?"),
            ("1", "Замок, король, башня."),
        ]
        records = [
            ContextRecord(context_id=str(i), query_word="замок", gold_sense_id=gold, context=text)
            for i, (gold, text) in enumerate(contexts)
        ]
        config = PipelineConfig(strategy=Strategy.AP_DIRECT, token_mode=TokenMode.RAW)

        batches = prepare_fingerprints(records, model, config)
        result = run_wsi(records, config, model=model)

        assert batches["замок"].n_hits == [2] * 6
        # Partido por espacios, "ключ." no está en el vocabulario
        assert prepare_fingerprints(records, model, direct_config)["замок"].n_hits[0] == 1
        assert evaluate(result).aggregate_weighted == pytest.approx(1.0)


class TestModelLoading:
    """Tests de la carga del modelo desde la configuración."""

    def test_missing_model_path(self):
        """Sin model_path no hay modelo."""
        with pytest.raises(ConfigurationError):
            load_pipeline_model(PipelineConfig())

    def test_from_fixture_files(self, tmp_path, planted_two_senses):
        """El modelo escrito en disco produce las mismas predicciones."""
        paths = write_fixture(tmp_path, planted_two_senses)
        config = PipelineConfig(
            model_path=paths['model'],
            model_format="word2vec-text",
            frequency_path=paths['frequencies']
        )
        from_disk = run_wsi(planted_two_senses.records, config)

        assert evaluate(from_disk).aggregate_weighted >= 0.9


class TestGridSearch:
    """Tests de la búsqueda en rejilla."""

    def test_single_cell(self, planted_two_senses, direct_config):
        """Una rejilla 1 × 1 devuelve esa celda."""
        grid = GridSpec(preferences=[-0.65], dampings=[0.75])
        result = grid_search(planted_two_senses.records, direct_config, grid, model=planted_two_senses.model)

        assert len(result.cells) == 1
        assert result.best == result.cells[0]
        assert result.best.weighted_ari >= 0.9

    def test_cells_order_and_best(self, planted_two_senses, direct_config):
        """Celdas en orden preferencia × damping; el mejor maximiza el objetivo."""
        grid = GridSpec(preferences=[-0.7, -0.6], dampings=[0.7, 0.8], objective=Objective.MACRO_ARI)
        result = grid_search(planted_two_senses.records, direct_config, grid, model=planted_two_senses.model, n_jobs=2)

        assert [(c.preference, c.damping) for c in result.cells] == [(-0.7, 0.7), (-0.7, 0.8), (-0.6, 0.7), (-0.6, 0.8)]
        top = max(c.macro_ari for c in result.cells)
        tied = [c for c in result.cells if c.macro_ari == top]
        assert result.best == max(tied, key=lambda c: (c.preference, c.damping))

    def test_parallel_matches_serial(self, planted_two_senses, direct_config):
        """La rejilla en paralelo da lo mismo que en serie."""
        grid = GridSpec(preferences=[-0.7, -0.5], dampings=[0.6, 0.9])
        model = planted_two_senses.model

        serial = grid_search(planted_two_senses.records, direct_config, grid, model=model, n_jobs=1)
        parallel = grid_search(planted_two_senses.records, direct_config, grid, model=model, n_jobs=4)

        assert serial == parallel

    def test_csv(self, tmp_path, planted_two_senses, direct_config):
        """El CSV lleva cabecera y una fila por celda."""
        grid = GridSpec(preferences=[-0.65], dampings=[0.6, 0.75])
        result = grid_search(planted_two_senses.records, direct_config, grid, model=planted_two_senses.model)
        path = tmp_path / "grid.csv"
        write_grid_csv(result, path)
        lines = path.read_text(encoding="utf-8").splitlines()

        assert lines[0] == "preference,damping,macro_ari,weighted_ari"
        assert len(lines) == 3
        assert lines[1].startswith("-0.6500,0.6000,")
        assert lines[2].startswith("-0.6500,0.7500,")

    def test_invalid_grid(self):
        """Un damping fuera de rango no forma una rejilla."""
        with pytest.raises(ValueError):
            GridSpec(dampings=[1.2])
        with pytest.raises(ValueError):
            GridSpec(preferences=[])

    def test_default_grid(self):
        """La rejilla por defecto cubre [-0.8, -0.4] × [0.6, 0.9] en pasos de 0.05."""
        grid = GridSpec()

        assert grid.preferences[0] == -0.8 and grid.preferences[-1] == -0.4
        assert len(grid.preferences) == 9
        assert grid.dampings[0] == 0.6 and grid.dampings[-1] == 0.9
        assert len(grid.dampings) == 7


class TestAblation:
    """Tests de la comparación de variantes de huella."""

    def test_conditions(self, planted_two_senses, direct_config):
        """Un reporte por condición, en orden."""
        reports = ablation(planted_two_senses.records, direct_config, model=planted_two_senses.model)

        assert tuple(reports) == ABLATION_CONDITIONS
        assert reports["binary-bow+weights"].aggregate_weighted >= 0.9
        for report in reports.values():
            assert -1.0 <= report.aggregate_weighted <= 1.0


class TestFingerprintCache:
    """Tests de las huellas precalculadas."""

    def test_prepare_by_word(self, planted_two_senses, direct_config):
        """Un lote de huellas por palabra, una fila por contexto."""
        batches = prepare_fingerprints(planted_two_senses.records, planted_two_senses.model, direct_config)
        word = planted_two_senses.records[0].query_word

        assert list(batches) == [word]
        assert batches[word].matrix.shape == (50, 50)
        assert not batches[word].is_zero.any()


class TestSyntheticDataset:
    """Tests del generador de sentidos plantados."""

    def test_shape(self):
        """Vocabulario, contextos y sentidos gold."""
        dataset = make_planted_dataset(n_senses=3, n_contexts=12, dim=20, seed=1)

        assert len(dataset.records) == 12
        assert len(dataset.model) == 3 * 20 + 10 + 1
        assert dataset.model.dim == 20
        assert [r.gold_sense_id for r in dataset.records[:4]] == ["0", "1", "2", "0"]

    def test_positions_point_at_query_word(self):
        """positions señala el query word dentro del contexto."""
        dataset = make_planted_dataset(n_contexts=5, dim=10, seed=3)
        for record in dataset.records:
            start, end = (int(v) for v in record.positions.split("-"))
            assert record.context[start:end + 1] == record.query_word

    def test_deterministic(self):
        """Misma semilla, mismo dataset."""
        a = make_planted_dataset(n_contexts=6, dim=8, seed=5)
        b = make_planted_dataset(n_contexts=6, dim=8, seed=5)

        assert a.records == b.records
        assert (a.model.vectors == b.model.vectors).all()

    def test_incoherent_parameters(self):
        """Más sentidos que dimensiones es un error."""
        with pytest.raises(ConfigurationError):
            make_planted_dataset(n_senses=5, dim=4)
        with pytest.raises(ConfigurationError):
            make_planted_dataset(tokens_per_context=30, vocab_per_sense=20)

    def test_write_fixture(self, tmp_path, planted_two_senses):
        """Escribe modelo, frecuencias y dataset."""
        paths = write_fixture(tmp_path, planted_two_senses)

        assert set(paths) == {'model', 'frequencies', 'dataset'}
        assert all(path.is_file() for path in paths.values())
        assert paths['model'].name == "model.txt"
