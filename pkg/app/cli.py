"""
Interfaz de línea de comandos del toolkit de inducción de sentidos.
Cada subcomando construye la configuración, carga lo necesario y delega en los servicios.
"""

import argparse  # Parsing de argumentos
import json  # Salida JSON
import sys  # Para stdout
from pathlib import Path  # Rutas de archivos
from typing import Any, Callable, Dict, List, Optional, Sequence, Union  # Tipos de datos
import numpy as np  # Álgebra lineal
from pydantic import ValidationError  # Validación de la rejilla
from app import __version__  # Versión del paquete
from app.core.config import PipelineConfig, load_config  # Configuración del pipeline
from app.core.exceptions import ConfigurationError, DatasetFormatError  # Errores de dominio
from app.core.logging import get_logger, setup_logging  # Sistema de logging
from app.models.clustering import Metric, Strategy  # Opciones de clustering
from app.models.corpus import ContextRecord, TokenMode  # Tipos de dominio
from app.models.embedding import ModelFormat, WeightKind  # Formato de modelo y pesos
from app.models.fingerprint import Averaging, BagOfWords  # Variantes de la huella
from app.models.pipeline import GridSpec, Objective  # Rejilla
from app.services.corpus_io import group_by_word, read_dataset, write_predictions  # Lectura y escritura del TSV
from app.services.embedding_store import model_stats  # Estadísticas del modelo
from app.services.evaluation import evaluate, render_report_table, report_to_json  # ARI
from app.services.pipeline import (  # Orquestación
    ablation,
    grid_search,
    load_pipeline_model,
    prepare_fingerprints,
    run_wsi,
    write_grid_csv,
)
from app.services.projection import project_2d, write_projection_csv  # Proyección 2-D
from app.services.synthetic import make_planted_dataset, write_fixture  # Datos sintéticos

logger = get_logger(__name__)


class UsageError(Exception):
    """Argumentos de línea de comandos inválidos (código de salida 1)."""

    def __init__(self, message: str, usage: str = ""):
        self.message = message
        self.usage = usage
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser que lanza UsageError en lugar de terminar el proceso."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, self.format_usage())


def _preference(value: str) -> Union[float, str]:
    if value == "median":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"preferencia inválida: {value!r} (número o 'median')")


def _float_list(value: str) -> List[float]:
    try:
        return [float(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de números inválida: {value!r}")


def _choices(enum_type) -> List[str]:
    return [member.value for member in enum_type]


def _common_parser() -> argparse.ArgumentParser:
    """Flags compartidos por todos los subcomandos."""
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="Archivo key=value con claves WSI_*")
    common.add_argument("--seed", type=int, default=None, help="Semilla única (por defecto 42)")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR o CRITICAL")
    common.add_argument("--log-text", action="store_true", help="Logs en texto plano en lugar de JSON")
    common.add_argument("--jobs", type=int, default=None, help="Hilos de trabajo")
    return common


def _model_parser() -> argparse.ArgumentParser:
    """Flags del modelo de embeddings y de las huellas."""
    model = _Parser(add_help=False)
    model.add_argument("--model", type=Path, help="Modelo word2vec")
    model.add_argument("--model-format", choices=_choices(ModelFormat), default=None)
    model.add_argument("--frequencies", type=Path, help="Archivo token<TAB>frecuencia")
    model.add_argument("--weights", choices=_choices(WeightKind), default=None, help="Esquema de pesos")
    model.add_argument("--token-mode", choices=_choices(TokenMode), default=None)
    model.add_argument("--bag-of-words", choices=_choices(BagOfWords), default=None)
    model.add_argument("--averaging", choices=_choices(Averaging), default=None)
    return model


def _clustering_parser() -> argparse.ArgumentParser:
    """Flags de similitud y clustering."""
    clustering = _Parser(add_help=False)
    clustering.add_argument("--strategy", choices=_choices(Strategy), default=None)
    clustering.add_argument("--metric", choices=_choices(Metric), default=None)
    clustering.add_argument("--preference", type=_preference, default=None, help="Número o 'median'")
    clustering.add_argument("--damping", type=float, default=None)
    clustering.add_argument("--dump-dir", type=Path, default=None, help="Volcados CSV de depuración")
    return clustering


def build_parser() -> argparse.ArgumentParser:
    """Construye el parser con todos los subcomandos."""
    common = _common_parser()
    model = _model_parser()
    clustering = _clustering_parser()

    parser = _Parser(prog="wsi", description="Inducción de sentidos con huellas semánticas y Affinity Propagation")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers.required = True

    induce = subparsers.add_parser("induce", parents=[common, model, clustering], help="Predice sentidos")
    induce.add_argument("--input", type=Path, required=True, help="Dataset TSV")
    induce.add_argument("--output", type=Path, required=True, help="TSV de predicciones")

    evaluation = subparsers.add_parser("evaluate", parents=[common], help="ARI de unas predicciones")
    evaluation.add_argument("--predictions", type=Path, required=True, help="TSV con predicted_sense_id")
    evaluation.add_argument("--gold", type=Path, default=None, help="TSV con gold_sense_id (si no, el mismo archivo)")
    evaluation.add_argument("--json", action="store_true", help="Imprime el reporte en JSON")
    evaluation.add_argument("--output", type=Path, default=None, help="Guarda el reporte JSON")

    grid = subparsers.add_parser("gridsearch", parents=[common, model, clustering], help="Búsqueda en rejilla")
    grid.add_argument("--train", type=Path, required=True, help="Dataset con sentidos gold")
    grid.add_argument("--output", type=Path, required=True, help="CSV de la rejilla")
    grid.add_argument("--preferences", type=_float_list, default=None, help="Lista separada por comas")
    grid.add_argument("--dampings", type=_float_list, default=None, help="Lista separada por comas")
    grid.add_argument("--objective", choices=_choices(Objective), default=Objective.WEIGHTED_ARI.value)

    project = subparsers.add_parser("project", parents=[common, model], help="Proyección 2-D de las huellas")
    project.add_argument("--input", type=Path, required=True, help="Dataset TSV (con o sin predicciones)")
    project.add_argument("--output", type=Path, required=True, help="CSV de coordenadas")
    project.add_argument("--word", default=None, help="Solo esta palabra consultada")

    inspect = subparsers.add_parser("inspect-model", parents=[common, model], help="Estadísticas del modelo")
    inspect.add_argument("--json", action="store_true", help="Salida JSON")

    abl = subparsers.add_parser("ablation", parents=[common, model, clustering], help="Variantes de la huella")
    abl.add_argument("--train", type=Path, required=True, help="Dataset con sentidos gold")

    fixture = subparsers.add_parser("make-fixture", parents=[common], help="Genera un dataset sintético")
    fixture.add_argument("--output-dir", type=Path, required=True)
    fixture.add_argument("--senses", type=int, default=2)
    fixture.add_argument("--contexts", type=int, default=50)
    fixture.add_argument("--dim", type=int, default=50)
    fixture.add_argument("--sigma", type=float, default=0.05)
    fixture.add_argument("--format", choices=_choices(ModelFormat), default=ModelFormat.TEXT.value)

    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Traduce los flags a claves de PipelineConfig; los ausentes no pisan nada."""
    overrides: Dict[str, Any] = {
        'seed': args.seed,
        'log_level': args.log_level,
        'n_jobs': args.jobs,
        'model_path': getattr(args, 'model', None),
        'model_format': getattr(args, 'model_format', None),
        'frequency_path': getattr(args, 'frequencies', None),
        'token_mode': getattr(args, 'token_mode', None),
        'bag_of_words': getattr(args, 'bag_of_words', None),
        'averaging': getattr(args, 'averaging', None),
        'strategy': getattr(args, 'strategy', None),
        'metric': getattr(args, 'metric', None),
        'dump_dir': getattr(args, 'dump_dir', None),
    }
    if args.log_text:
        overrides['log_json'] = False
    if getattr(args, 'weights', None) is not None:
        overrides['weight_scheme'] = {'kind': args.weights}

    ap = {
        key: value
        for key, value in (('preference', getattr(args, 'preference', None)), ('damping', getattr(args, 'damping', None)))
        if value is not None
    }
    if ap:
        overrides['ap'] = ap
    return overrides


def _with_gold(predictions: List[ContextRecord], gold_path: Path) -> List[ContextRecord]:
    gold = {record.context_id: record.gold_sense_id for record in read_dataset(gold_path)}
    merged = []
    for record in predictions:
        if record.context_id not in gold:
            raise DatasetFormatError(f"context_id {record.context_id} sin sentido gold", path=str(gold_path))
        merged.append(record.model_copy(update={'gold_sense_id': gold[record.context_id]}))
    return merged


def cmd_induce(args: argparse.Namespace, config: PipelineConfig) -> int:
    dataset = read_dataset(args.input)
    result = run_wsi(dataset, config)
    write_predictions(result, args.output)
    for word, records in group_by_word(result).items():
        k = len({record.predicted_sense_id for record in records})
        print(f"{word}\t{len(records)}\t{k}")
    return 0


def cmd_evaluate(args: argparse.Namespace, config: PipelineConfig) -> int:
    records = read_dataset(args.predictions)
    if args.gold is not None:
        records = _with_gold(records, args.gold)
    report = evaluate(records)
    if args.output is not None:
        args.output.write_text(report_to_json(report) + "\n", encoding='utf-8')
    print(report_to_json(report) if args.json else render_report_table(report))
    return 0


def cmd_gridsearch(args: argparse.Namespace, config: PipelineConfig) -> int:
    grid_values: Dict[str, Any] = {'objective': args.objective}
    if args.preferences is not None:
        grid_values['preferences'] = args.preferences
    if args.dampings is not None:
        grid_values['dampings'] = args.dampings
    try:
        grid = GridSpec(**grid_values)
    except ValidationError as e:
        raise ConfigurationError(f"Rejilla inválida: {e}") from e

    train = read_dataset(args.train)
    result = grid_search(train, config, grid)
    write_grid_csv(result, args.output)
    best = result.best
    print(
        f"best preference={best.preference:.4f} damping={best.damping:.4f} "
        f"{grid.objective.value}={best.score(grid.objective):.6f}"
    )
    return 0


def cmd_project(args: argparse.Namespace, config: PipelineConfig) -> int:
    dataset = read_dataset(args.input)
    if args.word is not None:
        dataset = [record for record in dataset if record.query_word == args.word]
        if not dataset:
            raise DatasetFormatError(f"La palabra '{args.word}' no aparece en el dataset", path=str(args.input))

    model = load_pipeline_model(config)
    fingerprints = prepare_fingerprints(dataset, model, config)
    records: List[ContextRecord] = []
    blocks: List[np.ndarray] = []
    for word, group in group_by_word(dataset).items():
        matrix = fingerprints[word].matrix
        # Cada palabra se proyecta sobre sus propios ejes
        blocks.append(project_2d(matrix, config.eigen_max_size) if len(group) >= 2 else np.zeros((len(group), 2)))
        records.extend(group)
    write_projection_csv(records, np.vstack(blocks), args.output)
    return 0


def cmd_inspect_model(args: argparse.Namespace, config: PipelineConfig) -> int:
    stats = model_stats(load_pipeline_model(config))
    if args.json:
        print(json.dumps(stats.model_dump(), ensure_ascii=False, indent=2))
        return 0
    print(f"vocab\t{stats.n_vocab}")
    print(f"dim\t{stats.dim}")
    print(f"frequency_coverage\t{stats.frequency_coverage:.4f}")
    for tag, count in stats.tag_counts.items():
        print(f"tag:{tag}\t{count}")
    return 0


def cmd_ablation(args: argparse.Namespace, config: PipelineConfig) -> int:
    reports = ablation(read_dataset(args.train), config)
    print("condition\tmacro_ari\tweighted_ari")
    for name, report in reports.items():
        print(f"{name}\t{report.aggregate_macro:.6f}\t{report.aggregate_weighted:.6f}")
    return 0


def cmd_make_fixture(args: argparse.Namespace, config: PipelineConfig) -> int:
    dataset = make_planted_dataset(
        n_senses=args.senses,
        n_contexts=args.contexts,
        dim=args.dim,
        sigma=args.sigma,
        seed=config.seed
    )
    paths = write_fixture(args.output_dir, dataset, ModelFormat(args.format))
    for name, path in paths.items():
        print(f"{name}\t{path}")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, PipelineConfig], int]] = {
    'induce': cmd_induce,
    'evaluate': cmd_evaluate,
    'gridsearch': cmd_gridsearch,
    'project': cmd_project,
    'inspect-model': cmd_inspect_model,
    'ablation': cmd_ablation,
    'make-fixture': cmd_make_fixture,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parsea argv, configura el logging y ejecuta el subcomando.

    Raises:
        UsageError: Argumentos inválidos
        WSIError: Errores de datos, modelo o configuración
    """
    args = build_parser().parse_args(argv)
    config = load_config(args.config, **_overrides(args))
    setup_logging(config.log_level, config.log_json)
    logger.debug(f"Subcomando {args.command}", extra={'strategy': config.strategy.value})
    status = COMMANDS[args.command](args, config)
    sys.stdout.flush()
    return status
