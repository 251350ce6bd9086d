"""
Configuración de tests para pytest.
Define fixtures comunes: modelos diminutos, tablas de frecuencias, datasets y datos sintéticos.
"""

import logging  # Handlers del logger raíz
import os  # Variables de entorno
import struct  # Para escribir modelos binarios a mano
import pytest  # Framework de testing
import numpy as np  # Álgebra lineal
from app.core.config import PipelineConfig  # Configuración del pipeline
from app.models.clustering import Strategy  # Estrategias de clustering
from app.models.embedding import EmbeddingModel  # Modelo de embeddings
from app.services.synthetic import make_planted_dataset  # Datos sintéticos


TSV_HEADER = "context_id\tword\tgold_sense_id\tpredicted_sense_id\tpositions\tcontext\n"


def pytest_configure(config):
    """Registra el marcador de los tests con datos RUSSE reales."""
    config.addinivalue_line("markers", "integration: requiere el modelo y los datos RUSSE descargados")


@pytest.fixture(autouse=True)
def clean_wsi_env(monkeypatch):
    """Evita que variables WSI_* del entorno alteren los tests."""
    for key in list(os.environ):
        if key.upper().startswith("WSI_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture(autouse=True)
def restore_root_logger():
    """setup_logging reemplaza los handlers del logger raíz; se restauran tras cada test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def tiny_vocab():
    """Vocabulario etiquetado de juguete."""
    return ["замок_NOUN", "дверь_NOUN", "ключ_NOUN", "король_NOUN", "башня_NOUN", "и_CCONJ"]


@pytest.fixture
def tiny_vectors():
    """Vectores 6 × 3: dos grupos y un token funcional."""
    return np.array([
        [0.0, 0.0, 1.0],
        [1.0, 0.1, 0.0],
        [0.9, 0.2, 0.0],
        [0.0, 1.0, 0.1],
        [0.1, 0.9, 0.0],
        [0.5, 0.5, 0.5],
    ], dtype=np.float32)


@pytest.fixture
def tiny_frequencies():
    """Frecuencias globales: el token funcional es el más frecuente."""
    return {
        "замок_NOUN": 300,
        "дверь_NOUN": 100,
        "ключ_NOUN": 100,
        "король_NOUN": 50,
        "башня_NOUN": 20,
        "и_CCONJ": 10000,
    }


@pytest.fixture
def tiny_model(tiny_vocab, tiny_vectors, tiny_frequencies):
    """Modelo diminuto con tabla de frecuencias."""
    return EmbeddingModel(tiny_vocab, tiny_vectors, tiny_frequencies)


@pytest.fixture
def text_model_file(tmp_path, tiny_vocab, tiny_vectors):
    """Modelo en formato word2vec de texto."""
    path = tmp_path / "model.txt"
    lines = [f"{len(tiny_vocab)} {tiny_vectors.shape[1]}"]
    for token, row in zip(tiny_vocab, tiny_vectors):
        lines.append(token + " " + " ".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def binary_model_file(tmp_path, tiny_vocab, tiny_vectors):
    """Modelo en formato word2vec binario con '\\n' tras cada vector."""
    path = tmp_path / "model.bin"
    data = f"{len(tiny_vocab)} {tiny_vectors.shape[1]}\n".encode("ascii")
    for token, row in zip(tiny_vocab, tiny_vectors):
        data += token.encode("utf-8") + b" " + struct.pack("<3f", *row) + b"\n"
    path.write_bytes(data)
    return path


@pytest.fixture
def frequency_file(tmp_path, tiny_frequencies):
    """Archivo token<TAB>frecuencia."""
    path = tmp_path / "frequencies.tsv"
    path.write_text("".join(f"{t}\t{c}\n" for t, c in tiny_frequencies.items()), encoding="utf-8")
    return path


@pytest.fixture
def write_tsv(tmp_path):
    """Escribe un TSV con la cabecera estándar y devuelve su ruta."""
    def _write(rows, name="dataset.tsv", header=TSV_HEADER):
        path = tmp_path / name
        path.write_text(header + "".join("\t".join(row) + "\n" for row in rows), encoding="utf-8")
        return path
    return _write


@pytest.fixture
def sample_rows():
    """Filas de dos palabras consultadas."""
    return [
        ["1", "замок_NOUN", "1", "", "0-9", "замок_NOUN дверь_NOUN ключ_NOUN"],
        ["2", "замок_NOUN", "2", "", "0-9", "замок_NOUN король_NOUN башня_NOUN"],
        ["3", "ключ_NOUN", "1", "", "11-19", "дверь_NOUN ключ_NOUN и_CCONJ"],
        ["4", "замок_NOUN", "1", "", "11-20", "дверь_NOUN замок_NOUN ключ_NOUN"],
    ]


@pytest.fixture
def sample_dataset_file(write_tsv, sample_rows):
    """Dataset TSV de ejemplo."""
    return write_tsv(sample_rows)


@pytest.fixture(scope="session")
def planted_two_senses():
    """Palabra homónima sintética: 2 sentidos, 50 contextos, dim 50, σ=0.05."""
    return make_planted_dataset(n_senses=2, n_contexts=50, dim=50, sigma=0.05, seed=42)


@pytest.fixture(scope="session")
def planted_four_senses():
    """Palabra polisémica sintética: 4 sentidos, 50 contextos, dim 50, σ=0.05."""
    return make_planted_dataset(n_senses=4, n_contexts=50, dim=50, sigma=0.05, seed=7, word="лук_NOUN")


@pytest.fixture
def direct_config():
    """Configuración ap-direct con los valores por defecto."""
    return PipelineConfig(strategy=Strategy.AP_DIRECT)


@pytest.fixture
def two_stage_config():
    """Configuración ap-then-kmeans."""
    return PipelineConfig(strategy=Strategy.AP_THEN_KMEANS)
