"""
Utilidades sobre etiquetas de clustering.
"""

from typing import Dict, Hashable, List, Sequence  # Tipos de datos


def canonicalize_labels(labels: Sequence[Hashable]) -> List[int]:
    """
    Renumera las etiquetas en orden de primera aparición.

    Dos particiones iguales quedan idénticas byte a byte.

    Args:
        labels: Etiquetas arbitrarias (hashables)

    Returns:
        Etiquetas enteras 0..k-1
    """
    mapping: Dict[Hashable, int] = {}
    canonical = []
    for label in labels:
        if label not in mapping:
            mapping[label] = len(mapping)
        canonical.append(mapping[label])
    return canonical
