"""
Toolkit de inducción de sentidos por huellas semánticas
Agrupa contextos de palabras ambiguas promediando embeddings y aplicando Affinity Propagation.
"""

__version__ = "1.0.0"
