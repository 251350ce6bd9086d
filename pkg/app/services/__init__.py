"""Servicios: carga de modelos, huellas, clustering, evaluación y pipeline."""
