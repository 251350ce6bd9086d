"""Modelos de dominio (pydantic y contenedores numpy)."""
