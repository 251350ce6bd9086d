"""Utilidades y helpers."""
