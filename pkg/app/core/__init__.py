"""Módulo de configuración y componentes centrales."""
