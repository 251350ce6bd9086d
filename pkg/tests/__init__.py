"""Tests del microservicio."""
