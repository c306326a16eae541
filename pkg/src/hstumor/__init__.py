"""Density-model simulations of tumour growth and their free-boundary limits."""

__version__ = "0.1.0"
