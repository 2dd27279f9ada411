"""Computable weak KAM theory for discrete holonomic measures."""

__version__ = "0.1.0"
