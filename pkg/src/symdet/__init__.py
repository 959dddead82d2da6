"""Workbench for symmetric determinantal presentations of surfaces in P^3."""
__version__ = "0.1.0"
