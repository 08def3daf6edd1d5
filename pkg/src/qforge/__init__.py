"""Exact computations with quantum groups, Verma modules, framed algebras and crystals."""

__version__ = "0.1.0"
