"""Reacting multicomponent compressible flow on periodic grids."""

__version__ = "0.1.0"
