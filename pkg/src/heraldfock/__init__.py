"""Heralded superpositions of up to three photons from a two-mode squeezed vacuum."""

__version__ = "0.1.0"
