"""Worst-case amplitudes of stable linear recurrences via hook Schur polynomials."""

__version__ = "0.1.0"
