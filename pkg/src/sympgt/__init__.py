"""Toolkit for symplectic Gelfand-Tsetlin patterns: exact characters,
branching polynomials, Berele insertion, intertwined Markov dynamics,
spectral law computations and scaling limits."""

__version__ = "0.1.0"
