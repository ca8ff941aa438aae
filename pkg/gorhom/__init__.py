"""Exact homological algebra over finite-dimensional algebras and integral group rings."""
__version__ = "0.1.0"
