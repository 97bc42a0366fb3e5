"""Exact computations for abelian surfaces in smooth toric 4-folds of Picard number 2."""

__version__ = "0.1.0"
