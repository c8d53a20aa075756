"""Exact computer algebra for Weil algebras of split double vector spaces."""

__version__ = "0.1.0"
