"""Frobenius invariants of positive-characteristic rings."""

__version__ = "0.1.0"
