"""Epsilon-chain geometry on finite and one-dimensional metric spaces."""

__version__ = "0.1.0"
