"""Publicly verifiable privacy-preserving aggregate statistics."""

__version__ = "0.1.0"
