"""Shalika-model p-adic L-function toolkit."""

__version__ = "0.1.0"
