"""Numerics for low-lying zeros of Hilbert modular L-functions."""

__version__ = "0.1.0"
