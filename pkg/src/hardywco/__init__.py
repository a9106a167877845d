"""Weighted composition operators with linear fractional symbols on the Hardy space H^2."""

__version__ = "0.1.0"
