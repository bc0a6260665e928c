"""Exact classical adversary bounds and sensitivity measures of partial functions."""

__version__ = "0.1.0"
