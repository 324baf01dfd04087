"""Exact toolkit for resolving locally bounded rational functions on the plane."""

__version__ = "0.1.0"
