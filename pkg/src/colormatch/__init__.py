"""Matching decoders for the 4.8.8 color code and the mapped surface code."""

__version__ = "0.1.0"
