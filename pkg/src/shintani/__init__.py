"""Exact verification toolkit for Shintani cone pairings and trigonometric
Milnor symbols over GL_n(Q)."""

__version__ = "0.1.0"
