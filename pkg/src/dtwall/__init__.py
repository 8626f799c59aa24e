"""Exact wall-crossing engine for simple C*-flips."""

__version__ = "0.1.0"
