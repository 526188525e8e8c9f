"""Finite nearfield planes, their unitals, and certification tools."""

__version__ = "0.1.0"
