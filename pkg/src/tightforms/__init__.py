"""Exact enumeration tools for tight T(n)-universal quadratic forms."""

__version__ = "0.1.0"
