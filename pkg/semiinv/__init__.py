"""Exact construction, verification and decomposition of semi-invariants of Jordan matrices."""

__version__ = "1.0.0"
