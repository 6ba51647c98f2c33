"""Shared exception types."""

from __future__ import annotations


class CapExceeded(RuntimeError):
    """An enumeration or construction would exceed a configured resource cap."""
