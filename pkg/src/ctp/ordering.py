"""A total order across the mixed key shapes used for coordinates and LP variables."""

from __future__ import annotations

from fractions import Fraction


def canonical_sort_key(obj):
    """Deterministic sort key for ints, fractions, strings, bit vectors,
    and arbitrarily nested tuples of those."""
    if isinstance(obj, tuple):
        return (3, tuple(canonical_sort_key(o) for o in obj))
    if isinstance(obj, str):
        return (2, obj)
    if isinstance(obj, bool):
        return (0, Fraction(int(obj)))
    if isinstance(obj, (int, Fraction)):
        return (0, Fraction(obj))
    if hasattr(obj, "width") and hasattr(obj, "bits"):
        return (1, obj.width, obj.bits)
    return (4, repr(obj))
