"""Exhaustive enumeration of transversals and cyclic transversals."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from ctp.blocks import BlockConfiguration, Point
from ctp.errors import CapExceeded
from ctp.gf2 import BitVec
from ctp.settings import MAX_TRANSVERSALS

Transversal = tuple[BitVec, ...]


def is_valid_transversal(config: BlockConfiguration, xi: Sequence[BitVec]) -> bool:
    return len(xi) == config.length and all(config.contains(i, w) for i, w in enumerate(xi, start=1))


def is_cyclic(xi: Sequence[BitVec]) -> bool:
    """True iff the entries sum to the zero vector."""
    acc = 0
    for w in xi:
        acc ^= w.bits
    return acc == 0


def _estimate_ct_count(config: BlockConfiguration) -> int:
    prod = 1
    for block in config.blocks:
        prod *= len(block)
    return max(1, prod >> config.rank)


def cyclic_transversals(config: BlockConfiguration, cap: int = MAX_TRANSVERSALS) -> list[Transversal]:
    """All cyclic transversals, in lexicographic order of entry encodings.

    Depth-first product over the first n-1 blocks; the last entry is forced
    to the prefix sum and accepted via a membership lookup in the last block.
    """
    if _estimate_ct_count(config) > cap:
        raise CapExceeded(f"estimated cyclic transversal count exceeds cap {cap}")
    n = config.length
    last = {w.bits: w for w in config.blocks[-1]}
    result: list[Transversal] = []
    prefix: list[BitVec] = []

    def walk(i: int, acc: int) -> None:
        if i == n - 1:
            w = last.get(acc)
            if w is not None:
                result.append(tuple(prefix) + (w,))
                if len(result) > cap:
                    raise CapExceeded(f"cyclic transversal count exceeds cap {cap}")
            return
        for w in config.blocks[i]:
            prefix.append(w)
            walk(i + 1, acc ^ w.bits)
            prefix.pop()

    if n == 1:
        zero = BitVec.zero(config.d)
        return [(zero,)] if config.contains(1, zero) else []
    walk(0, 0)
    return result


def all_transversals(config: BlockConfiguration, cap: int = MAX_TRANSVERSALS) -> Iterator[Transversal]:
    """Every transversal (cyclic or not), lexicographically."""
    total = 1
    for block in config.blocks:
        total *= len(block)
    if total > cap:
        raise CapExceeded(f"transversal count {total} exceeds cap {cap}")
    return product(*config.blocks)


def incidence(xi: Sequence[BitVec], config: BlockConfiguration) -> Point:
    """The 0/1 incidence vector of a transversal (exactly one 1 per block)."""
    if not is_valid_transversal(config, xi):
        raise ValueError("not a transversal of the configuration")
    return {(i, w): Fraction(1) for i, w in enumerate(xi, start=1)}


def vertices(config: BlockConfiguration, cap: int = MAX_TRANSVERSALS) -> list[Point]:
    """Incidence vectors of all cyclic transversals, as exact rational points.

    These 0/1 points are precisely the vertices of the cyclic transversal
    polytope of the configuration.
    """
    return [incidence(xi, config) for xi in cyclic_transversals(config, cap=cap)]
