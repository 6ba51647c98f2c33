"""Block configurations and their structural operations.

A block configuration is an ordered sequence of non-empty subsets
("blocks") of F_2^d.  Its coordinate space is indexed by pairs
``(i, omega)`` with ``omega`` a member of block i; the canonical order is
ascending block index, then ascending integer encoding of the element.
Points over that space are sparse dicts mapping coordinate pairs to exact
rationals, with absent keys meaning zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ctp.gf2 import BitMatrix, BitVec, add, apply, rank, span_with_width
from ctp.settings import MAX_WIDTH

# Coordinate index: (1-based block index, block element).
CoordIndex = tuple[int, BitVec]
# Rational point over a configuration's coordinate space; missing keys are 0.
Point = dict[CoordIndex, Fraction]


@dataclass(frozen=True)
class BlockConfiguration:
    """An ordered family of non-empty subsets of F_2^d."""

    d: int
    blocks: tuple[tuple[BitVec, ...], ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"ambient width must be >= 1, got {self.d}")
        if len(self.blocks) == 0:
            raise ValueError("a configuration needs at least one block")
        canonical = []
        for i, block in enumerate(self.blocks, start=1):
            elems = sorted(set(block))
            if not elems:
                raise ValueError(f"block {i} is empty")
            for w in elems:
                if w.width != self.d:
                    raise ValueError(f"block {i} element width {w.width} != ambient width {self.d}")
            canonical.append(tuple(elems))
        object.__setattr__(self, "blocks", tuple(canonical))

    @property
    def length(self) -> int:
        return len(self.blocks)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @cached_property
    def span(self) -> frozenset[BitVec]:
        union = [w for block in self.blocks for w in block]
        return frozenset(span_with_width(union, self.d))

    @cached_property
    def rank(self) -> int:
        return rank([w for block in self.blocks for w in block])

    @cached_property
    def coords(self) -> tuple[CoordIndex, ...]:
        return tuple((i, w) for i, block in enumerate(self.blocks, start=1) for w in block)

    @cached_property
    def _membership(self) -> tuple[frozenset[BitVec], ...]:
        return tuple(frozenset(b) for b in self.blocks)

    def block(self, i: int) -> tuple[BitVec, ...]:
        """Block i (1-based)."""
        if not 1 <= i <= self.length:
            raise ValueError(f"block index {i} out of range [1, {self.length}]")
        return self.blocks[i - 1]

    def contains(self, i: int, w: BitVec) -> bool:
        return 1 <= i <= self.length and w in self._membership[i - 1]

    def __repr__(self) -> str:
        parts = ["{" + ",".join(w.to_text() for w in b) + "}" for b in self.blocks]
        return f"BlockConfiguration(d={self.d}, {'; '.join(parts)})"


def new_config(d: int, blocks: Iterable[Iterable[BitVec]]) -> BlockConfiguration:
    """Validate and build a configuration from sets of vectors."""
    return BlockConfiguration(d, tuple(tuple(b) for b in blocks))


def full(d: int, n: int, max_width: int = MAX_WIDTH) -> BlockConfiguration:
    """The configuration of length n with every block equal to F_2^d."""
    if d > max_width:
        raise ValueError(f"width {d} exceeds the enumeration guard {max_width}")
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    block = tuple(BitVec(d, bits) for bits in range(1 << d))
    return BlockConfiguration(d, (block,) * n)


def is_cyclic_sequence(sigma: Sequence[BitVec]) -> bool:
    """True iff the entries sum to the zero vector."""
    acc = 0
    for s in sigma:
        acc ^= s.bits
    return acc == 0


def shift(config: BlockConfiguration, sigma: Sequence[BitVec], check_cyclic: bool = True) -> BlockConfiguration:
    """Translate block i by sigma(i).

    A cyclic sigma preserves the cyclic-transversal structure; the check can
    be disabled for experiments with non-cyclic translations.
    """
    if len(sigma) != config.length:
        raise ValueError(f"shift length {len(sigma)} != configuration length {config.length}")
    for s in sigma:
        if s.width != config.d:
            raise ValueError("shift entry width mismatch")
    if check_cyclic and not is_cyclic_sequence(sigma):
        raise ValueError("shift sequence is not cyclic (entries do not sum to zero)")
    shifted = tuple(tuple(add(w, s) for w in block) for block, s in zip(config.blocks, sigma))
    return BlockConfiguration(config.d, shifted)


def image_config(phi: BitMatrix, config: BlockConfiguration) -> BlockConfiguration:
    """Apply a linear map to every block element; duplicate images collapse."""
    if phi.cols != config.d:
        raise ValueError(f"map expects width {phi.cols}, configuration has width {config.d}")
    blocks = tuple(tuple({apply(phi, w) for w in block}) for block in config.blocks)
    return BlockConfiguration(phi.rows, blocks)


def induced_map_apply(phi: BitMatrix, config: BlockConfiguration, x: Mapping[CoordIndex, Fraction]) -> Point:
    """Aggregate a point along a linear map: sum coordinates with equal image.

    The result is indexed by the coordinates of ``image_config(phi, config)``
    and is linear and nonnegativity-preserving in ``x``.
    """
    _check_point_keys(config, x)
    out: Point = {}
    for (i, w), value in x.items():
        if not value:
            continue
        key = (i, apply(phi, w))
        out[key] = out.get(key, Fraction(0)) + value
    return {k: v for k, v in out.items() if v}


def embed_into_full(config: BlockConfiguration, x: Mapping[CoordIndex, Fraction]) -> Point:
    """Zero-fill a point into the coordinate space of ``full(d, n)``."""
    _check_point_keys(config, x)
    return {k: Fraction(v) for k, v in x.items() if v}


def restrict_to_config(config: BlockConfiguration, x: Mapping[CoordIndex, Fraction]) -> Point:
    """Drop coordinates outside the configuration (the coordinate projection)."""
    return {k: Fraction(v) for k, v in x.items() if v and config.contains(*k)}


def product_config(config1: BlockConfiguration, config2: BlockConfiguration) -> BlockConfiguration:
    """Concatenate two configurations on independent coordinate ranges.

    Blocks of the first are padded with zeros in the new high coordinates,
    blocks of the second are shifted there, so length, size, and rank add up
    and cyclic transversals factor into independent halves.
    """
    d = config1.d + config2.d
    blocks = []
    for block in config1.blocks:
        blocks.append(tuple(BitVec(d, w.bits) for w in block))
    for block in config2.blocks:
        blocks.append(tuple(BitVec(d, w.bits << config1.d) for w in block))
    return BlockConfiguration(d, tuple(blocks))


def _check_point_keys(config: BlockConfiguration, x: Mapping[CoordIndex, Fraction]) -> None:
    for key in x:
        if not config.contains(*key):
            raise ValueError(f"point key {key} is not a coordinate of the configuration")


def point_on_simplex(config: BlockConfiguration, x: Mapping[CoordIndex, Fraction]) -> bool:
    """True iff x is nonnegative and each block's coordinates sum to one."""
    _check_point_keys(config, x)
    if any(v < 0 for v in x.values()):
        return False
    for i, block in enumerate(config.blocks, start=1):
        if sum(x.get((i, w), Fraction(0)) for w in block) != 1:
            return False
    return True
