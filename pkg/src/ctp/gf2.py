"""Exact linear algebra over the two-element field.

Vectors are integer bitsets with an explicit width: coordinate j (1-based)
is the bit of value ``2**(j-1)``, so the canonical integer encoding is
little-endian in the coordinates.  The text form reverses nothing: the
string ``"110"`` has coordinate 1 and 2 set.  All values are immutable and
hashable, and every operation is pure, so the types are safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from ctp.settings import MAX_WIDTH


@dataclass(frozen=True, order=True)
class BitVec:
    """A vector in F_2^width, encoded as an integer bitset."""

    width: int
    bits: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits {self.bits} out of range for width {self.width}")

    @staticmethod
    def from_text(text: str) -> BitVec:
        """Parse the text form: character k (1-based) is coordinate k."""
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"not a bitstring: {text!r}")
        bits = 0
        for k, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << k
        return BitVec(len(text), bits)

    def to_text(self) -> str:
        return "".join("1" if (self.bits >> k) & 1 else "0" for k in range(self.width))

    @staticmethod
    def zero(width: int) -> BitVec:
        return BitVec(width, 0)

    @staticmethod
    def ones(width: int) -> BitVec:
        return BitVec(width, (1 << width) - 1)

    @staticmethod
    def unit(width: int, j: int) -> BitVec:
        """The j-th standard basis vector (j is 1-based)."""
        if not 1 <= j <= width:
            raise ValueError(f"coordinate {j} out of range [1, {width}]")
        return BitVec(width, 1 << (j - 1))

    def coord(self, j: int) -> int:
        """Coordinate j (1-based) as 0 or 1."""
        if not 1 <= j <= self.width:
            raise ValueError(f"coordinate {j} out of range [1, {self.width}]")
        return (self.bits >> (j - 1)) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def __add__(self, other: BitVec) -> BitVec:
        return add(self, other)

    def __repr__(self) -> str:
        return f"BitVec({self.to_text()!r})"


def _check_same_width(a: BitVec, b: BitVec) -> None:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")


def add(a: BitVec, b: BitVec) -> BitVec:
    """Component-wise sum over F_2 (XOR)."""
    _check_same_width(a, b)
    return BitVec(a.width, a.bits ^ b.bits)


def dot(a: BitVec, b: BitVec) -> int:
    """The bilinear form a^T b over F_2."""
    _check_same_width(a, b)
    return (a.bits & b.bits).bit_count() & 1


def _echelon_pivots(bit_rows: Iterable[int]) -> dict[int, int]:
    """Pivot map low-bit -> row of an F_2 row echelon basis."""
    pivots: dict[int, int] = {}
    for v in bit_rows:
        while v:
            low = v & -v
            if low not in pivots:
                pivots[low] = v
                break
            v ^= pivots[low]
    return pivots


def rank(vectors: Sequence[BitVec]) -> int:
    """Dimension of the F_2-span of the given vectors (0 for an empty list)."""
    if not vectors:
        return 0
    width = vectors[0].width
    for v in vectors:
        if v.width != width:
            raise ValueError("width mismatch in rank computation")
    return len(_echelon_pivots(v.bits for v in vectors))


def span(vectors: Sequence[BitVec]) -> set[BitVec]:
    """All 2^rank elements of the F_2-span, including the zero vector."""
    if not vectors:
        raise ValueError("span of an empty list has no defined width")
    width = vectors[0].width
    for v in vectors:
        if v.width != width:
            raise ValueError("width mismatch in span computation")
    basis = _echelon_pivots(v.bits for v in vectors).values()
    acc = {0}
    for b in basis:
        acc |= {a ^ b for a in acc}
    return {BitVec(width, bits) for bits in acc}


def span_with_width(vectors: Sequence[BitVec], width: int) -> set[BitVec]:
    """Like :func:`span` but usable for an empty list, given the width."""
    if not vectors:
        return {BitVec.zero(width)}
    return span(vectors)


@dataclass(frozen=True)
class BitMatrix:
    """An r x d matrix over F_2, stored as one integer bitset per row."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0:
            raise ValueError(f"rows must be >= 0, got {self.rows}")
        if self.cols < 1:
            raise ValueError(f"cols must be >= 1, got {self.cols}")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match row data")
        limit = 1 << self.cols
        if any(not 0 <= r < limit for r in self.row_bits):
            raise ValueError("row bits out of range for column count")

    @staticmethod
    def from_entries(entries: Sequence[Sequence[int]], cols: Optional[int] = None) -> BitMatrix:
        rows = len(entries)
        if rows == 0:
            if cols is None:
                raise ValueError("cannot infer column count of an empty matrix")
            return BitMatrix(0, cols, ())
        width = len(entries[0])
        if cols is not None and cols != width:
            raise ValueError("explicit column count disagrees with entries")
        bits = []
        for row in entries:
            if len(row) != width:
                raise ValueError("ragged rows")
            bits.append(sum((1 << j) for j, e in enumerate(row) if e & 1))
        return BitMatrix(rows, width, tuple(bits))

    @staticmethod
    def from_rows(rows: Sequence[BitVec]) -> BitMatrix:
        if not rows:
            raise ValueError("cannot infer column count of an empty matrix")
        width = rows[0].width
        if any(r.width != width for r in rows):
            raise ValueError("width mismatch among rows")
        return BitMatrix(len(rows), width, tuple(r.bits for r in rows))

    @staticmethod
    def identity(d: int) -> BitMatrix:
        return BitMatrix(d, d, tuple(1 << i for i in range(d)))

    @staticmethod
    def zero(rows: int, cols: int) -> BitMatrix:
        return BitMatrix(rows, cols, (0,) * rows)

    def row(self, i: int) -> BitVec:
        """Row i (1-based) as a width-cols vector."""
        return BitVec(self.cols, self.row_bits[i - 1])

    def column(self, j: int) -> BitVec:
        """Column j (1-based) as a width-rows vector."""
        if self.rows == 0:
            raise ValueError("matrix has no rows")
        bits = 0
        for i, r in enumerate(self.row_bits):
            if (r >> (j - 1)) & 1:
                bits |= 1 << i
        return BitVec(self.rows, bits)

    def columns(self) -> list[BitVec]:
        return [self.column(j) for j in range(1, self.cols + 1)]

    def transpose(self) -> BitMatrix:
        if self.rows == 0:
            raise ValueError("transpose of a matrix with zero rows has no columns")
        new_rows = []
        for j in range(self.cols):
            bits = 0
            for i, r in enumerate(self.row_bits):
                if (r >> j) & 1:
                    bits |= 1 << i
            new_rows.append(bits)
        return BitMatrix(self.cols, self.rows, tuple(new_rows))

    def rank(self) -> int:
        return len(_echelon_pivots(self.row_bits))

    def __repr__(self) -> str:
        rows = ",".join(self.row(i).to_text() for i in range(1, self.rows + 1))
        return f"BitMatrix[{rows}]"


def apply(m: BitMatrix, v: BitVec) -> BitVec:
    """The matrix-vector product m v over F_2."""
    if m.cols != v.width:
        raise ValueError(f"dimension mismatch: matrix has {m.cols} columns, vector width {v.width}")
    if m.rows == 0:
        raise ValueError("cannot apply a matrix with zero rows (no target width)")
    bits = 0
    for i, r in enumerate(m.row_bits):
        if (r & v.bits).bit_count() & 1:
            bits |= 1 << i
    return BitVec(m.rows, bits)


def all_maps(d: int, r: int, require_rank: Optional[int] = None, max_width: int = MAX_WIDTH) -> Iterator[BitMatrix]:
    """Enumerate every r x d matrix over F_2 exactly once, in ascending code order.

    With ``require_rank`` set, only matrices of exactly that rank are yielded.
    """
    if d < 1 or r < 1:
        raise ValueError("d and r must be >= 1")
    if r * d > max_width * 2:
        # 2^(r*d) matrices; refuse absurd enumerations early.
        raise ValueError(f"refusing to enumerate 2^{r * d} matrices")
    mask = (1 << d) - 1
    for code in range(1 << (r * d)):
        row_bits = tuple((code >> (i * d)) & mask for i in range(r))
        m = BitMatrix(r, d, row_bits)
        if require_rank is not None and m.rank() != require_rank:
            continue
        yield m


def kernel_basis(m: BitMatrix) -> list[BitVec]:
    """A basis of {v : m v = 0}, of size cols - rank(m)."""
    # Reduced row echelon form, tracking pivot columns (0-based).
    pivots: list[tuple[int, int]] = []  # (pivot column, row bits)
    for v in m.row_bits:
        for col, p in pivots:
            if (v >> col) & 1:
                v ^= p
        if v:
            col = (v & -v).bit_length() - 1
            for k, (c, p) in enumerate(pivots):
                if (p >> col) & 1:
                    pivots[k] = (c, p ^ v)
            pivots.append((col, v))
            pivots.sort()
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for col in range(m.cols):
        if col in pivot_cols:
            continue
        bits = 1 << col
        for c, p in pivots:
            if (p >> col) & 1:
                bits |= 1 << c
        basis.append(BitVec(m.cols, bits))
    return basis


def rref_rows(m: BitMatrix) -> tuple[int, ...]:
    """The nonzero rows of the reduced row echelon form, sorted.

    Two matrices have the same row space iff their ``rref_rows`` agree, so
    the result is a canonical key for the row space.
    """
    pivots: list[tuple[int, int]] = []
    for v in m.row_bits:
        for col, p in pivots:
            if (v >> col) & 1:
                v ^= p
        if v:
            col = (v & -v).bit_length() - 1
            for k, (c, p) in enumerate(pivots):
                if (p >> col) & 1:
                    pivots[k] = (c, p ^ v)
            pivots.append((col, v))
            pivots.sort()
    return tuple(p for _, p in pivots)
