"""Linear constraints over CTP coordinate spaces and lifted odd-set machinery.

A lifted odd-set (LOS) inequality is indexed by a nonzero vector ``eta``
and an odd subset I of block indices: it puts coefficient 1 on coordinate
``(i, omega)`` iff ``i in I`` and ``eta . omega = 0``, or ``i not in I``
and ``eta . omega = 1``, with right-hand side 1.  Every cyclic transversal
satisfies it: the entries sum to zero, so an even number of them are odd
against ``eta``, and some block then lands on a unit coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

from ctp.blocks import BlockConfiguration, CoordIndex, Point, image_config, point_on_simplex
from ctp.errors import CapExceeded
from ctp.gf2 import BitMatrix, BitVec, apply, dot
from ctp.ordering import canonical_sort_key
from ctp.settings import MAX_WIDTH

Coeffs = Mapping[CoordIndex, Fraction]

GE = ">="
LE = "<="


def _normalize_coeffs(coeffs: Coeffs) -> tuple[tuple[CoordIndex, Fraction], ...]:
    items = [(k, Fraction(v)) for k, v in coeffs.items() if v]
    items.sort(key=lambda kv: canonical_sort_key(kv[0]))
    return tuple(items)


@dataclass(frozen=True)
class LinIneq:
    """An exact-rational linear inequality; only nonzero coefficients are stored."""

    coeffs: tuple[tuple[CoordIndex, Fraction], ...]
    rhs: Fraction
    sense: str = GE

    def __post_init__(self) -> None:
        if self.sense not in (GE, LE):
            raise ValueError(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "coeffs", _normalize_coeffs(dict(self.coeffs)))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @staticmethod
    def of(coeffs: Coeffs, rhs: Fraction | int, sense: str = GE) -> LinIneq:
        return LinIneq(tuple(coeffs.items()), Fraction(rhs), sense)

    def coeff_map(self) -> dict[CoordIndex, Fraction]:
        return dict(self.coeffs)

    def as_ge(self) -> LinIneq:
        """The same half-space written with sense >=."""
        if self.sense == GE:
            return self
        return LinIneq(tuple((k, -v) for k, v in self.coeffs), -self.rhs, GE)


@dataclass(frozen=True)
class LinEq:
    """An exact-rational linear equation."""

    coeffs: tuple[tuple[CoordIndex, Fraction], ...]
    rhs: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _normalize_coeffs(dict(self.coeffs)))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @staticmethod
    def of(coeffs: Coeffs, rhs: Fraction | int) -> LinEq:
        return LinEq(tuple(coeffs.items()), Fraction(rhs))

    def coeff_map(self) -> dict[CoordIndex, Fraction]:
        return dict(self.coeffs)


@dataclass(frozen=True)
class LosSpec:
    """Index pair of a lifted odd-set inequality: nonzero eta and odd set I."""

    eta: BitVec
    odd_set: frozenset[int]

    def __post_init__(self) -> None:
        if self.eta.is_zero():
            raise ValueError("eta must be nonzero")
        object.__setattr__(self, "odd_set", frozenset(self.odd_set))
        if len(self.odd_set) % 2 == 0:
            raise ValueError("the block subset must have odd cardinality")


class Evaluation(NamedTuple):
    """Left-hand value of a constraint at a point, with its slack lhs - rhs."""

    lhs: Fraction
    slack: Fraction


def transversal_equations(config: BlockConfiguration) -> list[LinEq]:
    """One equation per block: its coordinates sum to one."""
    return [
        LinEq.of({(i, w): Fraction(1) for w in block}, 1)
        for i, block in enumerate(config.blocks, start=1)
    ]


def nonnegativity(config: BlockConfiguration) -> list[LinIneq]:
    """One inequality x >= 0 per coordinate."""
    return [LinIneq.of({key: Fraction(1)}, 0) for key in config.coords]


def los(config: BlockConfiguration, spec: LosSpec) -> LinIneq:
    """The lifted odd-set inequality of a configuration for (eta, I)."""
    if spec.eta.width != config.d:
        raise ValueError(f"eta width {spec.eta.width} != ambient width {config.d}")
    if not spec.odd_set <= set(range(1, config.length + 1)):
        raise ValueError("odd set contains invalid block indices")
    coeffs: dict[CoordIndex, Fraction] = {}
    for i, block in enumerate(config.blocks, start=1):
        want = 0 if i in spec.odd_set else 1
        for w in block:
            if dot(spec.eta, w) == want:
                coeffs[(i, w)] = Fraction(1)
    return LinIneq.of(coeffs, 1)


def odd_subsets(n: int) -> list[frozenset[int]]:
    """All odd-cardinality subsets of [n], in ascending bitmask order."""
    out = []
    for mask in range(1, 1 << n):
        if mask.bit_count() & 1:
            out.append(frozenset(i + 1 for i in range(n) if (mask >> i) & 1))
    return out


def _eta_candidates(config: BlockConfiguration, eta_in_span: bool) -> list[BitVec]:
    if eta_in_span:
        return sorted(w for w in config.span if not w.is_zero())
    return [BitVec(config.d, bits) for bits in range(1, 1 << config.d)]


def all_los(
    config: BlockConfiguration,
    eta_in_span: bool = False,
    max_width: int = MAX_WIDTH,
) -> list[tuple[LosSpec, LinIneq]]:
    """All LOS inequalities, deduplicated by their coefficient vectors.

    Distinct (eta, I) pairs can restrict to the same inequality on a
    non-full configuration; the first spec in generation order (ascending
    eta encoding, then ascending odd-set bitmask) is kept as representative.
    """
    if config.d > max_width:
        raise CapExceeded(f"2^{config.d} eta candidates exceed the width guard {max_width}")
    seen: set[tuple[tuple[tuple[CoordIndex, Fraction], ...], Fraction]] = set()
    out: list[tuple[LosSpec, LinIneq]] = []
    subsets = odd_subsets(config.length)
    for eta in _eta_candidates(config, eta_in_span):
        for odd in subsets:
            spec = LosSpec(eta, odd)
            ineq = los(config, spec)
            key = (ineq.coeffs, ineq.rhs)
            if key in seen:
                continue
            seen.add(key)
            out.append((spec, ineq))
    return out


def lift(phi: BitMatrix, config: BlockConfiguration, ineq: LinIneq) -> LinIneq:
    """Pull an inequality over the phi-image back to the configuration.

    Coordinate (i, omega) receives the coefficient of (i, phi(omega)); the
    right-hand side is unchanged.  Evaluating the lift at x equals
    evaluating the input at the phi-aggregated point.
    """
    image = image_config(phi, config)
    source = ineq.coeff_map()
    for key in source:
        if not image.contains(*key):
            raise ValueError(f"inequality key {key} is not a coordinate of the image configuration")
    coeffs: dict[CoordIndex, Fraction] = {}
    for i, block in enumerate(config.blocks, start=1):
        for w in block:
            c = source.get((i, apply(phi, w)))
            if c:
                coeffs[(i, w)] = c
    return LinIneq.of(coeffs, ineq.rhs, ineq.sense)


@dataclass(frozen=True)
class LiftClass:
    """Result of classifying the lift of a LOS inequality.

    ``kind`` is "los" when the composite form is nonzero (then ``spec`` holds
    the new index pair), and "tp_valid" when it vanishes (the lift is then
    the inequality "sum of all coordinates of the odd blocks >= 1", valid on
    the whole transversal polytope).  ``ineq`` is the lifted inequality in
    both cases.
    """

    kind: str
    spec: Optional[LosSpec]
    ineq: LinIneq


def classify_lifting(phi: BitMatrix, config: BlockConfiguration, spec: LosSpec) -> LiftClass:
    """Classify the lift of the LOS inequality of the phi-image for ``spec``."""
    if spec.eta.width != phi.rows:
        raise ValueError("spec eta width does not match the map's target width")
    eta = apply(phi.transpose(), spec.eta)
    if eta.is_zero():
        coeffs = {
            (i, w): Fraction(1)
            for i in spec.odd_set
            for w in config.block(i)
        }
        return LiftClass("tp_valid", None, LinIneq.of(coeffs, 1))
    new_spec = LosSpec(eta, spec.odd_set)
    return LiftClass("los", new_spec, los(config, new_spec))


def shift_ineq(sigma: Sequence[BitVec], config: BlockConfiguration, ineq: LinIneq) -> LinIneq:
    """Transport an inequality along a cyclic shift of the configuration.

    The coefficient of (i, omega + sigma(i)) in the result equals the
    coefficient of (i, omega) in the input, so validity transfers between
    the polytopes of the configuration and its shift.
    """
    from ctp.blocks import is_cyclic_sequence

    if len(sigma) != config.length:
        raise ValueError("shift length mismatch")
    if not is_cyclic_sequence(sigma):
        raise ValueError("shift sequence is not cyclic")
    coeffs = {(i, w + sigma[i - 1]): c for (i, w), c in ineq.coeffs}
    return LinIneq.of(coeffs, ineq.rhs, ineq.sense)


def evaluate(
    ineq: LinIneq | LinEq,
    x: Mapping[CoordIndex, Fraction],
    config: Optional[BlockConfiguration] = None,
) -> Evaluation:
    """Exact left-hand value and slack of a constraint at a point."""
    if config is not None:
        for key in x:
            if not config.contains(*key):
                raise ValueError(f"point key {key} is not a coordinate of the configuration")
        for key, _ in ineq.coeffs:
            if not config.contains(*key):
                raise ValueError(f"constraint key {key} is not a coordinate of the configuration")
    lhs = sum((c * x[k] for k, c in ineq.coeffs if k in x), Fraction(0))
    return Evaluation(lhs, lhs - ineq.rhs)


def satisfies(ineq: LinIneq | LinEq, x: Mapping[CoordIndex, Fraction]) -> bool:
    ev = evaluate(ineq, x)
    if isinstance(ineq, LinEq):
        return ev.slack == 0
    return ev.slack >= 0 if ineq.sense == GE else ev.slack <= 0


def los_lhs(config: BlockConfiguration, eta: BitVec, odd_set: frozenset[int], x: Mapping[CoordIndex, Fraction]) -> Fraction:
    """Left-hand value of the LOS inequality for (eta, odd_set) at x."""
    return evaluate(los(config, LosSpec(eta, odd_set)), x).lhs


def separate_los_fixed_eta(
    config: BlockConfiguration,
    eta: BitVec,
    x: Mapping[CoordIndex, Fraction],
) -> Optional[LosSpec]:
    """Most violated LOS inequality for a fixed eta, if one exists.

    For each block, ``a_i`` is the mass on elements orthogonal to eta and
    ``b_i`` the mass on the others; the left-hand side for an odd set I is
    the sum of ``a_i`` over I plus ``b_i`` outside I.  The unconstrained
    minimizer picks i iff ``a_i < b_i``; if that set is even, flipping the
    block with the smallest gap |a_i - b_i| (ties at the smallest index)
    gives the exact minimum over all odd sets.  Returns the spec iff its
    left-hand side is below one.
    """
    if eta.is_zero():
        raise ValueError("eta must be nonzero")
    if eta.width != config.d:
        raise ValueError("eta width mismatch")
    if not point_on_simplex(config, x):
        raise ValueError("point must satisfy the transversal equations and nonnegativity")
    a: list[Fraction] = []
    b: list[Fraction] = []
    for i, block in enumerate(config.blocks, start=1):
        even_mass = sum((x.get((i, w), Fraction(0)) for w in block if dot(eta, w) == 0), Fraction(0))
        odd_mass = sum((x.get((i, w), Fraction(0)) for w in block if dot(eta, w) == 1), Fraction(0))
        a.append(even_mass)
        b.append(odd_mass)
    chosen = {i + 1 for i in range(config.length) if a[i] < b[i]}
    if len(chosen) % 2 == 0:
        flip = min(range(1, config.length + 1), key=lambda i: (abs(a[i - 1] - b[i - 1]), i))
        chosen ^= {flip}
    lhs = sum((a[i - 1] if i in chosen else b[i - 1] for i in range(1, config.length + 1)), Fraction(0))
    if lhs < 1:
        return LosSpec(eta, frozenset(chosen))
    return None


def separate_los(
    config: BlockConfiguration,
    x: Mapping[CoordIndex, Fraction],
    eta_in_span: bool = False,
    max_width: int = MAX_WIDTH,
) -> Optional[tuple[LosSpec, Fraction]]:
    """Most violated LOS inequality over all nonzero eta, with its violation.

    Loops eta over F_2^d minus zero (or the configuration's span with
    ``eta_in_span``); returns the spec attaining the smallest left-hand
    side, with violation ``1 - lhs``, or None if no LOS is violated.
    """
    if config.d > max_width:
        raise CapExceeded(f"2^{config.d} eta candidates exceed the width guard {max_width}")
    if not point_on_simplex(config, x):
        raise ValueError("point must satisfy the transversal equations and nonnegativity")
    best: Optional[tuple[LosSpec, Fraction]] = None
    for eta in _eta_candidates(config, eta_in_span):
        spec = separate_los_fixed_eta(config, eta, x)
        if spec is None:
            continue
        lhs = los_lhs(config, spec.eta, spec.odd_set, x)
        violation = 1 - lhs
        if best is None or violation > best[1]:
            best = (spec, violation)
    return best
