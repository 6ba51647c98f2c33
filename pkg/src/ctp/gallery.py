"""Named example polytopes, witness points, and the desk-scale test corpus."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Optional

from ctp.blocks import BlockConfiguration, Point, full, product_config, shift
from ctp.gf2 import BitMatrix, BitVec
from ctp.inequalities import LE, LinIneq
from ctp.reductions import (
    Graph,
    SatFormula,
    bsp_config,
    cut_config,
    from_sat,
    matching_config,
    perfect_matching_config,
    simplex_config,
    stable_set_config,
)


def _basis_vectors(d: int) -> tuple[BitVec, BitVec, BitVec, BitVec, BitVec]:
    zero = BitVec.zero(d)
    e1 = BitVec.unit(d, 1)
    e2 = BitVec.unit(d, 2)
    e3 = BitVec.unit(d, 3)
    e123 = BitVec(d, e1.bits | e2.bits | e3.bits)
    return zero, e1, e2, e3, e123


def los_gap_point(d: int, n: int) -> Point:
    """A point of the full configuration's simplex that satisfies every LOS
    inequality yet lies outside the cyclic transversal polytope (d, n >= 3)."""
    if d < 3 or n < 3:
        raise ValueError("the construction needs width and length at least 3")
    zero, e1, e2, e3, e123 = _basis_vectors(d)
    point: Point = {
        (1, zero): Fraction(1, 3),
        (1, e123): Fraction(2, 3),
        (2, zero): Fraction(1, 3),
        (3, zero): Fraction(1, 3),
    }
    for i in (2, 3):
        for w in (e1, e2, e3, e123):
            point[(i, w)] = Fraction(1, 6)
    for i in range(4, n + 1):
        point[(i, zero)] = Fraction(1)
    return point


def basis_exclusion_ieq(d: int, n: int) -> LinIneq:
    """A valid inequality of CT-rank three for the full configuration.

    It bounds by n-1 the number of blocks hitting the pattern "block 1 on
    the triple-one vector, blocks 2 and 3 on a basis vector or zero, the
    rest on zero", which no cyclic transversal attains in full.
    """
    if d < 3 or n < 3:
        raise ValueError("the construction needs width and length at least 3")
    zero, e1, e2, e3, e123 = _basis_vectors(d)
    coeffs: dict = {(1, e123): Fraction(1)}
    for i in (2, 3):
        for w in (zero, e1, e2, e3):
            coeffs[(i, w)] = Fraction(1)
    for i in range(4, n + 1):
        coeffs[(i, zero)] = Fraction(1)
    return LinIneq.of(coeffs, n - 1, LE)


def k_complete(q: int) -> Graph:
    return Graph(q, tuple((u, v) for u in range(1, q + 1) for v in range(u + 1, q + 1)))


def path_graph(q: int) -> Graph:
    return Graph(q, tuple((v, v + 1) for v in range(1, q)))


def cycle_graph(q: int) -> Graph:
    return Graph(q, tuple((v, v + 1) for v in range(1, q)) + ((1, q),))


def tour_edges(order: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    edges = []
    for a, b in zip(order, order[1:] + order[:1]):
        edges.append((min(a, b), max(a, b)))
    return frozenset(edges)


def tsp5_vertices() -> list[dict]:
    """The 12 tours of the complete graph on five nodes, as edge indicators."""
    tours: set[frozenset[tuple[int, int]]] = set()
    for perm in permutations(range(2, 6)):
        tours.add(tour_edges((1,) + perm))
    assert len(tours) == 12
    points = [{e: Fraction(1) for e in sorted(t)} for t in tours]
    points.sort(key=lambda p: tuple(sorted(p)))
    return points


def tsp5_disjoint_tour_pair() -> tuple[dict, dict]:
    """Two tours partitioning the edge set of the complete 5-node graph."""
    a = {e: Fraction(1) for e in sorted(tour_edges((1, 2, 3, 4, 5)))}
    b = {e: Fraction(1) for e in sorted(tour_edges((1, 3, 5, 2, 4)))}
    return a, b


def u24_basis_vertices() -> list[dict]:
    """Basis polytope of the rank-2 uniform matroid on four elements."""
    points = []
    for i in range(1, 5):
        for j in range(i + 1, 5):
            points.append({i: Fraction(1), j: Fraction(1)})
    return points


def corpus() -> list[tuple[str, BlockConfiguration]]:
    """Named desk-scale configurations exercised across the test suite."""
    b01 = [BitVec.from_text("0"), BitVec.from_text("1")]
    simplex3 = simplex_config([BitVec.from_text("00"), BitVec.from_text("10"), BitVec.from_text("01")])
    cube2 = product_config(simplex_config(b01), simplex_config(b01))
    mk3 = matching_config(k_complete(3)).config
    # A cyclic transversal of mk3 (the single-edge matching on nodes 1, 2).
    shift_seq = [mk3.block(1)[1], mk3.block(2)[1], BitVec.zero(mk3.d)]
    assert shift_seq[0] == shift_seq[1]
    entries: list[tuple[str, BlockConfiguration]] = [
        ("full-1-3", full(1, 3)),
        ("full-1-4", full(1, 4)),
        ("full-1-5", full(1, 5)),
        ("full-2-3", full(2, 3)),
        ("full-2-4", full(2, 4)),
        ("full-3-3", full(3, 3)),
        ("simplex-3", simplex3),
        ("cube-2", cube2),
        ("product-parity-simplex", product_config(full(1, 3), simplex3)),
        ("matching-k3", mk3),
        ("matching-k4", matching_config(k_complete(4)).config),
        ("perfect-matching-k4", perfect_matching_config(k_complete(4)).config),
        ("perfect-matching-k3", perfect_matching_config(k_complete(3)).config),
        ("stable-p3", stable_set_config(path_graph(3)).config),
        ("stable-c5", stable_set_config(cycle_graph(5)).config),
        ("cut-k3", cut_config(k_complete(3)).config),
        ("cut-c4", cut_config(cycle_graph(4)).config),
        ("parity-bsp-3", bsp_config(BitMatrix.from_entries([[1, 1, 1]])).config),
        ("sat-2cnf", from_sat(SatFormula.of(3, [[-1, -2], [1, 3]]), 2).config),
        ("shifted-matching-k3", shift(mk3, shift_seq)),
    ]
    return entries
