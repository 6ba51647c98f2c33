"""Exact rational polyhedral computations.

Everything here works over ``fractions.Fraction``: affine dimension,
validity and facet certification against vertex lists, double-description
vertex enumeration from equation/inequality descriptions, hull membership,
smallest-face supports, and the vertex-pair necessary condition for cyclic
transversal polytopes.  There is no floating point anywhere in this
module, so all comparisons are exact identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Hashable, Mapping, Optional, Sequence

from ctp.errors import CapExceeded
from ctp.inequalities import GE, LE, LinEq, LinIneq, evaluate
from ctp.lp import OPTIMAL, LpResult, canonical_sort_key, lp_solve
from ctp.settings import MAX_DD_RAYS

Key = Hashable
PointLike = Mapping[Key, Fraction]


@dataclass(frozen=True)
class HPolytope:
    """A polytope given by equations and inequalities."""

    equations: tuple[LinEq, ...]
    inequalities: tuple[LinIneq, ...]

    @staticmethod
    def of(equations: Sequence[LinEq], inequalities: Sequence[LinIneq]) -> HPolytope:
        return HPolytope(tuple(equations), tuple(inequalities))


@dataclass(frozen=True)
class VPolytope:
    """A polytope given by its vertex list (empty tuple = empty polytope)."""

    vertices: tuple[dict, ...]

    @staticmethod
    def of(vertices: Sequence[PointLike]) -> VPolytope:
        return VPolytope(tuple({k: Fraction(v) for k, v in p.items() if v} for p in vertices))


def _vertex_list(V) -> list[dict]:
    if isinstance(V, VPolytope):
        return list(V.vertices)
    return [{k: Fraction(v) for k, v in p.items() if v} for p in V]


def _key_union(points: Sequence[PointLike]) -> list[Key]:
    keys: set[Key] = set()
    for p in points:
        keys.update(p)
    return sorted(keys, key=canonical_sort_key)


def as_vector(point: PointLike, keys: Sequence[Key]) -> tuple[Fraction, ...]:
    return tuple(Fraction(point.get(k, 0)) for k in keys)


def affine_dim(points: Sequence[PointLike]) -> int:
    """Dimension of the affine hull; -1 for the empty set by convention."""
    pts = list(points)
    if not pts:
        return -1
    keys = _key_union(pts)
    base = as_vector(pts[0], keys)
    rows = [[v - b for v, b in zip(as_vector(p, keys), base)] for p in pts[1:]]
    return rational_rank(rows)


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    work = [list(map(Fraction, row)) for row in rows if any(row)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        work[rank] = prow = [v * inv for v in prow]
        for r in range(len(work)):
            if r != rank:
                f = work[r][col]
                if f:
                    work[r] = [a - f * b for a, b in zip(work[r], prow)]
        rank += 1
        if rank == len(work):
            break
    return rank


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of checking an inequality against a vertex list."""

    valid: bool
    worst_value: Optional[Fraction]
    worst_vertex: Optional[dict]


def is_valid(ineq: LinIneq, V) -> ValidityReport:
    """Check validity on every vertex; reports the worst violator."""
    vertices = _vertex_list(V)
    if not vertices:
        return ValidityReport(True, None, None)
    worst = None
    worst_vertex = None
    for v in vertices:
        lhs = evaluate(ineq, v).lhs
        if worst is None or (lhs < worst if ineq.sense == GE else lhs > worst):
            worst = lhs
            worst_vertex = v
    valid = worst >= ineq.rhs if ineq.sense == GE else worst <= ineq.rhs
    return ValidityReport(valid, worst, worst_vertex)


def is_facet(ineq: LinIneq, V) -> bool:
    """True iff the valid inequality is tight on a facet of conv(V)."""
    vertices = _vertex_list(V)
    report = is_valid(ineq, vertices)
    if not report.valid:
        raise ValueError("inequality is not valid for the polytope")
    tight = [v for v in vertices if evaluate(ineq, v).lhs == ineq.rhs]
    return affine_dim(tight) == affine_dim(vertices) - 1


def _solve_affine(
    equations: Sequence[LinEq], keys: Sequence[Key]
) -> Optional[tuple[list[Fraction], list[list[Fraction]]]]:
    """Particular solution and nullspace basis of the equation system.

    Returns None when the system is inconsistent.  The nullspace basis is
    returned as columns, i.e. a list of independent direction vectors.
    """
    ncols = len(keys)
    index = {k: j for j, k in enumerate(keys)}
    work: list[list[Fraction]] = []
    for eq in equations:
        row = [Fraction(0)] * (ncols + 1)
        for k, c in eq.coeffs:
            row[index[k]] = c
        row[ncols] = eq.rhs
        work.append(row)

    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        work[rank] = prow = [v * inv for v in prow]
        for r in range(len(work)):
            if r != rank:
                f = work[r][col]
                if f:
                    work[r] = [a - f * b for a, b in zip(work[r], prow)]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    for r in range(rank, len(work)):
        if work[r][ncols] != 0:
            return None

    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = work[r][ncols]
    free_cols = [c for c in range(ncols) if c not in set(pivots)]
    basis: list[list[Fraction]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -work[r][fc]
        basis.append(vec)
    return particular, basis


def _integerize(row: Sequence[Fraction]) -> tuple[int, ...]:
    denom = 1
    for v in row:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _gcd_reduce(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g > 1:
        vec = [v // g for v in vec]
    return tuple(vec)


def _dd_extreme_rays(
    rows: Sequence[tuple[int, ...]], dim: int, cap: int, full_dim: bool = False
) -> list[tuple[int, ...]]:
    """Extreme rays of {z : row . z >= 0 for all rows} by double description.

    Maintains a lineality basis plus extreme rays with tight-row bitmasks;
    adjacency uses the combinatorial subset test, which is exact for the
    pointed quotients arising here.  With ``full_dim`` (caller certifies the
    cone is full-dimensional) candidate pairs whose common tight set is too
    small for a 2-face are skipped before the subset test.  Raises if
    lineality survives all rows (the input then describes an unpointed cone).
    """
    lines: list[tuple[int, ...]] = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[tuple[int, ...], int]] = []
    processed_mask = 0

    def dot(h: Sequence[int], v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(h, v) if a and b)

    for idx, h in enumerate(rows):
        bit = 1 << idx
        line_vals = [dot(h, l) for l in lines]
        pivot = next((k for k, val in enumerate(line_vals) if val), None)
        if pivot is not None:
            a = line_vals[pivot]
            ell = lines[pivot]
            new_lines = []
            for k, l in enumerate(lines):
                if k == pivot:
                    continue
                val = line_vals[k]
                if val:
                    l = _gcd_reduce([a * x - val * y for x, y in zip(l, ell)])
                new_lines.append(tuple(l))
            lines = new_lines
            new_rays: list[tuple[tuple[int, ...], int]] = []
            for vec, z in rays:
                val = dot(h, vec)
                if val:
                    if a > 0:
                        vec = _gcd_reduce([a * x - val * y for x, y in zip(vec, ell)])
                    else:
                        vec = _gcd_reduce([-a * x + val * y for x, y in zip(vec, ell)])
                new_rays.append((tuple(vec), z | bit))
            star = ell if a > 0 else tuple(-x for x in ell)
            new_rays.append((_gcd_reduce(list(star)), processed_mask))
            rays = new_rays
        else:
            vals = [dot(h, vec) for vec, _ in rays]
            plus = [k for k, v in enumerate(vals) if v > 0]
            minus = [k for k, v in enumerate(vals) if v < 0]
            keep: list[tuple[tuple[int, ...], int]] = []
            for k, (vec, z) in enumerate(rays):
                if vals[k] > 0:
                    keep.append((vec, z))
                elif vals[k] == 0:
                    keep.append((vec, z | bit))
            if minus and plus:
                zmasks = [z for _, z in rays]
                need = (dim - len(lines)) - 2 if full_dim else -1
                for kp in plus:
                    zp = zmasks[kp]
                    for km in minus:
                        zm = zmasks[km]
                        common = zp & zm
                        if common.bit_count() < need:
                            continue
                        blocked = False
                        for k, z in enumerate(zmasks):
                            if k != kp and k != km and (common & z) == common:
                                blocked = True
                                break
                        if blocked:
                            continue
                        vp, vm = vals[kp], vals[km]
                        vecp, vecm = rays[kp][0], rays[km][0]
                        vec = _gcd_reduce([vp * bm - vm * bp for bp, bm in zip(vecp, vecm)])
                        keep.append((vec, common | bit))
            rays = keep
        processed_mask |= bit
        if len(rays) > cap:
            raise CapExceeded(f"double description exceeded the ray cap {cap}")

    if lines:
        raise ValueError("constraint system leaves free directions (unpointed cone)")
    return [vec for vec, _ in rays]


def _dd_row_order(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Deterministic insertion order: rows tight at few generators first.

    The proxy for the tight-count estimate is (number of nonzero
    coefficients, lexicographic value): sparse bound-like rows tend to be
    tight at few intermediate generators and keep the ray counts low, so
    they are inserted first.
    """
    return sorted(rows, key=lambda r: (sum(1 for v in r if v), r))


def _has_strict_interior(t_rows: list[tuple[list[Fraction], Fraction]], k: int) -> bool:
    """LP certificate that {t : g.t >= rhs} is full-dimensional.

    Maximizes a common slack u over all rows; a positive (or unbounded)
    optimum certifies a strictly interior point, which makes the rank-based
    adjacency prefilter of the double description run sound.
    """
    if k == 0:
        return False
    inequalities = [LinIneq.of({("u",): Fraction(1)}, 0)]
    for idx, (g, rhs) in enumerate(t_rows):
        coeffs: dict = {("t", j): c for j, c in enumerate(g) if c}
        coeffs[("u",)] = Fraction(-1)
        inequalities.append(LinIneq.of(coeffs, rhs))
    res = lp_solve({("u",): Fraction(1)}, (), inequalities, sense="max")
    if res.status == "unbounded":
        return True
    return res.status == OPTIMAL and res.value > 0


def dd_vertices(H: HPolytope, cap: int = MAX_DD_RAYS) -> VPolytope:
    """Vertices of a bounded polytope from its equation/inequality description.

    Equations are eliminated by an exact affine parametrization, the
    inequality system is homogenized, and the double description method
    enumerates the extreme rays; rays in the hyperplane at infinity make
    the call fail, since callers guarantee boundedness.
    """
    keys: set[Key] = set()
    for eq in H.equations:
        keys.update(k for k, _ in eq.coeffs)
    for ineq in H.inequalities:
        keys.update(k for k, _ in ineq.coeffs)
    ordered = sorted(keys, key=canonical_sort_key)

    solved = _solve_affine(H.equations, ordered)
    if solved is None:
        return VPolytope(())
    particular, basis = solved
    k = len(basis)
    index = {key: j for j, key in enumerate(ordered)}

    ge_rows: list[tuple[list[Fraction], Fraction]] = []
    for ineq in H.inequalities:
        g = ineq.as_ge()
        row = [Fraction(0)] * len(ordered)
        for key, c in g.coeffs:
            row[index[key]] = c
        ge_rows.append((row, g.rhs))

    if k == 0:
        ok = all(
            sum((c * particular[j] for j, c in enumerate(row) if c), Fraction(0)) >= rhs
            for row, rhs in ge_rows
        )
        if not ok:
            return VPolytope(())
        point = {key: particular[j] for key, j in index.items() if particular[j]}
        return VPolytope((point,))

    hom_rows: list[tuple[int, ...]] = []
    t_rows: list[tuple[list[Fraction], Fraction]] = []
    for row, rhs in ge_rows:
        shifted = sum((c * particular[j] for j, c in enumerate(row) if c), Fraction(0)) - rhs
        reduced = [
            sum((row[j] * vec[j] for j in range(len(ordered)) if row[j] and vec[j]), Fraction(0))
            for vec in basis
        ]
        t_rows.append((reduced, -shifted))
        hom_rows.append(_integerize(reduced + [shifted]))
    hom_rows.append(tuple([0] * k + [1]))

    unique_rows = _dd_row_order(list(set(hom_rows)))
    rays = _dd_extreme_rays(unique_rows, k + 1, cap, full_dim=_has_strict_interior(t_rows, k))

    vertices: list[dict] = []
    seen: set[tuple[Fraction, ...]] = set()
    has_infinite = False
    for vec in rays:
        s = vec[k]
        if s == 0:
            has_infinite = True
            continue
        t = [Fraction(v, s) for v in vec[:k]]
        coords = list(particular)
        for j, tj in enumerate(t):
            if tj:
                for pos in range(len(ordered)):
                    if basis[j][pos]:
                        coords[pos] += tj * basis[j][pos]
        vec_tuple = tuple(coords)
        if vec_tuple in seen:
            continue
        seen.add(vec_tuple)
        vertices.append({key: coords[j] for key, j in index.items() if coords[j]})
    if has_infinite and vertices:
        raise ValueError("polyhedron is unbounded; dd_vertices requires a bounded input")
    vertices.sort(key=lambda p: as_vector(p, ordered))
    return VPolytope(tuple(vertices))


def hull_membership(x: PointLike, V) -> bool:
    """Exact test whether x is a convex combination of the vertices."""
    vertices = _vertex_list(V)
    if not vertices:
        return False
    keys = _key_union(vertices + [dict(x)])
    equations = [
        LinEq.of({("lam", w): Fraction(1) for w in range(len(vertices))}, 1)
    ]
    for key in keys:
        coeffs = {
            ("lam", w): vertices[w].get(key, Fraction(0))
            for w in range(len(vertices))
            if vertices[w].get(key)
        }
        equations.append(LinEq.of(coeffs, Fraction(x.get(key, 0))))
    bounds = [LinIneq.of({("lam", w): Fraction(1)}, 0) for w in range(len(vertices))]
    return lp_solve({}, equations, bounds).status == OPTIMAL


def smallest_face_support(z: PointLike, V) -> set[int]:
    """Vertex indices spanning the smallest face of conv(V) containing z.

    A vertex index w belongs to the support iff some convex representation
    of z gives it positive weight; z lies in the relative interior of
    conv(V) iff the support is the full index set.
    """
    vertices = _vertex_list(V)
    keys = _key_union(vertices + [dict(z)])
    equations = [
        LinEq.of({("lam", w): Fraction(1) for w in range(len(vertices))}, 1)
    ]
    for key in keys:
        coeffs = {
            ("lam", w): vertices[w].get(key, Fraction(0))
            for w in range(len(vertices))
            if vertices[w].get(key)
        }
        equations.append(LinEq.of(coeffs, Fraction(z.get(key, 0))))
    bounds = [LinIneq.of({("lam", w): Fraction(1)}, 0) for w in range(len(vertices))]

    first = lp_solve({}, equations, bounds)
    if first.status != OPTIMAL:
        raise ValueError("point is outside the hull")
    support = {w for w in range(len(vertices)) if first.point.get(("lam", w))}
    for w in range(len(vertices)):
        if w in support:
            continue
        res = lp_solve({("lam", w): Fraction(1)}, equations, bounds, sense="max")
        if res.status == OPTIMAL and res.value > 0:
            support.add(w)
    return support


@dataclass(frozen=True)
class NecessaryConditionReport:
    """Outcome of the vertex-pair test; a failure certifies non-CTP-ness."""

    passed: bool
    vacuous: bool
    witness: Optional[tuple[int, int]]


def ctp_necessary_condition(V, cap: int = 10**6) -> NecessaryConditionReport:
    """Check: unless |V| is a power of two, every vertex pair must lie in a
    proper face.  A failing pair certifies that conv(V) is not a cyclic
    transversal polytope."""
    vertices = _vertex_list(V)
    count = len(vertices)
    if count and count & (count - 1) == 0:
        return NecessaryConditionReport(True, True, None)
    if count * count > cap:
        raise CapExceeded("too many vertex pairs")
    all_indices = set(range(count))
    for i in range(count):
        for j in range(i + 1, count):
            mid = {}
            for key in set(vertices[i]) | set(vertices[j]):
                mid[key] = (vertices[i].get(key, Fraction(0)) + vertices[j].get(key, Fraction(0))) / 2
            if smallest_face_support(mid, vertices) == all_indices:
                return NecessaryConditionReport(False, False, (i, j))
    return NecessaryConditionReport(True, False, None)


@dataclass(frozen=True)
class PolytopeEqualReport:
    """Outcome of comparing a vertex list against an H-description."""

    equal: bool
    missing: Optional[dict]  # vertex of conv(V) not found by the H-description
    extra: Optional[dict]  # vertex of the H-description outside the list


def polytope_equal(V, H: HPolytope, cap: int = MAX_DD_RAYS) -> PolytopeEqualReport:
    """Exact equality test: the H-description's vertex set versus V."""
    vertices = _vertex_list(V)
    computed = _vertex_list(dd_vertices(H, cap=cap))
    keys = _key_union(vertices + computed)
    want = {as_vector(p, keys): p for p in vertices}
    got = {as_vector(p, keys): p for p in computed}
    missing = sorted(set(want) - set(got))
    extra = sorted(set(got) - set(want))
    return PolytopeEqualReport(
        not missing and not extra,
        want[missing[0]] if missing else None,
        got[extra[0]] if extra else None,
    )
