"""Rank relaxations of cyclic transversal polytopes.

The relaxation for a linear map phi is the preimage, under the
phi-induced coordinate aggregation, of the CTP of the image
configuration; the rank-r relaxation intersects these over all maps of
rank r.  Image CTPs are carried around by their vertex lists, so
membership and validity become exact rational LPs: uniform for every r,
exponential in the ambient width, and intended for desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ctp.blocks import (
    BlockConfiguration,
    CoordIndex,
    Point,
    image_config,
    induced_map_apply,
    point_on_simplex,
)
from ctp.errors import CapExceeded
from ctp.gf2 import BitMatrix, BitVec, all_maps, apply, rref_rows
from ctp.inequalities import GE, LinEq, LinIneq, nonnegativity, transversal_equations
from ctp.lp import OPTIMAL, lp_solve
from ctp.polytopes import VPolytope, hull_membership, is_valid
from ctp.settings import MAX_MAPS, MAX_TRANSVERSALS
from ctp.transversals import vertices


@dataclass(frozen=True)
class PhiRelaxation:
    """A single-map relaxation, carrying the image CTP's vertex list."""

    base: BlockConfiguration
    phi: BitMatrix
    image: BlockConfiguration
    image_vertices: tuple[Point, ...]


def phi_relaxation(config: BlockConfiguration, phi: BitMatrix, cap: int = MAX_TRANSVERSALS) -> PhiRelaxation:
    image = image_config(phi, config)
    return PhiRelaxation(config, phi, image, tuple(vertices(image, cap=cap)))


def phi_membership(
    config: BlockConfiguration,
    phi: BitMatrix,
    x: Mapping[CoordIndex, Fraction],
    cap: int = MAX_TRANSVERSALS,
) -> bool:
    """Whether the aggregated point lies in the image configuration's CTP."""
    if not point_on_simplex(config, x):
        raise ValueError("point must satisfy the transversal equations and nonnegativity")
    relax = phi_relaxation(config, phi, cap=cap)
    mapped = induced_map_apply(phi, config, x)
    return hull_membership(mapped, VPolytope.of(relax.image_vertices))


def rank_maps(d: int, r: int, max_maps: int = MAX_MAPS) -> list[BitMatrix]:
    """Canonical representatives of the rank-r maps F_2^d -> F_2^r.

    Maps that differ by an invertible transformation of the target define
    the same relaxation, so one representative per row space suffices; the
    reduced-row-echelon matrix of the row space is used as that
    representative.
    """
    if not 1 <= r <= d:
        raise ValueError(f"rank {r} out of range [1, {d}]")
    if 1 << (r * d) > max_maps:
        raise CapExceeded(f"2^{r * d} maps exceed the cap {max_maps}")
    reps: dict[tuple[int, ...], BitMatrix] = {}
    for m in all_maps(d, r, require_rank=r):
        key = rref_rows(m)
        if key not in reps:
            reps[key] = BitMatrix(r, d, key)
    return [reps[key] for key in sorted(reps)]


def rank_r_membership(
    config: BlockConfiguration,
    r: int,
    x: Mapping[CoordIndex, Fraction],
    cap: int = MAX_TRANSVERSALS,
    max_maps: int = MAX_MAPS,
) -> bool:
    """Membership in the rank-r relaxation (r = 0 is the whole simplex)."""
    if r < 0:
        raise ValueError("rank must be nonnegative")
    if not point_on_simplex(config, x):
        raise ValueError("point must satisfy the transversal equations and nonnegativity")
    if r == 0:
        return True
    effective = min(r, config.d)
    for phi in rank_maps(config.d, effective, max_maps=max_maps):
        if not phi_membership(config, phi, x, cap=cap):
            return False
    return True


@dataclass(frozen=True)
class RankValidity:
    """Outcome of minimizing an inequality over a rank-r relaxation."""

    valid: bool
    optimum: Optional[Fraction]
    violator: Optional[Point]


def validity_over_rank_r(
    config: BlockConfiguration,
    r: int,
    ineq: LinIneq,
    cap: int = MAX_TRANSVERSALS,
    max_maps: int = MAX_MAPS,
) -> RankValidity:
    """Exact minimization of an inequality over the rank-r relaxation.

    Builds one LP over the simplex variables x plus, per rank-r map, convex
    multipliers for the image CTP's vertices linked to x through the
    induced aggregation, and compares the optimum with the right-hand side.
    """
    if r < 0:
        raise ValueError("rank must be nonnegative")
    g = ineq.as_ge()
    equations: list[LinEq] = list(transversal_equations(config))
    inequalities: list[LinIneq] = list(nonnegativity(config))

    effective = min(r, config.d) if r else 0
    if effective:
        for k, phi in enumerate(rank_maps(config.d, effective, max_maps=max_maps)):
            relax = phi_relaxation(config, phi, cap=cap)
            nverts = len(relax.image_vertices)
            if nverts == 0:
                # The image has no cyclic transversal, so the relaxation is empty.
                return RankValidity(True, None, None)
            lam = [("lam", k, j) for j in range(nverts)]
            equations.append(LinEq.of({key: Fraction(1) for key in lam}, 1))
            for coord in relax.image.coords:
                coeffs: dict = {}
                i, w_bar = coord
                for w in config.block(i):
                    if apply(phi, w) == w_bar:
                        coeffs[(i, w)] = coeffs.get((i, w), Fraction(0)) - 1
                for j, vert in enumerate(relax.image_vertices):
                    c = vert.get(coord)
                    if c:
                        coeffs[lam[j]] = c
                equations.append(LinEq.of(coeffs, 0))
            inequalities.extend(LinIneq.of({key: Fraction(1)}, 0) for key in lam)

    res = lp_solve(g.coeff_map(), equations, inequalities, sense="min")
    if res.status != OPTIMAL:
        raise RuntimeError(f"relaxation LP unexpectedly {res.status}")
    if res.value >= g.rhs:
        return RankValidity(True, res.value, None)
    violator = {key: v for key, v in res.point.items() if isinstance(key, tuple) and len(key) == 2 and config.contains(*key)}
    return RankValidity(False, res.value, violator)


@dataclass(frozen=True)
class CtRankResult:
    """Smallest r at which an inequality is valid over the rank-r relaxation.

    For positive rank, ``certificate`` is a point of the rank-(r-1)
    relaxation that violates the inequality.
    """

    rank: int
    certificate: Optional[Point]


def ct_rank(
    config: BlockConfiguration,
    ineq: LinIneq,
    cap: int = MAX_TRANSVERSALS,
    max_maps: int = MAX_MAPS,
) -> CtRankResult:
    """CT-rank of an inequality that is valid for the configuration's CTP."""
    verts = vertices(config, cap=cap)
    if not is_valid(ineq, verts).valid:
        raise ValueError("inequality is not valid for the cyclic transversal polytope")
    certificate: Optional[Point] = None
    for r in range(0, config.rank + 1):
        outcome = validity_over_rank_r(config, r, ineq, cap=cap, max_maps=max_maps)
        if outcome.valid:
            return CtRankResult(r, certificate)
        certificate = outcome.violator
    raise RuntimeError("inequality valid on vertices but not over the top relaxation")
