"""Exact rational linear programming.

A dense two-phase simplex over ``fractions.Fraction`` with Bland's
smallest-index anti-cycling rule: deterministic, terminating, and free of
tolerances.  Constraint systems are given as equations and >=-inequalities
whose coefficient vectors are keyed by arbitrary (sortable) hashables;
singleton rows ``c * x >= 0`` with ``c > 0`` are recognized as
nonnegativity markers and become variable bounds, all other variables are
treated as free.  Every optimal solve is certified internally by an exact
complementary-slackness check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Optional, Sequence

from ctp.inequalities import GE, LinEq, LinIneq
from ctp.ordering import canonical_sort_key

Key = Hashable

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[dict] = None


def lp_solve(
    objective: Mapping[Key, Fraction],
    equations: Sequence[LinEq] = (),
    inequalities: Sequence[LinIneq] = (),
    sense: str = "min",
    check: bool = True,
) -> LpResult:
    """Optimize an exact rational linear program.

    Returns an optimal basic solution, or the infeasible/unbounded status.
    The result is deterministic given the input order.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"unknown sense {sense!r}")

    ge_rows: list[tuple[dict, Fraction]] = []
    for ineq in inequalities:
        g = ineq.as_ge()
        ge_rows.append((g.coeff_map(), g.rhs))

    nonneg: set[Key] = set()
    general_rows: list[tuple[dict, Fraction]] = []
    for coeffs, rhs in ge_rows:
        if rhs == 0 and len(coeffs) == 1:
            (key, c), = coeffs.items()
            if c > 0:
                nonneg.add(key)
                continue
        general_rows.append((coeffs, rhs))

    keys: set[Key] = set(objective)
    for eq in equations:
        keys.update(k for k, _ in eq.coeffs)
    for coeffs, _ in ge_rows:
        keys.update(coeffs)
    ordered_keys = sorted(keys, key=canonical_sort_key)

    # Column layout: one column per nonnegative variable, a (plus, minus)
    # pair per free variable, then one surplus column per general >= row.
    col_of: dict[Key, tuple[int, Optional[int]]] = {}
    ncols = 0
    for key in ordered_keys:
        if key in nonneg:
            col_of[key] = (ncols, None)
            ncols += 1
        else:
            col_of[key] = (ncols, ncols + 1)
            ncols += 2
    surplus_base = ncols
    ncols += len(general_rows)

    rows: list[list[Fraction]] = []
    rhs_vec: list[Fraction] = []

    def expand(coeffs: Mapping[Key, Fraction]) -> list[Fraction]:
        row = [Fraction(0)] * ncols
        for key, c in coeffs.items():
            plus, minus = col_of[key]
            row[plus] = c
            if minus is not None:
                row[minus] = -c
        return row

    for eq in equations:
        rows.append(expand(eq.coeff_map()))
        rhs_vec.append(eq.rhs)
    for idx, (coeffs, rhs) in enumerate(general_rows):
        row = expand(coeffs)
        row[surplus_base + idx] = Fraction(-1)
        rows.append(row)
        rhs_vec.append(rhs)

    cost = [Fraction(0)] * ncols
    flip = -1 if sense == "max" else 1
    for key, c in objective.items():
        plus, minus = col_of[key]
        cost[plus] += flip * Fraction(c)
        if minus is not None:
            cost[minus] -= flip * Fraction(c)

    status, xvec, value = _simplex_two_phase(rows, rhs_vec, cost, check=check)
    if status != OPTIMAL:
        return LpResult(status)

    point: dict = {}
    for key in ordered_keys:
        plus, minus = col_of[key]
        v = xvec[plus] - (xvec[minus] if minus is not None else Fraction(0))
        if v:
            point[key] = v
    value = flip * value

    if check:
        for eq in equations:
            assert sum((c * point.get(k, Fraction(0)) for k, c in eq.coeffs), Fraction(0)) == eq.rhs
        for coeffs, rhs in ge_rows:
            assert sum((c * point.get(k, Fraction(0)) for k, c in coeffs.items()), Fraction(0)) >= rhs
    return LpResult(OPTIMAL, value, point)


def lp_feasible(equations: Sequence[LinEq] = (), inequalities: Sequence[LinIneq] = ()) -> Optional[dict]:
    """A feasible point of the system, or None."""
    res = lp_solve({}, equations, inequalities)
    return res.point if res.status == OPTIMAL else None


def _simplex_two_phase(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    cost: list[Fraction],
    check: bool = True,
) -> tuple[str, list[Fraction], Fraction]:
    """min cost.x  s.t.  rows.x = rhs, x >= 0 (dense exact simplex)."""
    m = len(rows)
    n = len(cost)
    zero = Fraction(0)
    one = Fraction(1)

    T: list[list[Fraction]] = []
    for i in range(m):
        row = list(rows[i])
        if rhs[i] < 0:
            row = [-v for v in row]
            b = -rhs[i]
        else:
            b = rhs[i]
        art = [zero] * m
        art[i] = one
        T.append(row + art + [b])
    total = n + m
    basis = [n + i for i in range(m)]

    # Phase 1: minimize the sum of artificials (cost 1 on columns n..n+m-1).
    zrow = [zero] * (total + 1)
    for j in range(total + 1):
        s = zero
        for i in range(m):
            s += T[i][j]
        zrow[j] = -s
    for j in range(n, total):
        zrow[j] += one

    eligible = total
    _bland_iterate(T, zrow, basis, eligible)
    phase1_value = -zrow[total]
    if phase1_value != 0:
        return INFEASIBLE, [], zero

    # Drive artificials out of the basis; rows that cannot pivot are redundant.
    deleted: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            pc = next((j for j in range(n) if T[i][j] != 0), None)
            if pc is None:
                deleted.append(i)
            else:
                _pivot(T, zrow, basis, i, pc)
    for i in sorted(deleted, reverse=True):
        del T[i]
        del basis[i]

    # Phase 2 over the original cost; artificial columns stay but may not enter.
    zrow = [zero] * (total + 1)
    for j in range(total + 1):
        s = zero
        for i, row in enumerate(T):
            cb = cost[basis[i]] if basis[i] < n else zero
            if cb:
                s += cb * row[j]
        zrow[j] = (cost[j] if j < n else zero) - s

    status = _bland_iterate(T, zrow, basis, n)
    if status == UNBOUNDED:
        return UNBOUNDED, [], zero

    x = [zero] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = T[i][total]
    value = sum((cost[j] * x[j] for j in range(n) if x[j]), zero)

    if check:
        _check_certificate(rows, rhs, cost, T, zrow, basis, x, value, n, m, deleted)
    return OPTIMAL, x, value


def _bland_iterate(T: list[list[Fraction]], zrow: list[Fraction], basis: list[int], eligible: int) -> str:
    """Pivot until optimal (returns "optimal") or unbounded."""
    mrows = len(T)
    last = len(zrow) - 1
    while True:
        pc = next((j for j in range(eligible) if zrow[j] < 0), None)
        if pc is None:
            return OPTIMAL
        pr = -1
        best = None
        for i in range(mrows):
            a = T[i][pc]
            if a > 0:
                t = T[i][last] / a
                if best is None or t < best or (t == best and basis[i] < basis[pr]):
                    best = t
                    pr = i
        if pr < 0:
            return UNBOUNDED
        _pivot(T, zrow, basis, pr, pc)


def _pivot(T: list[list[Fraction]], zrow: list[Fraction], basis: list[int], pr: int, pc: int) -> None:
    prow = T[pr]
    piv = prow[pc]
    if piv != 1:
        T[pr] = prow = [v / piv for v in prow]
    for i, row in enumerate(T):
        if i != pr:
            f = row[pc]
            if f:
                T[i] = [a - f * b for a, b in zip(row, prow)]
    f = zrow[pc]
    if f:
        zrow[:] = [a - f * b for a, b in zip(zrow, prow)]
    basis[pr] = pc


def _check_certificate(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    cost: list[Fraction],
    T: list[list[Fraction]],
    zrow: list[Fraction],
    basis: list[int],
    x: list[Fraction],
    value: Fraction,
    n: int,
    m: int,
    deleted: list[int],
) -> None:
    """Exact optimality certificate: feasibility, dual feasibility on the
    surviving rows, complementary slackness, and strong duality."""
    zero = Fraction(0)
    for i in range(m):
        lhs = sum((rows[i][j] * x[j] for j in range(n) if x[j]), zero)
        assert lhs == rhs[i], "primal feasibility violated"
    assert all(x[j] >= 0 for j in range(n)), "nonnegativity violated"
    assert all(zrow[j] >= 0 for j in range(n)), "dual feasibility violated"
    assert all(x[j] == 0 or zrow[j] == 0 for j in range(n)), "complementary slackness violated"
    # Duals from the reduced costs of the artificial columns (kept at cost 0):
    # y_i = -zrow[n + i] for each surviving row i of the sign-normalized system.
    kept = [i for i in range(m) if i not in set(deleted)]
    y = {i: -zrow[n + i] for i in kept}
    signed_rhs = [(-rhs[i] if rhs[i] < 0 else rhs[i]) for i in range(m)]
    dual_value = sum((y[i] * signed_rhs[i] for i in kept), zero)
    assert dual_value == value, "strong duality violated"
