"""Constructive reductions onto block configurations.

Each reduction returns the configuration together with the coordinate
projection carrying the original variables and a decoder mapping cyclic
transversals back to original objects (satisfying assignments, packings,
matchings, kernel vectors).  The decoders are bijections onto the
respective solution sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from ctp.blocks import BlockConfiguration, CoordIndex, new_config
from ctp.gf2 import BitMatrix, BitVec
from ctp.transversals import Transversal


@dataclass(frozen=True)
class SatFormula:
    """CNF with at most k literals per clause; literals are (variable, polarity)."""

    num_vars: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("formula needs at least one variable")
        seen: set[int] = set()
        for idx, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise ValueError(f"clause {idx} is empty")
            vars_here = [v for v, _ in clause]
            if len(set(vars_here)) != len(vars_here):
                raise ValueError(f"clause {idx} repeats a variable")
            for v in vars_here:
                if not 1 <= v <= self.num_vars:
                    raise ValueError(f"clause {idx} uses unknown variable {v}")
            seen.update(vars_here)
        missing = set(range(1, self.num_vars + 1)) - seen
        if missing:
            raise ValueError(f"redundant variables (in no clause): {sorted(missing)}")

    @staticmethod
    def of(num_vars: int, clauses: Sequence[Sequence[int]]) -> SatFormula:
        """Build from signed integer literals (DIMACS convention)."""
        conv = tuple(tuple((abs(l), l > 0) for l in clause) for clause in clauses)
        return SatFormula(num_vars, conv)

    def satisfying_assignments(self) -> list[tuple[bool, ...]]:
        """Brute-force truth table; independent of any reduction."""
        out = []
        for code in range(1 << self.num_vars):
            assign = tuple(bool((code >> i) & 1) for i in range(self.num_vars))
            if all(any(assign[v - 1] == pol for v, pol in clause) for clause in self.clauses):
                out.append(assign)
        return out


def parse_dimacs(text: str) -> SatFormula:
    """Parse DIMACS CNF."""
    num_vars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if current:
                    clauses.append(current)
                    current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing DIMACS problem line")
    return SatFormula.of(num_vars, clauses)


@dataclass(frozen=True)
class SetFamily:
    """A family of non-empty subsets of a 1-based ground set (duplicates allowed)."""

    num_elements: int
    members: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_elements < 1:
            raise ValueError("ground set must be non-empty")
        canonical = []
        for idx, member in enumerate(self.members, start=1):
            elems = sorted(set(member))
            if not elems:
                raise ValueError(f"member {idx} is empty")
            if elems[0] < 1 or elems[-1] > self.num_elements:
                raise ValueError(f"member {idx} leaves the ground set")
            canonical.append(tuple(elems))
        object.__setattr__(self, "members", tuple(canonical))

    def ground_set(self) -> list[int]:
        used = sorted({e for m in self.members for e in m})
        return used

    def packings(self) -> list[frozenset[int]]:
        """Brute-force list of packings, as sets of member indices (0-based)."""
        out = []
        m = len(self.members)
        for code in range(1 << m):
            chosen = [i for i in range(m) if (code >> i) & 1]
            ok = True
            for a in range(len(chosen)):
                for b in range(a + 1, len(chosen)):
                    if set(self.members[chosen[a]]) & set(self.members[chosen[b]]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(frozenset(chosen))
        return out


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on nodes 1..num_nodes."""

    num_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise ValueError("graph needs at least one node")
        canonical = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at node {u}")
            if not (1 <= u <= self.num_nodes and 1 <= v <= self.num_nodes):
                raise ValueError(f"edge ({u},{v}) leaves the node set")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
            canonical.append(e)
        object.__setattr__(self, "edges", tuple(sorted(canonical)))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def stable_sets(self) -> list[frozenset[int]]:
        out = []
        for code in range(1 << self.num_nodes):
            chosen = {v for v in range(1, self.num_nodes + 1) if (code >> (v - 1)) & 1}
            if all(not (u in chosen and v in chosen) for u, v in self.edges):
                out.append(frozenset(chosen))
        return out

    def matchings(self) -> list[frozenset[tuple[int, int]]]:
        out = []
        m = len(self.edges)
        for code in range(1 << m):
            chosen = [self.edges[i] for i in range(m) if (code >> i) & 1]
            nodes = [v for e in chosen for v in e]
            if len(nodes) == len(set(nodes)):
                out.append(frozenset(chosen))
        return out

    def perfect_matchings(self) -> list[frozenset[tuple[int, int]]]:
        return [m for m in self.matchings() if 2 * len(m) == self.num_nodes]

    def cuts(self) -> set[frozenset[tuple[int, int]]]:
        """Edge sets delta(S) over all node subsets S."""
        out = set()
        for code in range(1 << self.num_nodes):
            side = {v for v in range(1, self.num_nodes + 1) if (code >> (v - 1)) & 1}
            cut = frozenset(e for e in self.edges if (e[0] in side) != (e[1] in side))
            out.add(cut)
        return out


@dataclass(frozen=True)
class ReductionResult:
    """A configuration with the projection coordinates and a solution decoder."""

    config: BlockConfiguration
    projection: tuple[CoordIndex, ...]
    decode: Callable[[Transversal], object]


def from_sat(formula: SatFormula, k: int) -> ReductionResult:
    """Configuration whose cyclic transversals are the satisfying assignments.

    Rows of the ambient space are allocated per clause (k_i coordinates for
    a clause with k_i literals).  Variable blocks hold the two substitution
    patterns; clause blocks hold the nonzero true-false patterns of their
    literals.  The projection is onto the "variable set to true"
    coordinates, and for k = 2 it is an affine isomorphism.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    for idx, clause in enumerate(formula.clauses, start=1):
        if len(clause) > k:
            raise ValueError(f"clause {idx} has more than {k} literals")
    offsets = []
    pos = 0
    for clause in formula.clauses:
        offsets.append(pos)
        pos += len(clause)
    d = pos
    if d == 0:
        raise ValueError("formula has no clauses")

    def true_false_vectors(v: int) -> tuple[BitVec, BitVec]:
        tbits = 0
        fbits = 0
        for ci, clause in enumerate(formula.clauses):
            for j, (var, pol) in enumerate(clause):
                if var == v:
                    if pol:
                        tbits |= 1 << (offsets[ci] + j)
                    else:
                        fbits |= 1 << (offsets[ci] + j)
        return BitVec(d, tbits), BitVec(d, fbits)

    q = formula.num_vars
    blocks: list[list[BitVec]] = []
    true_vecs: list[BitVec] = []
    false_vecs: list[BitVec] = []
    for v in range(1, q + 1):
        tvec, fvec = true_false_vectors(v)
        true_vecs.append(tvec)
        false_vecs.append(fvec)
        blocks.append([tvec, fvec])
    for ci, clause in enumerate(formula.clauses):
        patterns = []
        for z in range(1, 1 << len(clause)):
            patterns.append(BitVec(d, z << offsets[ci]))
        blocks.append(patterns)

    config = new_config(d, blocks)
    projection = tuple((v, true_vecs[v - 1]) for v in range(1, q + 1))

    def decode(xi: Transversal) -> tuple[bool, ...]:
        assign = []
        for v in range(1, q + 1):
            if xi[v - 1] == true_vecs[v - 1]:
                assign.append(True)
            elif xi[v - 1] == false_vecs[v - 1]:
                assign.append(False)
            else:
                raise ValueError(f"entry {v} is not a substitution pattern")
        return tuple(assign)

    return ReductionResult(config, projection, decode)


def stable_set_config(graph: Graph) -> ReductionResult:
    """Stable sets via the 2-SAT formula with one all-negative clause per edge."""
    isolated = [v for v in range(1, graph.num_nodes + 1) if graph.degree(v) == 0]
    if isolated:
        raise ValueError(f"isolated nodes {isolated} admit no clause")
    if not graph.edges:
        raise ValueError("graph has no edges")
    clauses = [[-u, -v] for u, v in graph.edges]
    sat = from_sat(SatFormula.of(graph.num_nodes, clauses), 2)

    def decode(xi: Transversal) -> frozenset[int]:
        assign = sat.decode(xi)
        return frozenset(v for v in range(1, graph.num_nodes + 1) if assign[v - 1])

    return ReductionResult(sat.config, sat.projection, decode)


def packing_config(family: SetFamily) -> ReductionResult:
    """Packing reduction with one block per member and one per ground element.

    Member blocks are {0, marker}; element blocks collect the
    consecutive-pair patterns of the members containing the element.  A
    cyclic transversal selects, per member row, either nothing or the whole
    row, which is exactly a packing.
    """
    members = family.members
    ground = family.ground_set()
    offsets = []
    pos = 0
    for member in members:
        offsets.append(pos)
        pos += len(member)
    d = pos
    if d == 0:
        raise ValueError("family has no members")

    def marker(h: int) -> BitVec:
        return BitVec(d, 1 << offsets[h])

    def pair_vec(h: int, e: int) -> BitVec:
        member = members[h]
        j = member.index(e)
        if j < len(member) - 1:
            bits = (1 << (offsets[h] + j)) | (1 << (offsets[h] + j + 1))
        else:
            bits = 1 << (offsets[h] + j)
        return BitVec(d, bits)

    blocks: list[list[BitVec]] = []
    zero = BitVec.zero(d)
    for h in range(len(members)):
        blocks.append([zero, marker(h)])
    for e in ground:
        blocks.append([zero] + [pair_vec(h, e) for h in range(len(members)) if e in members[h]])
    config = new_config(d, blocks)
    projection = tuple((h + 1, marker(h)) for h in range(len(members)))

    def decode(xi: Transversal) -> frozenset[int]:
        return frozenset(h for h in range(len(members)) if xi[h] == marker(h))

    return ReductionResult(config, projection, decode)


def packing_config_small(family: SetFamily) -> ReductionResult:
    """Smaller packing reduction using only element blocks.

    Requires every member to have at least two elements; member rows get
    one fewer coordinate and the pair patterns telescope around the row, so
    again a row is either fully selected or not at all.  Decoding reads the
    first element of each member as its representative.
    """
    members = family.members
    for idx, member in enumerate(members, start=1):
        if len(member) < 2:
            raise ValueError(f"member {idx} has fewer than two elements")
    ground = family.ground_set()
    offsets = []
    pos = 0
    for member in members:
        offsets.append(pos)
        pos += len(member) - 1
    d = pos

    def pattern(h: int, e: int) -> BitVec:
        member = members[h]
        j = member.index(e) + 1  # 1-based position within the member
        size = len(member)
        if j == 1:
            bits = 1 << offsets[h]
        elif j == size:
            bits = 1 << (offsets[h] + size - 2)
        else:
            bits = (1 << (offsets[h] + j - 2)) | (1 << (offsets[h] + j - 1))
        return BitVec(d, bits)

    blocks: list[list[BitVec]] = []
    zero = BitVec.zero(d)
    block_of_element: dict[int, int] = {}
    for bi, e in enumerate(ground, start=1):
        block_of_element[e] = bi
        blocks.append([zero] + [pattern(h, e) for h in range(len(members)) if e in members[h]])
    config = new_config(d, blocks)

    representatives = [member[0] for member in members]
    projection = tuple(
        (block_of_element[representatives[h]], pattern(h, representatives[h]))
        for h in range(len(members))
    )

    def decode(xi: Transversal) -> frozenset[int]:
        chosen = []
        for h in range(len(members)):
            rep = representatives[h]
            if xi[block_of_element[rep] - 1] == pattern(h, rep):
                chosen.append(h)
        return frozenset(chosen)

    return ReductionResult(config, projection, decode)


def _edge_family(graph: Graph) -> SetFamily:
    return SetFamily(graph.num_nodes, tuple(graph.edges))


def matching_config(graph: Graph) -> ReductionResult:
    """Matching polytope configuration: the small packing reduction on edges."""
    if not graph.edges:
        raise ValueError("graph has no edges")
    inner = packing_config_small(_edge_family(graph))
    edges = graph.edges

    def decode(xi: Transversal) -> frozenset[tuple[int, int]]:
        chosen = inner.decode(xi)
        return frozenset(edges[h] for h in chosen)

    return ReductionResult(inner.config, inner.projection, decode)


def perfect_matching_config(graph: Graph) -> ReductionResult:
    """Same blocks with the zero element removed, forcing every node matched."""
    isolated = [v for v in range(1, graph.num_nodes + 1) if graph.degree(v) == 0]
    if isolated:
        raise ValueError(f"isolated nodes {isolated} cannot be matched")
    inner = matching_config(graph)
    zero = BitVec.zero(inner.config.d)
    blocks = []
    for i, block in enumerate(inner.config.blocks, start=1):
        trimmed = [w for w in block if w != zero]
        if not trimmed:
            raise ValueError(f"node block {i} would become empty (isolated node)")
        blocks.append(trimmed)
    config = new_config(inner.config.d, blocks)
    return ReductionResult(config, inner.projection, inner.decode)


def bsp_config(matrix: BitMatrix, b: Optional[BitVec] = None, include_rhs_block: bool = True) -> ReductionResult:
    """Binary subspace polytope configuration for {x : matrix x = b}.

    One block {column, 0} per matrix column plus the singleton block {b};
    no column may be zero.  Dropping the singleton block is allowed only
    for b = 0 (the kernel reading), where it changes the configuration but
    not the decoded solution set.
    """
    if matrix.rows < 1:
        raise ValueError("matrix needs at least one row")
    if b is None:
        b = BitVec.zero(matrix.rows)
    if b.width != matrix.rows:
        raise ValueError("right-hand side width mismatch")
    if not include_rhs_block and not b.is_zero():
        raise ValueError("the right-hand-side block can only be dropped for b = 0")
    columns = matrix.columns()
    zero = BitVec.zero(matrix.rows)
    for j, col in enumerate(columns, start=1):
        if col.is_zero():
            raise ValueError(f"column {j} is zero")
    blocks: list[list[BitVec]] = [[col, zero] for col in columns]
    if include_rhs_block:
        blocks.append([b])
    config = new_config(matrix.rows, blocks)
    projection = tuple((j, col) for j, col in enumerate(columns, start=1))

    def decode(xi: Transversal) -> tuple[int, ...]:
        return tuple(1 if xi[j] == columns[j] else 0 for j in range(len(columns)))

    return ReductionResult(config, projection, decode)


def cycle_space_matrix(graph: Graph) -> BitMatrix:
    """Fundamental-cycle generators of the graph's binary cycle space.

    Rows are the fundamental cycles of the non-tree edges with respect to a
    spanning forest; columns are indexed by the edges in canonical order.
    """
    edges = graph.edges
    if not edges:
        raise ValueError("graph has no edges")
    index = {e: j for j, e in enumerate(edges)}
    parent: dict[int, tuple[int, Optional[tuple[int, int]]]] = {}
    depth: dict[int, int] = {}
    adjacency: dict[int, list[tuple[int, tuple[int, int]]]] = {v: [] for v in range(1, graph.num_nodes + 1)}
    for e in edges:
        u, v = e
        adjacency[u].append((v, e))
        adjacency[v].append((u, e))

    tree_edges: set[tuple[int, int]] = set()
    for root in range(1, graph.num_nodes + 1):
        if root in parent:
            continue
        parent[root] = (root, None)
        depth[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, e in adjacency[u]:
                if v not in parent:
                    parent[v] = (u, e)
                    depth[v] = depth[u] + 1
                    tree_edges.add(e)
                    stack.append(v)

    rows: list[int] = []
    for e in edges:
        if e in tree_edges:
            continue
        u, v = e
        bits = 1 << index[e]
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            pu, pe = parent[u]
            bits ^= 1 << index[pe]
            u = pu
        rows.append(bits)
    return BitMatrix(len(rows), len(edges), tuple(rows))


def cut_config(graph: Graph) -> ReductionResult:
    """Cut polytope configuration via the cycle-space subspace description.

    Cuts are the edge sets orthogonal to every cycle, so the configuration
    is the binary subspace one for the cycle-space generator matrix.  Every
    edge must lie on a cycle (otherwise its matrix column is zero).
    """
    matrix = cycle_space_matrix(graph)
    if matrix.rows == 0:
        raise ValueError("graph has no cycles; the cut space is the whole edge space")
    inner = bsp_config(matrix)
    edges = graph.edges

    def decode(xi: Transversal) -> frozenset[tuple[int, int]]:
        x = inner.decode(xi)
        return frozenset(edges[j] for j in range(len(edges)) if x[j])

    return ReductionResult(inner.config, inner.projection, decode)


def simplex_config(omega: Sequence[BitVec]) -> BlockConfiguration:
    """Two equal blocks: the cyclic transversals are the diagonal pairs."""
    elems = list(omega)
    if not elems:
        raise ValueError("element set must be non-empty")
    d = elems[0].width
    return new_config(d, [elems, elems])
