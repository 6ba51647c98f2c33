"""Flow-based extended formulations.

The layered digraph of a configuration has a source, a sink, and one node
per (partial-sum vector, layer) pair; arcs at layer i are labelled by the
elements of block i and advance the partial sum.  Source-sink paths are in
bijection with cyclic transversals, so the path polytope (unit source
outflow, conservation, nonnegativity) projects onto the cyclic transversal
polytope by aggregating arcs per (block, label).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

from ctp.blocks import BlockConfiguration, CoordIndex, Point
from ctp.errors import CapExceeded
from ctp.gf2 import BitVec, add
from ctp.inequalities import LinEq, LinIneq
from ctp.settings import MAX_TRANSVERSALS
from ctp.transversals import Transversal


class Arc(NamedTuple):
    """Arc of layer ``block``: tail partial sum and block-element label."""

    block: int
    tail: BitVec
    label: BitVec

    @property
    def head(self) -> BitVec:
        return add(self.tail, self.label)


Node = tuple[int, BitVec]  # (layer, partial sum)


@dataclass(frozen=True)
class FlowNet:
    """Layered DAG whose source-sink paths encode the cyclic transversals."""

    config: BlockConfiguration
    nodes: tuple[Node, ...]
    arcs: tuple[Arc, ...]
    pruned: bool

    @property
    def source(self) -> Node:
        return (0, BitVec.zero(self.config.d))

    @property
    def sink(self) -> Node:
        return (self.config.length, BitVec.zero(self.config.d))


def build_flownet(config: BlockConfiguration, prune: bool = True, cap: int = MAX_TRANSVERSALS) -> FlowNet:
    """Build the layered network; arc count is at most 2^rank * size.

    Pruning removes nodes that lie on no source-sink path (and their arcs),
    which leaves the path set, and hence the projected polytope, unchanged.
    """
    if (1 << config.rank) * config.size > cap:
        raise CapExceeded(f"flow network would exceed the cap {cap}")
    n = config.length
    zero = BitVec.zero(config.d)
    spanned = sorted(config.span)

    arcs: list[Arc] = []
    if n == 1:
        if config.contains(1, zero):
            arcs.append(Arc(1, zero, zero))
    else:
        for w in config.block(1):
            arcs.append(Arc(1, zero, w))
        for i in range(2, n):
            for sigma in spanned:
                for w in config.block(i):
                    arcs.append(Arc(i, sigma, w))
        for w in config.block(n):
            arcs.append(Arc(n, w, w))

    nodes: list[Node] = [(0, zero), (n, zero)]
    for i in range(1, n):
        for sigma in spanned:
            nodes.append((i, sigma))

    if prune:
        reachable: set[Node] = {(0, zero)}
        by_layer: dict[int, list[Arc]] = {}
        for a in arcs:
            by_layer.setdefault(a.block, []).append(a)
        for i in range(1, n + 1):
            for a in by_layer.get(i, ()):
                if (i - 1, a.tail) in reachable:
                    reachable.add((i, a.head))
        coreachable: set[Node] = {(n, zero)}
        for i in range(n, 0, -1):
            for a in by_layer.get(i, ()):
                if (i, a.head) in coreachable:
                    coreachable.add((i - 1, a.tail))
        alive = reachable & coreachable
        arcs = [a for a in arcs if (a.block - 1, a.tail) in alive and (a.block, a.head) in alive]
        nodes = [v for v in nodes if v in alive]

    arcs.sort()
    nodes.sort()
    return FlowNet(config, tuple(nodes), tuple(arcs), prune)


@dataclass(frozen=True)
class FlowSystem:
    """Unit source outflow, conservation at internal nodes, and y >= 0."""

    net: FlowNet
    equations: tuple[LinEq, ...]
    inequalities: tuple[LinIneq, ...]


def flow_system(net: FlowNet) -> FlowSystem:
    """The exact linear system whose 0/1 solutions are the path indicators."""
    n = net.config.length
    out_arcs: dict[Node, list[Arc]] = {}
    in_arcs: dict[Node, list[Arc]] = {}
    for a in net.arcs:
        out_arcs.setdefault((a.block - 1, a.tail), []).append(a)
        in_arcs.setdefault((a.block, a.head), []).append(a)

    equations = [LinEq.of({a: Fraction(1) for a in out_arcs.get(net.source, [])}, 1)]
    for node in net.nodes:
        layer, _ = node
        if layer in (0, n):
            continue
        coeffs: dict[Arc, Fraction] = {a: Fraction(1) for a in in_arcs.get(node, [])}
        for a in out_arcs.get(node, []):
            coeffs[a] = coeffs.get(a, Fraction(0)) - 1
        equations.append(LinEq.of(coeffs, 0))
    inequalities = [LinIneq.of({a: Fraction(1)}, 0) for a in net.arcs]
    return FlowSystem(net, tuple(equations), tuple(inequalities))


def path_indicator(net: FlowNet, xi: Transversal) -> dict[Arc, Fraction]:
    """Arc indicator of the source-sink path encoding a cyclic transversal."""
    arcs = set(net.arcs)
    acc = BitVec.zero(net.config.d)
    out: dict[Arc, Fraction] = {}
    for i, w in enumerate(xi, start=1):
        arc = Arc(i, acc, w)
        if arc not in arcs:
            raise ValueError("transversal does not trace a path of the network")
        out[arc] = Fraction(1)
        acc = add(acc, w)
    if not acc.is_zero():
        raise ValueError("transversal is not cyclic")
    return out


def enumerate_paths(net: FlowNet, cap: int = MAX_TRANSVERSALS) -> Iterator[tuple[Arc, ...]]:
    """All source-sink paths, depth first in arc order."""
    n = net.config.length
    out_arcs: dict[Node, list[Arc]] = {}
    for a in net.arcs:
        out_arcs.setdefault((a.block - 1, a.tail), []).append(a)
    for node in out_arcs:
        out_arcs[node].sort()
    count = 0
    stack: list[Arc] = []

    def walk(node: Node) -> Iterator[tuple[Arc, ...]]:
        nonlocal count
        if node == net.sink:
            count += 1
            if count > cap:
                raise CapExceeded(f"path count exceeds cap {cap}")
            yield tuple(stack)
            return
        for a in out_arcs.get(node, ()):
            stack.append(a)
            yield from walk((a.block, a.head))
            stack.pop()

    yield from walk(net.source)


def project_to_x(net: FlowNet, y: Mapping[Arc, Fraction]) -> Point:
    """Aggregate an arc vector per (block, label): the projection to x-space."""
    arcs = set(net.arcs)
    for a in y:
        if a not in arcs:
            raise ValueError(f"unknown arc {a}")
    out: Point = {}
    for a, v in y.items():
        if not v:
            continue
        key: CoordIndex = (a.block, a.label)
        out[key] = out.get(key, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def _arc_name(a: Arc) -> str:
    return f"y_{a.block}_{a.tail.to_text()}_{a.label.to_text()}"


def _node_name(node: Node) -> str:
    return f"node_{node[0]}_{node[1].to_text()}"


def canonical_lp_data(
    net: FlowNet, objective: Optional[Mapping[CoordIndex, Fraction]] = None
) -> dict:
    """The named, integer-scaled system that the LP writer emits.

    The objective over x-coordinates is substituted through the projection
    (each arc inherits the coefficient of its (block, label) pair) and
    scaled by the least common denominator, recorded under ``"scale"``.
    """
    system = flow_system(net)
    obj: dict[str, Fraction] = {}
    if objective:
        for a in net.arcs:
            c = Fraction(objective.get((a.block, a.label), 0))
            if c:
                obj[_arc_name(a)] = c
    scale = 1
    for c in obj.values():
        scale = scale * c.denominator // gcd(scale, c.denominator)
    scaled_obj = {name: int(c * scale) for name, c in obj.items()}

    constraints = []
    names = [("source", system.equations[0])]
    internal = [v for v in net.nodes if v[0] not in (0, net.config.length)]
    names += list(zip((_node_name(v) for v in internal), system.equations[1:]))
    for name, eq in names:
        denom = 1
        for _, c in eq.coeffs:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        denom = denom * eq.rhs.denominator // gcd(denom, eq.rhs.denominator)
        row = {_arc_name(a): int(c * denom) for a, c in eq.coeffs}
        constraints.append((name, row, "=", int(eq.rhs * denom)))
    return {
        "objective": scaled_obj,
        "scale": scale,
        "constraints": constraints,
        "bounds": [_arc_name(a) for a in net.arcs],
    }


def format_lp(net: FlowNet, objective: Optional[Mapping[CoordIndex, Fraction]] = None) -> str:
    """Render the flow system in CPLEX LP format (ASCII, 1-based names)."""
    data = canonical_lp_data(net, objective)
    lines = [f"\\ flow extended formulation: {net.config.length} blocks, width {net.config.d}"]
    if data["scale"] != 1:
        lines.append(f"\\ objective scaled by {data['scale']}")
        if objective:
            for key in sorted(objective, key=lambda k: (k[0], k[1])):
                c = Fraction(objective[key])
                if c and c.denominator > 1:
                    lines.append(f"\\ exact coefficient on x_{key[0]}_{key[1].to_text()}: {c}")
    lines.append("Minimize")
    if data["objective"]:
        lines.append(" obj: " + _poly_text(data["objective"]))
    else:
        first = data["bounds"][0] if data["bounds"] else "y_none"
        lines.append(f" obj: 0 {first}")
    lines.append("Subject To")
    for name, row, sense, rhs in data["constraints"]:
        lines.append(f" {name}: {_poly_text(row)} {sense} {rhs}")
    lines.append("Bounds")
    for var in data["bounds"]:
        lines.append(f" {var} >= 0")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(net: FlowNet, path: str, objective: Optional[Mapping[CoordIndex, Fraction]] = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_lp(net, objective))


def _poly_text(terms: Mapping[str, int]) -> str:
    parts: list[str] = []
    for name in sorted(terms):
        c = terms[name]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coeff = "" if mag == 1 else f"{mag} "
        if not parts:
            parts.append(f"{'-' if c < 0 else ''}{coeff}{name}")
        else:
            parts.append(f"{sign} {coeff}{name}")
    return " ".join(parts) if parts else "0"


def read_lp(text: str) -> dict:
    """Parse the LP text emitted by :func:`format_lp` back into its data.

    Only the writer's dialect is supported.  Returns the same shape as
    :func:`canonical_lp_data` (the scale is recovered from the comment).
    """
    scale = 1
    objective: dict[str, int] = {}
    constraints: list[tuple[str, dict[str, int], str, int]] = []
    bounds: list[str] = []
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            if line.startswith("\\ objective scaled by "):
                scale = int(line.rsplit(" ", 1)[1])
            continue
        lowered = line.lower()
        if lowered in ("minimize", "maximize"):
            section = "objective"
            continue
        if lowered == "subject to":
            section = "constraints"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered == "end":
            break
        if section == "objective":
            _, expr = line.split(":", 1)
            objective = _parse_poly(expr)
            objective = {k: v for k, v in objective.items() if v}
        elif section == "constraints":
            name, rest = line.split(":", 1)
            for sense in ("<=", ">=", "="):
                if f" {sense} " in rest:
                    expr, rhs = rest.rsplit(f" {sense} ", 1)
                    constraints.append((name.strip(), _parse_poly(expr), sense, int(rhs)))
                    break
        elif section == "bounds":
            var, sense, rhs = line.split()
            if sense != ">=" or rhs != "0":
                raise ValueError(f"unexpected bound line: {line!r}")
            bounds.append(var)
    return {"objective": objective, "scale": scale, "constraints": constraints, "bounds": bounds}


def _parse_poly(expr: str) -> dict[str, int]:
    tokens = expr.split()
    terms: dict[str, int] = {}
    sign = 1
    coeff: Optional[int] = None
    for tok in tokens:
        if tok == "+":
            sign, coeff = 1, None
        elif tok == "-":
            sign, coeff = -1, None
        elif tok.lstrip("-").isdigit():
            if tok.startswith("-"):
                sign = -1
                tok = tok[1:]
            coeff = int(tok)
        else:
            name = tok
            if name.startswith("-"):
                sign = -1
                name = name[1:]
            value = sign * (coeff if coeff is not None else 1)
            if value:
                terms[name] = terms.get(name, 0) + value
            sign, coeff = 1, None
    return terms
