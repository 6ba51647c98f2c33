"""JSON file formats for configurations, points, inequalities, and inputs.

Rationals are written as decimal-free "p/q" strings (plain "p" for
integers).  Configuration files round-trip byte-stably: loading and saving
again reproduces the canonical serialization exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

from ctp.blocks import BlockConfiguration, CoordIndex, Point, new_config
from ctp.gf2 import BitMatrix, BitVec
from ctp.inequalities import GE, LE, LinIneq
from ctp.ordering import canonical_sort_key
from ctp.reductions import Graph, SatFormula, SetFamily, parse_dimacs


def fraction_to_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def str_to_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    if "." in text or "e" in text or "E" in text:
        raise ValueError(f"decimal notation is not accepted: {text!r}")
    return Fraction(int(text))


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def config_to_json(config: BlockConfiguration) -> str:
    return _dumps({"d": config.d, "blocks": [[w.to_text() for w in block] for block in config.blocks]})


def config_from_json(text: str) -> BlockConfiguration:
    data = json.loads(text)
    d = int(data["d"])
    blocks = [[BitVec.from_text(s) for s in block] for block in data["blocks"]]
    return new_config(d, blocks)


def point_to_json(point: Mapping[CoordIndex, Fraction]) -> str:
    coords = [
        {"block": i, "elem": w.to_text(), "v": fraction_to_str(v)}
        for (i, w), v in sorted(point.items(), key=lambda kv: canonical_sort_key(kv[0]))
        if v
    ]
    return _dumps({"coords": coords})


def point_from_json(text: str) -> Point:
    data = json.loads(text)
    point: Point = {}
    for entry in data["coords"]:
        key = (int(entry["block"]), BitVec.from_text(entry["elem"]))
        point[key] = str_to_fraction(entry["v"])
    return point


def ineq_to_json(ineq: LinIneq) -> str:
    coeffs = [
        {"block": i, "elem": w.to_text(), "c": fraction_to_str(c)}
        for (i, w), c in ineq.coeffs
    ]
    return _dumps({"coeffs": coeffs, "rhs": fraction_to_str(ineq.rhs), "sense": ineq.sense})


def ineq_from_json(text: str) -> LinIneq:
    data = json.loads(text)
    coeffs = {
        (int(e["block"]), BitVec.from_text(e["elem"])): str_to_fraction(e["c"])
        for e in data["coeffs"]
    }
    sense = data.get("sense", GE)
    if sense not in (GE, LE):
        raise ValueError(f"unknown sense {sense!r}")
    return LinIneq.of(coeffs, str_to_fraction(data["rhs"]), sense)


def graph_from_json(text: str) -> Graph:
    data = json.loads(text)
    return Graph(int(data["nodes"]), tuple((int(u), int(v)) for u, v in data["edges"]))


def family_from_json(text: str) -> SetFamily:
    data = json.loads(text)
    return SetFamily(int(data["num_elements"]), tuple(tuple(int(e) for e in m) for m in data["members"]))


def sat_from_text(text: str) -> SatFormula:
    """Parse a SAT instance from JSON or DIMACS CNF."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return SatFormula.of(int(data["num_vars"]), [[int(l) for l in c] for c in data["clauses"]])
    return parse_dimacs(text)


def matrix_from_json(text: str) -> tuple[BitMatrix, BitVec | None]:
    """Parse {"matrix": [row bitstrings], "b": optional bitstring}."""
    data = json.loads(text)
    rows = [BitVec.from_text(s) for s in data["matrix"]]
    matrix = BitMatrix.from_rows(rows)
    b = BitVec.from_text(data["b"]) if data.get("b") else None
    return matrix, b
