"""Seeded random generators for points, objectives, maps, and configurations.

Everything takes an explicit ``random.Random`` so that runs are exactly
reproducible; rational outputs are produced with bounded denominators.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random
from typing import Optional

from ctp.blocks import BlockConfiguration, Point, new_config
from ctp.gf2 import BitMatrix, BitVec, span_with_width
from ctp.inequalities import LosSpec


def random_tp_point(config: BlockConfiguration, rng: Random, max_denominator: int = 1000) -> Point:
    """A full-support rational point satisfying the transversal equations.

    Per block, exponentially distributed weights are normalized onto the
    simplex and rationalized with the given denominator cap; the last
    coordinate absorbs the rounding so the block sums are exactly one.
    """
    point: Point = {}
    for i, block in enumerate(config.blocks, start=1):
        m = len(block)
        if m == 1:
            point[(i, block[0])] = Fraction(1)
            continue
        while True:
            weights = [rng.expovariate(1.0) for _ in range(m)]
            total = sum(weights)
            fracs = [Fraction(w / total).limit_denominator(max_denominator) for w in weights[:-1]]
            last = 1 - sum(fracs)
            if last > 0 and all(f > 0 for f in fracs):
                fracs.append(last)
                break
        for w, f in zip(block, fracs):
            point[(i, w)] = f
    return point


def random_point(config: BlockConfiguration, rng: Random, denominator: int = 10) -> Point:
    """An arbitrary rational point over the coordinate space (any signs)."""
    return {
        key: Fraction(rng.randint(-denominator, denominator), rng.randint(1, denominator))
        for key in config.coords
    }


def random_objective(config: BlockConfiguration, rng: Random, denominator: int = 10) -> Point:
    return random_point(config, rng, denominator)


def random_matrix(rng: Random, rows: int, cols: int) -> BitMatrix:
    return BitMatrix(rows, cols, tuple(rng.randrange(1 << cols) for _ in range(rows)))


def random_los_spec(rng: Random, d: int, n: int) -> LosSpec:
    eta = BitVec(d, rng.randrange(1, 1 << d))
    while True:
        mask = rng.randrange(1, 1 << n)
        if mask.bit_count() & 1:
            break
    return LosSpec(eta, frozenset(i + 1 for i in range(n) if (mask >> i) & 1))


def random_low_rank_config(
    rng: Random,
    max_rank: int = 2,
    d_choices: tuple[int, ...] = (1, 2, 3, 4),
    n_choices: tuple[int, ...] = (3, 4, 5),
    max_size: int = 14,
) -> BlockConfiguration:
    """A random configuration whose rank is at most ``max_rank``.

    Blocks are sampled from the span of a few random independent vectors;
    the zero vector is forced into half the blocks to keep cyclic
    transversals likely (but not guaranteed).
    """
    d = rng.choice(d_choices)
    r = rng.randint(1, min(max_rank, d))
    while True:
        basis = [BitVec(d, rng.randrange(1, 1 << d)) for _ in range(r)]
        spanned = sorted(span_with_width(basis, d))
        if len(spanned) == 1 << r:
            break
    n = rng.choice(n_choices)
    blocks: list[list[BitVec]] = []
    budget = max_size - n  # every block gets one element for free
    for i in range(n):
        extra = rng.randint(0, min(len(spanned) - 1, max(0, budget)))
        budget -= extra
        chosen = rng.sample(spanned, extra + 1)
        if rng.random() < 0.5 and spanned[0] not in chosen:
            chosen[0] = spanned[0]  # spanned[0] is the zero vector
        blocks.append(chosen)
    return new_config(d, blocks)
