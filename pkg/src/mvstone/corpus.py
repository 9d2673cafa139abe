"""Curated algebras and topologies used by the test suites and the CLI examples."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .algebra import FiniteMvAlgebra, full_product, generate_subalgebra
from .core import Chain, ProductSignature
from .topology import (
    MvTopology,
    close_under,
    constant_topology,
    discrete_crisp,
    full_topology,
    generate_from_base,
    indiscrete,
    metric_ball_base,
)

half, third, quarter = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)

# (orders, generators as rational tuples)
GENERATED = [
    ((2,), []),
    ((3,), [(half,)]),
    ((4,), [(third,)]),
    ((5,), [(quarter,)]),
    ((5,), [(half,)]),
    ((3, 2), [(half, 0)]),
    ((3, 3), [(half, 0)]),
    ((3, 3), [(half, half)]),
    ((2, 2), [(1, 0)]),
    ((4, 3), [(third, half)]),
    ((5, 3), [(quarter, half)]),
    ((5, 3), [(half, half)]),
    ((2, 3, 5), [(1, 0, 0), (0, half, 0), (0, 0, quarter)]),
    ((4, 4), [(third, 2 * third)]),
    ((3, 3, 3), [(half, 0, 0), (0, 1, 0)]),
    ((2, 2, 2), [(1, 0, 0)]),
    ((7,), [(third,)]),
    ((7,), [(half,)]),
    ((5, 5), [(quarter, half)]),
    ((4, 2, 3), [(2 * third, 1, 0)]),
]


@lru_cache(maxsize=None)
def corpus_algebras() -> tuple[FiniteMvAlgebra, ...]:
    out = []
    for orders, gens in GENERATED:
        sig = ProductSignature(orders)
        label = "x".join(f"L{o}" for o in orders)
        gtext = ", ".join("(" + ", ".join(str(Fraction(v)) for v in g) + ")" for g in gens)
        out.append(generate_subalgebra(sig, [sig.element(*g) for g in gens], name=f"{label}<{gtext}>"))
    return tuple(out)


@lru_cache(maxsize=None)
def full_products(max_factors: int = 3, orders: tuple = (2, 3, 4, 5)) -> tuple[FiniteMvAlgebra, ...]:
    out = []
    for k in range(1, max_factors + 1):
        for combo in combinations_with_replacement(orders, k):
            out.append(full_product(*combo))
    return tuple(out)


def enumerate_mv_topologies(universe, chain: Chain) -> list[MvTopology]:
    """Every family containing 0 and 1 and closed under ∨, ⊕, ⊙, ∧, by subset scan."""
    universe = tuple(universe)
    sig = ProductSignature.power(chain.order, len(universe))
    rest = [t for t in sig.all_elements() if t not in (sig.zero, sig.one)]
    if len(rest) > 20:
        raise ValueError("too many tables for a subset scan")
    ops = (sig.join, sig.oplus, sig.odot, sig.meet)
    out = []
    for mask in range(1 << len(rest)):
        fam = {sig.zero, sig.one} | {t for j, t in enumerate(rest) if mask >> j & 1}
        if all(op(a, b) in fam for a in fam for b in fam for op in ops):
            out.append(MvTopology(universe, chain, fam))
    return out


def random_topology(rng: random.Random, universe, chain: Chain, seeds: int = 2) -> MvTopology:
    """Close a few random tables, plus 0 and 1, under all four operations."""
    universe = tuple(universe)
    sig = ProductSignature.power(chain.order, len(universe))
    picks = [tuple(rng.randrange(chain.order) for _ in universe) for _ in range(seeds)]
    fam = close_under([sig.zero, sig.one, *picks], [sig.join, sig.oplus, sig.odot, sig.meet])
    return MvTopology(universe, chain, fam)


def random_topologies(seed: int, count: int = 500, max_points: int = 3, max_order: int = 4) -> list[MvTopology]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_points)
        order = rng.randint(2, max_order)
        out.append(random_topology(rng, [f"x{i}" for i in range(n)], Chain(order), rng.randint(1, 3)))
    return out


@lru_cache(maxsize=None)
def corpus_topologies() -> tuple[tuple[str, MvTopology], ...]:
    from .duality import max_space

    out = []
    for A in corpus_algebras():
        out.append((f"Max {A.name}", max_space(A).space))
    for n in range(1, 5):
        pts = tuple("pqrs"[:n])
        out.append((f"discrete {n}", discrete_crisp(pts, Chain(2))))
        out.append((f"discrete {n} over L3", discrete_crisp(pts, Chain(3))))
    pts2 = ("p", "q")
    out.append(("indiscrete L3", indiscrete(pts2, Chain(3))))
    out.append(("constants L4", constant_topology(pts2, Chain(4))))
    out.append(("full L3", full_topology(pts2, Chain(3))))
    sig = ProductSignature.power(3, 2)
    base = close_under([sig.zero, sig.one, (1, 0)], [sig.oplus, sig.odot, sig.meet])
    out.append(("base L3", generate_from_base(pts2, Chain(3), base)))
    d = {("p", "q"): Fraction(1, 2), ("q", "r"): Fraction(1, 2), ("p", "r"): Fraction(1)}
    balls = metric_ball_base(("p", "q", "r"), d, Chain(3), [Fraction(1, 2), Fraction(1)])
    out.append(("balls L3", balls.topology))
    return tuple(out)

