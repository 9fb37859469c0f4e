"""Shared generators for randomized law tests (seeded, deterministic)."""

import random
from fractions import Fraction

from specalc import species as sp
from specalc.series import TruncSeries


def rand_series(rng: random.Random, order: int, zero_const: bool = False) -> TruncSeries:
    cs = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(order + 1)]
    if zero_const:
        cs[0] = Fraction(0)
    return TruncSeries(cs)


# operand pools: species with no structure on the empty set (valid for the
# arithmetic product) and unrestricted species (for the modified product)
EMPTYFREE_POOL = [
    sp.X(),
    sp.Eplus(),
    sp.Lplus(),
    sp.C(),
    sp.Splus(),
    sp.XPow(2),
    sp.XPow(3),
    sp.Ek(2),
    sp.Necklace(2),
    sp.AperiodicNecklace(2),
    sp.Point(sp.Eplus()),
    sp.Restrict(sp.S(), 3),
    sp.NonEmpty(sp.L()),
]

ANY_POOL = EMPTYFREE_POOL + [
    sp.One(),
    sp.E(),
    sp.L(),
    sp.S(),
    sp.OnePlusXPow(2),
    sp.Derivative(sp.C()),
]


def rand_emptyfree(rng: random.Random, depth: int = 2) -> sp.SpeciesExpr:
    """Random species with no empty-set structures, closed under + and the products."""
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(EMPTYFREE_POOL)
    op = rng.choice(("sum", "aprod", "prod_x"))
    a = rand_emptyfree(rng, depth - 1)
    b = rand_emptyfree(rng, depth - 1)
    if op == "sum":
        return sp.Sum(a, b)
    if op == "aprod":
        return sp.AProd(a, b)
    # a product with at least one empty-free factor stays empty-free
    return sp.Prod(a, rng.choice(ANY_POOL))


def rand_any(rng: random.Random, depth: int = 2) -> sp.SpeciesExpr:
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(ANY_POOL)
    op = rng.choice(("sum", "prod", "maprod"))
    a = rand_any(rng, depth - 1)
    b = rand_any(rng, depth - 1)
    if op == "sum":
        return sp.Sum(a, b)
    if op == "prod":
        return sp.Prod(a, b)
    return sp.MAProd(a, b)
