"""Brute-force, set-level ground truth for every formula in the package.

Structures are canonical nested tuples with a total order, so lists of
structures are duplicate-free and deterministic, Fix counts are honest
counts of equalities, and oracle dumps reproduce byte for byte.

Labels may be ints, strings, or tuples of labels (blocks of a partition
act as labels one level up); ``_key`` gives them a single total order.
Scale limits are the named constants below and raising past them is a
``ScaleLimit`` error, never silent truncation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import NamedTuple

from . import numkit as nk
from . import species as sp
from .errors import DomainError, DomainMismatch, ScaleLimit, UnsupportedAtom

SET_PARTITION_LIMIT = 10   # largest ground set partitions_of will expand
ENUM_LIMIT = 8             # largest ground set for structure enumeration / rectangles
PARTIAL_CANDIDATES = 2_000_000  # cap on Bell(n)^k tuples scanned for partial rectangles
MATRIX_CELL_LIMIT = 20     # cap on m*n for 0/1-matrix enumeration
NECKLACE_ALPHABET_LIMIT = 3

STAR = "*"  # the label a derivative adjoins; nesting extends it to stay fresh


def _fresh_star(labels) -> str:
    star = STAR
    present = set(labels)
    while star in present:
        star += STAR
    return star


def _key(v):
    if isinstance(v, tuple):
        return (2, tuple(_key(x) for x in v))
    if isinstance(v, str):
        return (1, v)
    return (0, v)


def canon_labels(labels) -> tuple:
    return tuple(sorted(labels, key=_key))


def canon_partition(blocks) -> tuple:
    return tuple(sorted((canon_labels(b) for b in blocks), key=_key))


class Rect(NamedTuple):
    pi: tuple
    tau: tuple


# -- partitions ------------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions_of(labels) -> tuple:
    """All set partitions of a canonical label tuple, deterministic order."""
    if len(labels) > SET_PARTITION_LIMIT:
        raise ScaleLimit(f"partitions of {len(labels)} labels exceeds limit {SET_PARTITION_LIMIT}")
    if not labels:
        return ((),)
    first, rest = labels[0], labels[1:]
    out = []
    for part in partitions_of(rest):
        out.append(canon_partition(((first,),) + part))
        for i in range(len(part)):
            grown = part[:i] + (canon_labels(part[i] + (first,)),) + part[i + 1 :]
            out.append(canon_partition(grown))
    return tuple(out)


def set_partitions(n: int):
    """All partitions of {1..n}."""
    if n > SET_PARTITION_LIMIT:
        raise ScaleLimit(f"set_partitions({n}) exceeds limit {SET_PARTITION_LIMIT}")
    if n < 0:
        raise DomainError("negative ground set size")
    return list(partitions_of(tuple(range(1, n + 1))))


def meet(p, q):
    """Common refinement of two partitions of the same set."""
    block_of_q = {u: j for j, b in enumerate(q) for u in b}
    groups = {}
    for i, b in enumerate(p):
        for u in b:
            groups.setdefault((i, block_of_q[u]), []).append(u)
    return canon_partition(tuple(tuple(g) for g in groups.values()))


def is_finest(p) -> bool:
    return all(len(b) == 1 for b in p)


def is_rectangle(p, q) -> bool:
    """Every block of p meets every block of q in exactly one element."""
    for a in p:
        sa = set(a)
        for b in q:
            if len(sa.intersection(b)) != 1:
                return False
    return True


# -- rectangles -------------------------------------------------------------------

def _ordered_factorizations(n, k):
    if k == 0:
        return [()] if n == 1 else []
    out = []
    for d in nk.divisors(n):
        for rest in _ordered_factorizations(n // d, k - 1):
            out.append((d,) + rest)
    return out


@lru_cache(maxsize=None)
def _k_rectangles_of(labels, k):
    """All k-tuples of pairwise-gridding partitions, built from grid fillings.

    The first label is pinned to the zero cell of each grid shape; axis
    relabelings make that a complete set of representatives, and the seen
    set removes the leftover symmetry.
    """
    n = len(labels)
    if n == 0:
        return (tuple(() for _ in range(k)),)
    out, seen = [], set()
    for shape in _ordered_factorizations(n, k):
        cells = list(product(*(range(d) for d in shape)))
        rest = labels[1:]
        for perm in permutations(rest):
            fill = {cells[0]: labels[0]}
            fill.update(zip(cells[1:], perm))
            axes = []
            for j, d in enumerate(shape):
                blocks = [[] for _ in range(d)]
                for cell, lab in fill.items():
                    blocks[cell[j]].append(lab)
                axes.append(canon_partition(tuple(tuple(b) for b in blocks)))
            tup = tuple(axes)
            if tup not in seen:
                seen.add(tup)
                out.append(tup)
    return tuple(out)


def rectangles_of(labels):
    labels = canon_labels(labels)
    if len(labels) > ENUM_LIMIT:
        raise ScaleLimit(f"rectangles on {len(labels)} labels exceeds limit {ENUM_LIMIT}")
    return [Rect(p, t) for p, t in _k_rectangles_of(labels, 2)]


def rectangles(n: int):
    """All rectangles (pi, tau) on {1..n}."""
    return rectangles_of(range(1, n + 1))


def k_rectangles(n: int, k: int):
    if n > ENUM_LIMIT:
        raise ScaleLimit(f"k_rectangles({n}) exceeds limit {ENUM_LIMIT}")
    if k < 1:
        raise DomainError("dimension k must be >= 1")
    return list(_k_rectangles_of(tuple(range(1, n + 1)), k))


def partial_rectangles_of(labels):
    labels = canon_labels(labels)
    parts = partitions_of(labels)
    if len(parts) ** 2 > PARTIAL_CANDIDATES:
        raise ScaleLimit(f"{len(parts)}^2 partition pairs exceed limit {PARTIAL_CANDIDATES}")
    return [
        Rect(p, q)
        for p in parts
        for q in parts
        if is_finest(meet(p, q))
    ]


def partial_rectangles(n: int):
    return partial_rectangles_of(range(1, n + 1))


def k_partial_rectangles(n: int, k: int):
    if k < 1:
        raise DomainError("dimension k must be >= 1")
    parts = set_partitions(n)
    if len(parts) ** k > PARTIAL_CANDIDATES:
        raise ScaleLimit(f"{len(parts)}^{k} partition tuples exceed limit {PARTIAL_CANDIDATES}")
    out = []
    for tup in product(parts, repeat=k):
        m = tup[0]
        for q in tup[1:]:
            m = meet(m, q)
        if is_finest(m):
            out.append(tup)
    return out


# -- structure enumeration -----------------------------------------------------------

def enumerate_structures(expr, labels):
    """Every structure of the expression on the label set, each exactly once."""
    sp.validate(expr)
    labels = canon_labels(labels)
    if len(set(labels)) != len(labels):
        raise DomainError("labels must be distinct")
    if len(labels) > ENUM_LIMIT:
        raise ScaleLimit(f"enumeration on {len(labels)} labels exceeds limit {ENUM_LIMIT}")
    return list(_enum(expr, labels))


@lru_cache(maxsize=None)
def _enum(expr, labels):
    n = len(labels)
    if isinstance(expr, sp.One):
        return (("one",),) if n == 0 else ()
    if isinstance(expr, sp.X):
        return (("x", labels[0]),) if n == 1 else ()
    if isinstance(expr, sp.E):
        return (("set", labels),)
    if isinstance(expr, sp.Eplus):
        return (("set", labels),) if n else ()
    if isinstance(expr, sp.Ek):
        return (("set", labels),) if n == expr.k else ()
    if isinstance(expr, (sp.L, sp.Lplus, sp.XPow)):
        if isinstance(expr, sp.Lplus) and n == 0:
            return ()
        if isinstance(expr, sp.XPow) and n != expr.n:
            return ()
        return tuple(("list", p) for p in permutations(labels))
    if isinstance(expr, (sp.C,)):
        if n == 0:
            return ()
        return tuple(("cycle", (labels[0],) + p) for p in permutations(labels[1:]))
    if isinstance(expr, (sp.S, sp.Splus)):
        if isinstance(expr, sp.Splus) and n == 0:
            return ()
        return tuple(
            ("perm", tuple(zip(labels, p))) for p in permutations(labels)
        )
    if isinstance(expr, sp.OnePlusXPow):
        return tuple(
            ("inj", tuple(zip(labels, img)))
            for img in permutations(range(1, expr.n + 1), n)
        )
    if isinstance(expr, (sp.Necklace, sp.AperiodicNecklace)):
        if expr.alpha > NECKLACE_ALPHABET_LIMIT:
            raise UnsupportedAtom(
                f"necklace alphabet {expr.alpha} exceeds limit {NECKLACE_ALPHABET_LIMIT}"
            )
        if n == 0:
            return ()
        out = []
        aperiodic_only = isinstance(expr, sp.AperiodicNecklace)
        for p in permutations(labels[1:]):
            cyc = (labels[0],) + p
            for colors in product(range(expr.alpha), repeat=n):
                if aperiodic_only and _necklace_period(colors) != n:
                    continue
                out.append(("necklace", cyc, colors))
        return tuple(out)
    if isinstance(expr, sp.Sum):
        return tuple(("inl", s) for s in _enum(expr.f, labels)) + tuple(
            ("inr", s) for s in _enum(expr.g, labels)
        )
    if isinstance(expr, sp.Prod):
        out = []
        for r in range(n + 1):
            for left in combinations(labels, r):
                right = tuple(u for u in labels if u not in left)
                for s1 in _enum(expr.f, left):
                    for s2 in _enum(expr.g, right):
                        out.append(("prod", left, s1, right, s2))
        return tuple(out)
    if isinstance(expr, sp.Cartesian):
        return tuple(
            ("cart", s1, s2)
            for s1 in _enum(expr.f, labels)
            for s2 in _enum(expr.g, labels)
        )
    if isinstance(expr, sp.Subst):
        out = []
        for part in partitions_of(labels):
            inner_lists = [_enum(expr.g, b) for b in part]
            if any(not lst for lst in inner_lists):
                continue
            for souter in _enum(expr.f, canon_labels(part)):
                for inners in product(*inner_lists):
                    out.append(("subst", part, souter, inners))
        return tuple(out)
    if isinstance(expr, sp.AProd):
        out = []
        for rect in rectangles_of(labels):
            for m in _enum(expr.f, canon_labels(rect.pi)):
                for t in _enum(expr.g, canon_labels(rect.tau)):
                    out.append(("aprod", rect.pi, rect.tau, m, t))
        return tuple(out)
    if isinstance(expr, sp.MAProd):
        out = []
        for rect in partial_rectangles_of(labels):
            for m in _enum(expr.f, canon_labels(rect.pi)):
                for t in _enum(expr.g, canon_labels(rect.tau)):
                    out.append(("maprod", rect.pi, rect.tau, m, t))
        return tuple(out)
    if isinstance(expr, sp.Derivative):
        star = _fresh_star(labels)
        return tuple(
            ("deriv", s) for s in _enum(expr.f, canon_labels(labels + (star,)))
        )
    if isinstance(expr, sp.Point):
        return tuple(
            ("point", u, s) for u in labels for s in _enum(expr.f, labels)
        )
    if isinstance(expr, sp.NonEmpty):
        return _enum(expr.f, labels) if n else ()
    if isinstance(expr, sp.Restrict):
        return _enum(expr.f, labels) if n == expr.n else ()
    if isinstance(expr, sp.HCT):
        # root pinned to the least label: structures then follow the divisor
        # recursion exactly (a freely chosen root would multiply counts by n)
        if n == 0:
            return ()
        if n == 1:
            return (("hct", labels[0], None),)
        rest = labels[1:]
        inner = sp.AProd(sp.NonEmpty(expr.r), expr)
        return tuple(("hct", labels[0], s) for s in _enum(inner, rest))
    raise UnsupportedAtom(f"oracle cannot enumerate {type(expr).__name__}")


def _necklace_period(colors):
    n = len(colors)
    for d in nk.divisors(n):
        if colors == colors[d:] + colors[:d]:
            return d
    raise AssertionError("rotation by n always fixes the coloring")


# -- transport ------------------------------------------------------------------------

def transport(expr, structure, bij):
    """Relabel a structure along a bijection, per the transport rules."""
    values = list(bij.values())
    if len(set(values)) != len(values):
        raise DomainMismatch("mapping is not injective")
    return _transport(expr, structure, dict(bij))


def _apply(bij, u):
    try:
        return bij[u]
    except KeyError:
        raise DomainMismatch(f"label {u!r} not in the bijection's domain") from None


def _map_block(bij, block):
    return canon_labels(_apply(bij, u) for u in block)


def _map_partition(bij, part):
    return canon_partition(tuple(_map_block(bij, b) for b in part))


def _block_bijection(bij, part):
    return {b: _map_block(bij, b) for b in part}


def _transport(expr, s, bij):
    if isinstance(expr, (sp.One,)):
        return s
    if isinstance(expr, sp.X):
        return ("x", _apply(bij, s[1]))
    if isinstance(expr, (sp.E, sp.Eplus, sp.Ek)):
        return ("set", _map_block(bij, s[1]))
    if isinstance(expr, (sp.L, sp.Lplus, sp.XPow)):
        return ("list", tuple(_apply(bij, u) for u in s[1]))
    if isinstance(expr, sp.C):
        return ("cycle", _canon_cycle(tuple(_apply(bij, u) for u in s[1])))
    if isinstance(expr, (sp.S, sp.Splus)):
        pairs = tuple((_apply(bij, a), _apply(bij, b)) for a, b in s[1])
        return ("perm", tuple(sorted(pairs, key=lambda ab: _key(ab[0]))))
    if isinstance(expr, sp.OnePlusXPow):
        pairs = tuple((_apply(bij, a), v) for a, v in s[1])
        return ("inj", tuple(sorted(pairs, key=lambda av: _key(av[0]))))
    if isinstance(expr, (sp.Necklace, sp.AperiodicNecklace)):
        cyc = tuple(_apply(bij, u) for u in s[1])
        rot = min(range(len(cyc)), key=lambda i: _key(cyc[i]))
        return (
            "necklace",
            cyc[rot:] + cyc[:rot],
            s[2][rot:] + s[2][:rot],
        )
    if isinstance(expr, sp.Sum):
        tag, inner = s
        return (tag, _transport(expr.f if tag == "inl" else expr.g, inner, bij))
    if isinstance(expr, sp.Prod):
        _, left, s1, right, s2 = s
        return (
            "prod",
            _map_block(bij, left),
            _transport(expr.f, s1, bij),
            _map_block(bij, right),
            _transport(expr.g, s2, bij),
        )
    if isinstance(expr, sp.Cartesian):
        return ("cart", _transport(expr.f, s[1], bij), _transport(expr.g, s[2], bij))
    if isinstance(expr, sp.Subst):
        _, part, souter, inners = s
        bb = _block_bijection(bij, part)
        new_part = canon_partition(tuple(bb.values()))
        new_outer = _transport(expr.f, souter, bb)
        moved = sorted(
            ((bb[b], _transport(expr.g, inner, bij)) for b, inner in zip(part, inners)),
            key=lambda bi: _key(bi[0]),
        )
        return ("subst", new_part, new_outer, tuple(i for _, i in moved))
    if isinstance(expr, (sp.AProd, sp.MAProd)):
        tag, pi, tau, m, t = s
        bpi = _block_bijection(bij, pi)
        btau = _block_bijection(bij, tau)
        return (
            tag,
            canon_partition(tuple(bpi.values())),
            canon_partition(tuple(btau.values())),
            _transport(expr.f, m, bpi),
            _transport(expr.g, t, btau),
        )
    if isinstance(expr, sp.Derivative):
        inner_bij = dict(bij)
        inner_bij[_fresh_star(bij.keys())] = _fresh_star(bij.values())
        return ("deriv", _transport(expr.f, s[1], inner_bij))
    if isinstance(expr, sp.Point):
        return ("point", _apply(bij, s[1]), _transport(expr.f, s[2], bij))
    if isinstance(expr, (sp.NonEmpty, sp.Restrict)):
        return _transport(expr.f, s, bij)
    if isinstance(expr, sp.HCT):
        _, root, sub = s
        if sub is None:
            return ("hct", _apply(bij, root), None)
        inner = sp.AProd(sp.NonEmpty(expr.r), expr)
        return ("hct", _apply(bij, root), _transport(inner, sub, bij))
    raise UnsupportedAtom(f"oracle cannot transport {type(expr).__name__}")


def _canon_cycle(cyc):
    rot = min(range(len(cyc)), key=lambda i: _key(cyc[i]))
    return cyc[rot:] + cyc[:rot]


# -- fix counts and Burnside ------------------------------------------------------------

def fix_count(expr, sigma) -> int:
    """Number of structures left fixed when transported along the permutation."""
    sp.validate(expr)
    labels = canon_labels(sigma.keys())
    if canon_labels(sigma.values()) != labels:
        raise DomainMismatch("sigma is not a permutation of its domain")
    if len(labels) > ENUM_LIMIT:
        raise ScaleLimit(f"fix count on {len(labels)} labels exceeds limit {ENUM_LIMIT}")
    return sum(1 for s in _enum(expr, labels) if _transport(expr, s, sigma) == s)


def perm_of_type(lam) -> dict:
    """A representative permutation of the cycle type on {1..weight}."""
    sigma = {}
    start = 1
    for part in nk.mult_to_parts(lam):
        cyc = list(range(start, start + part))
        for i, u in enumerate(cyc):
            sigma[u] = cyc[(i + 1) % part]
        start += part
    return sigma


def fix_by_type(expr, lam) -> int:
    """Fix count at any permutation of the cycle type (conjugation-invariant)."""
    sp.validate(expr)
    return fix_count(expr, perm_of_type(lam))


def orbit_type_count(expr, n: int) -> int:
    """Number of isomorphism types on an n-set, by averaging fix counts."""
    sp.validate(expr)
    total = Fraction(0)
    for lam in nk.int_partitions(n):
        total += Fraction(fix_count(expr, perm_of_type(lam)), nk.aut(lam))
    assert total.denominator == 1
    return int(total)


# -- matrices and induced permutations ----------------------------------------------------

def matrices_01(m: int, n: int, r: int) -> int:
    """m x n (0,1)-matrices with r ones and no zero row or column, exhaustively."""
    if m < 0 or n < 0 or r < 0:
        raise DomainError("matrix parameters must be nonnegative")
    if m * n > MATRIX_CELL_LIMIT:
        raise ScaleLimit(f"{m}x{n} grid exceeds {MATRIX_CELL_LIMIT} cells")
    cells = [(i, j) for i in range(m) for j in range(n)]
    count = 0
    for chosen in combinations(cells, r):
        if len({i for i, _ in chosen}) == m and len({j for _, j in chosen}) == n:
            count += 1
    return count


def box_perm(rect: Rect, sigma1, sigma2) -> dict:
    """Permutation induced by block permutations on the two sides of a rectangle."""
    pi_of = {u: b for b in rect.pi for u in b}
    tau_of = {u: b for b in rect.tau for u in b}
    out = {}
    for u in pi_of:
        image = set(sigma1[pi_of[u]]).intersection(sigma2[tau_of[u]])
        assert len(image) == 1
        out[u] = next(iter(image))
    return out


def tuple_decompositions(sigma):
    """All (rect, sigma1, sigma2) whose induced permutation is sigma."""
    labels = canon_labels(sigma.keys())
    if len(labels) > ENUM_LIMIT:
        raise ScaleLimit(f"{len(labels)} labels exceeds limit {ENUM_LIMIT}")
    out = []
    for rect in rectangles_of(labels):
        for p1 in permutations(rect.pi):
            s1 = dict(zip(rect.pi, p1))
            for p2 in permutations(rect.tau):
                s2 = dict(zip(rect.tau, p2))
                if box_perm(rect, s1, s2) == sigma:
                    out.append((rect, s1, s2))
    return out
