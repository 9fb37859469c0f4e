"""Cycle-index polynomials in x_1, x_2, ... truncated by total weight.

A ``CycleIndex`` maps integer partitions (numkit multiplicity tuples) to
exact fix-values; the polynomial it denotes is

    sum over lam of  fix[lam] * x^lam / aut(lam).

Keys of weight above the bound are rejected and zero values are never
stored, so for an actual species every stored value is a positive
integer.  The arithmetic-product rule and the Hadamard rule act directly
on fix-values; the product, plethysm and arithmetic product convert to
monomial coefficients (fix/aut) internally and convert back at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from . import numkit as nk
from .errors import CompositionError, DomainError, UnknownAtom, ZeroConstantRequired
from .series import TruncSeries

_ZERO = Fraction(0)


class CycleIndex:
    __slots__ = ("bound", "fix")

    def __init__(self, bound, fix=None):
        if bound < 0:
            raise DomainError(f"weight bound must be >= 0, got {bound}")
        self.bound = bound
        store = {}
        for lam, v in (fix or {}).items():
            lam = tuple(lam)
            if lam and lam[-1] == 0:
                raise DomainError(f"partition key {lam} has trailing zeros")
            if any(m < 0 for m in lam):
                raise DomainError(f"partition key {lam} has negative multiplicity")
            if nk.weight(lam) > bound:
                raise DomainError(f"key {lam} exceeds weight bound {bound}")
            v = Fraction(v)
            if v:
                store[lam] = v
        self.fix = store

    def fix_value(self, lam):
        return self.fix.get(tuple(lam), _ZERO)

    def coeff(self, lam):
        """Monomial coefficient fix[lam]/aut(lam)."""
        lam = tuple(lam)
        return self.fix.get(lam, _ZERO) / nk.aut(lam)

    def rows(self):
        """(partition, fix, monomial coefficient) triples in canonical order."""
        out = []
        for w in range(self.bound + 1):
            for lam in nk.int_partitions(w):
                if lam in self.fix:
                    out.append((lam, self.fix[lam], self.fix[lam] / nk.aut(lam)))
        return out

    def __eq__(self, other):
        if not isinstance(other, CycleIndex):
            return NotImplemented
        return self.bound == other.bound and self.fix == other.fix

    def __hash__(self):
        return hash((self.bound, frozenset(self.fix.items())))

    def __repr__(self):
        return f"CycleIndex(bound={self.bound}, terms={len(self.fix)})"


def partition_label(lam) -> str:
    """Render a partition as ``1^a 2^b ...``; the empty partition as ``()``."""
    if not lam:
        return "()"
    return " ".join(f"{i}^{m}" for i, m in enumerate(lam, 1) if m)


def zi_zero(bound: int) -> CycleIndex:
    return CycleIndex(bound, {})


def zi_atom(name: str, bound: int, k: int | None = None) -> CycleIndex:
    """Cycle index of a named atom, exact to the weight bound.

    Names: ``1 X E Ep Ek L Lp C S Sp``; ``Ek`` needs the extra size k.
    """
    fix = {}
    if name == "1":
        fix[()] = 1
    elif name == "X":
        if bound >= 1:
            fix[(1,)] = 1
    elif name in ("E", "Ep"):
        for w in range(0 if name == "E" else 1, bound + 1):
            for lam in nk.int_partitions(w):
                fix[lam] = 1
    elif name == "Ek":
        if k is None or k < 0:
            raise DomainError("Ek needs a size k >= 0")
        if k <= bound:
            for lam in nk.int_partitions(k):
                fix[lam] = 1
    elif name in ("L", "Lp"):
        for n in range(0 if name == "L" else 1, bound + 1):
            fix[(n,) if n else ()] = nk.factorial(n)
    elif name == "C":
        for d in range(1, bound + 1):
            for m in range(1, bound // d + 1):
                lam = (0,) * (d - 1) + (m,)
                fix[lam] = nk.euler_phi(d) * d ** (m - 1) * nk.factorial(m - 1)
    elif name in ("S", "Sp"):
        for w in range(0 if name == "S" else 1, bound + 1):
            for lam in nk.int_partitions(w):
                fix[lam] = nk.aut(lam)
    else:
        raise UnknownAtom(f"no cycle index for atom {name!r}")
    return CycleIndex(bound, fix)


def zi_add(p: CycleIndex, q: CycleIndex) -> CycleIndex:
    bound = min(p.bound, q.bound)
    fix = {}
    for lam in set(p.fix) | set(q.fix):
        if nk.weight(lam) <= bound:
            fix[lam] = p.fix_value(lam) + q.fix_value(lam)
    return CycleIndex(bound, fix)


def zi_hadamard(p: CycleIndex, q: CycleIndex) -> CycleIndex:
    """fix-wise product: structures on both sides fixed by the same permutation."""
    bound = min(p.bound, q.bound)
    fix = {}
    for lam, v in p.fix.items():
        if lam in q.fix and nk.weight(lam) <= bound:
            fix[lam] = v * q.fix[lam]
    return CycleIndex(bound, fix)


def zi_point(p: CycleIndex) -> CycleIndex:
    """Pointing: multiply each fix-value by the number of fixed points m_1."""
    fix = {}
    for lam, v in p.fix.items():
        if lam and lam[0]:
            fix[lam] = lam[0] * v
    return CycleIndex(p.bound, fix)


def _add_mult(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, m in enumerate(a):
        out[i] += m
    for i, m in enumerate(b):
        out[i] += m
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _scale_parts(lam, factor):
    """Multiply every part size by factor: m'_(factor*i) = m_i."""
    if not lam or factor == 1:
        return tuple(lam)
    out = [0] * (factor * len(lam))
    for i, m in enumerate(lam, start=1):
        if m:
            out[factor * i - 1] = m
    return tuple(out)


def _mono_mul(a, b, bound):
    out = {}
    for la, ca in a.items():
        wa = nk.weight(la)
        for lb, cb in b.items():
            if wa + nk.weight(lb) > bound:
                continue
            key = _add_mult(la, lb)
            out[key] = out.get(key, _ZERO) + ca * cb
    return {k: v for k, v in out.items() if v}


def _monomials(p, bound):
    return {
        lam: v / nk.aut(lam)
        for lam, v in p.fix.items()
        if nk.weight(lam) <= bound
    }


def _from_monomials(bound, mono):
    return CycleIndex(bound, {lam: c * nk.aut(lam) for lam, c in mono.items() if c})


def zi_mul(p: CycleIndex, q: CycleIndex) -> CycleIndex:
    """Species product: polynomial multiplication in the x^lam basis."""
    bound = min(p.bound, q.bound)
    return _from_monomials(bound, _mono_mul(_monomials(p, bound), _monomials(q, bound), bound))


def zi_plethysm(p: CycleIndex, q: CycleIndex) -> CycleIndex:
    """Plethystic substitution: x_i in p becomes q(x_i, x_2i, x_3i, ...)."""
    if any(nk.weight(lam) == 0 for lam in q.fix):
        raise CompositionError("plethysm inner series has a weight-0 term")
    bound = min(p.bound, q.bound)
    qmono = _monomials(q, bound)
    scaled = {}

    def q_scaled(i):
        if i not in scaled:
            scaled[i] = {
                _scale_parts(lam, i): c
                for lam, c in qmono.items()
                if nk.weight(lam) * i <= bound
            }
        return scaled[i]

    acc = {}
    for lam, v in p.fix.items():
        if nk.weight(lam) > bound:
            continue
        poly = {(): Fraction(1)}
        for part in nk.mult_to_parts(lam):
            poly = _mono_mul(poly, q_scaled(part), bound)
            if not poly:
                break
        c = v / nk.aut(lam)
        for mu, cm in poly.items():
            acc[mu] = acc.get(mu, _ZERO) + c * cm
    return _from_monomials(bound, acc)


def box_type(beta, gamma) -> tuple[int, ...]:
    """Cycle type of the product permutation: alpha_k = sum over lcm(i,l)=k of gcd(i,l) b_i g_l."""
    acc = {}
    for i, bi in enumerate(beta, start=1):
        if not bi:
            continue
        for l, gl in enumerate(gamma, start=1):
            if not gl:
                continue
            g = gcd(i, l)
            k = i * l // g
            acc[k] = acc.get(k, 0) + g * bi * gl
    if not acc:
        return ()
    out = [0] * max(acc)
    for k, m in acc.items():
        out[k - 1] = m
    return tuple(out)


def zi_aprod(p: CycleIndex, q: CycleIndex) -> CycleIndex:
    """Arithmetic product of index series: x^beta boxed x^gamma = x^(beta box gamma).

    Both operands must have no weight-0 term; output term weights are the
    products of the input term weights.
    """
    for r in (p, q):
        if any(nk.weight(lam) == 0 for lam in r.fix):
            raise ZeroConstantRequired("arithmetic product of index series needs no weight-0 term")
    bound = min(p.bound, q.bound)
    acc = {}
    for lb, vb in p.fix.items():
        wb = nk.weight(lb)
        if wb > bound:
            continue
        cb = vb / nk.aut(lb)
        for lg, vg in q.fix.items():
            if wb * nk.weight(lg) > bound:
                continue
            alpha = box_type(lb, lg)
            acc[alpha] = acc.get(alpha, _ZERO) + cb * (vg / nk.aut(lg))
    return _from_monomials(bound, acc)


def zi_to_egf(p: CycleIndex, order: int) -> TruncSeries:
    """Specialize x_1 <- x, the rest 0: the exponential series."""
    if order > p.bound:
        raise DomainError(f"order {order} exceeds weight bound {p.bound}")
    cs = []
    for n in range(order + 1):
        lam = (n,) if n else ()
        cs.append(p.fix.get(lam, _ZERO) / nk.factorial(n))
    return TruncSeries(cs)


def zi_to_ogf(p: CycleIndex, order: int) -> TruncSeries:
    """Specialize x_i <- x^i: the isomorphism-types series."""
    if order > p.bound:
        raise DomainError(f"order {order} exceeds weight bound {p.bound}")
    cs = [_ZERO] * (order + 1)
    for lam, v in p.fix.items():
        w = nk.weight(lam)
        if w <= order:
            cs[w] += v / nk.aut(lam)
    return TruncSeries(cs)
