"""Species expressions and their evaluators.

The expression tree is the single source every backend consumes: the
exponential/count evaluator, the cycle-index evaluator (and through it
the isomorphism-types series), the hyper-cloned tree recursion, the
multiplicativity tools, and the closed-form matrix/partial-rectangle
counting formulas.

Counts are plain ``list[int]`` indexed by size; the evaluators assert the
exactness invariant (every labelled count is a nonnegative integer)
before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import numkit as nk
from . import zindex as zi
from .errors import (
    DomainError,
    IncompleteData,
    PreconditionViolated,
    UnsupportedForCycleIndex,
)
from .series import (
    TruncSeries,
    aprod_egf,
    compose,
    exp_series,
    geom_power,
    hadamard,
    log1p_series,
    maprod_egf,
)


# -- the expression tree -------------------------------------------------------

class SpeciesExpr:
    """Base class for expression nodes; all nodes are frozen and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class One(SpeciesExpr):
    """The empty-set species 1."""


@dataclass(frozen=True)
class X(SpeciesExpr):
    """Singletons."""


@dataclass(frozen=True)
class E(SpeciesExpr):
    """Sets."""


@dataclass(frozen=True)
class Eplus(SpeciesExpr):
    """Nonempty sets."""


@dataclass(frozen=True)
class L(SpeciesExpr):
    """Linear orders."""


@dataclass(frozen=True)
class Lplus(SpeciesExpr):
    """Nonempty linear orders."""


@dataclass(frozen=True)
class C(SpeciesExpr):
    """Oriented cycles."""


@dataclass(frozen=True)
class S(SpeciesExpr):
    """Permutations."""


@dataclass(frozen=True)
class Splus(SpeciesExpr):
    """Nonempty permutations."""


@dataclass(frozen=True)
class Ek(SpeciesExpr):
    """Sets of a fixed size k."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"Ek needs k >= 0, got {self.k}")


@dataclass(frozen=True)
class XPow(SpeciesExpr):
    """n-th power of the singleton species: sequences of n labels."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"Xpow needs n >= 0, got {self.n}")


@dataclass(frozen=True)
class OnePlusXPow(SpeciesExpr):
    """(1+X)^[n]: injective functions into an n-set."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"OnePlusXpow needs n >= 0, got {self.n}")


@dataclass(frozen=True)
class Necklace(SpeciesExpr):
    """Cycles whose beads carry one of alpha colors."""

    alpha: int

    def __post_init__(self):
        if self.alpha < 0:
            raise DomainError(f"necklace needs alpha >= 0, got {self.alpha}")


@dataclass(frozen=True)
class AperiodicNecklace(SpeciesExpr):
    """Colored cycles of full period."""

    alpha: int

    def __post_init__(self):
        if self.alpha < 0:
            raise DomainError(f"aperiodic needs alpha >= 0, got {self.alpha}")


@dataclass(frozen=True)
class Derivative(SpeciesExpr):
    f: SpeciesExpr


@dataclass(frozen=True)
class Point(SpeciesExpr):
    f: SpeciesExpr


@dataclass(frozen=True)
class NonEmpty(SpeciesExpr):
    f: SpeciesExpr


@dataclass(frozen=True)
class Restrict(SpeciesExpr):
    """The species concentrated in cardinality n."""

    f: SpeciesExpr
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"restrict needs n >= 0, got {self.n}")


@dataclass(frozen=True)
class Sum(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class Prod(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class Cartesian(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class Subst(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class AProd(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class MAProd(SpeciesExpr):
    f: SpeciesExpr
    g: SpeciesExpr


@dataclass(frozen=True)
class HCT(SpeciesExpr):
    """Hyper-cloned rooted trees enriched by r."""

    r: SpeciesExpr


def children(expr: SpeciesExpr) -> tuple[SpeciesExpr, ...]:
    if isinstance(expr, (Derivative, Point, NonEmpty, Restrict)):
        return (expr.f,)
    if isinstance(expr, (Sum, Prod, Cartesian, Subst, AProd, MAProd)):
        return (expr.f, expr.g)
    if isinstance(expr, HCT):
        return (expr.r,)
    return ()


# -- preconditions -------------------------------------------------------------

@lru_cache(maxsize=None)
def empty_count(expr: SpeciesExpr) -> int:
    """Number of structures on the empty set."""
    if isinstance(expr, (One, E, L, S, OnePlusXPow)):
        return 1
    if isinstance(expr, Ek):
        return 1 if expr.k == 0 else 0
    if isinstance(expr, XPow):
        return 1 if expr.n == 0 else 0
    if isinstance(expr, (X, Eplus, Lplus, C, Splus, Necklace, AperiodicNecklace)):
        return 0
    if isinstance(expr, Sum):
        return empty_count(expr.f) + empty_count(expr.g)
    if isinstance(expr, (Prod, Cartesian, MAProd)):
        return empty_count(expr.f) * empty_count(expr.g)
    if isinstance(expr, Subst):
        return empty_count(expr.f)
    if isinstance(expr, AProd):
        return 0
    if isinstance(expr, Derivative):
        return int(_egf(expr.f, 1).count(1))
    if isinstance(expr, (Point, NonEmpty, HCT)):
        return 0
    if isinstance(expr, Restrict):
        return empty_count(expr.f) if expr.n == 0 else 0
    raise DomainError(f"unknown expression node {expr!r}")


def validate(expr: SpeciesExpr) -> None:
    """Eagerly check the emptiness preconditions everywhere in the tree.

    Arithmetic-product operands and substitution inner operands must have
    no structures on the empty set; the first offender is reported with
    its node path.
    """

    def rec(node, path):
        for i, ch in enumerate(children(node)):
            rec(ch, path + (i,))
        if isinstance(node, AProd):
            for i, ch in enumerate((node.f, node.g)):
                if empty_count(ch):
                    raise PreconditionViolated(
                        path + (i,),
                        "arithmetic product operand has structures on the empty set",
                    )
        elif isinstance(node, Subst):
            if empty_count(node.g):
                raise PreconditionViolated(
                    path + (1,),
                    "substitution inner operand has structures on the empty set",
                )

    rec(expr, ())


# -- exponential / count evaluator ----------------------------------------------

@lru_cache(maxsize=None)
def _egf(expr: SpeciesExpr, order: int) -> TruncSeries:
    if isinstance(expr, One):
        return TruncSeries.one(order)
    if isinstance(expr, X):
        return TruncSeries.x(order)
    if isinstance(expr, E):
        return TruncSeries(Fraction(1, nk.factorial(n)) for n in range(order + 1))
    if isinstance(expr, Eplus):
        return _egf(E(), order) - TruncSeries.one(order)
    if isinstance(expr, (L, S)):
        return TruncSeries.geometric(order)
    if isinstance(expr, (Lplus, Splus)):
        return TruncSeries.geometric(order) - TruncSeries.one(order)
    if isinstance(expr, C):
        return TruncSeries(
            [0] + [Fraction(1, n) for n in range(1, order + 1)]
        )
    if isinstance(expr, Ek):
        cs = [Fraction(0)] * (order + 1)
        if expr.k <= order:
            cs[expr.k] = Fraction(1, nk.factorial(expr.k))
        return TruncSeries(cs)
    if isinstance(expr, XPow):
        cs = [Fraction(0)] * (order + 1)
        if expr.n <= order:
            cs[expr.n] = Fraction(1)
        return TruncSeries(cs)
    if isinstance(expr, OnePlusXPow):
        return TruncSeries.one_plus_x_pow(expr.n, order)
    if isinstance(expr, Necklace):
        a = expr.alpha
        return TruncSeries([0] + [Fraction(a ** n, n) for n in range(1, order + 1)])
    if isinstance(expr, AperiodicNecklace):
        a = expr.alpha
        return TruncSeries(
            [0] + [nk.lyndon_count(n, a) for n in range(1, order + 1)]
        )
    if isinstance(expr, Sum):
        return _egf(expr.f, order) + _egf(expr.g, order)
    if isinstance(expr, Prod):
        return _egf(expr.f, order) * _egf(expr.g, order)
    if isinstance(expr, Cartesian):
        return hadamard(_egf(expr.f, order), _egf(expr.g, order))
    if isinstance(expr, Subst):
        return compose(_egf(expr.f, order), _egf(expr.g, order))
    if isinstance(expr, AProd):
        return aprod_egf(_egf(expr.f, order), _egf(expr.g, order))
    if isinstance(expr, MAProd):
        return maprod_egf(_egf(expr.f, order), _egf(expr.g, order), order)
    if isinstance(expr, Derivative):
        inner = _egf(expr.f, order + 1)
        return TruncSeries(
            (n + 1) * inner.coeffs[n + 1] for n in range(order + 1)
        )
    if isinstance(expr, Point):
        inner = _egf(expr.f, order)
        return TruncSeries(n * c for n, c in enumerate(inner.coeffs))
    if isinstance(expr, NonEmpty):
        inner = _egf(expr.f, order)
        return TruncSeries((Fraction(0),) + inner.coeffs[1:])
    if isinstance(expr, Restrict):
        inner = _egf(expr.f, order)
        cs = [Fraction(0)] * (order + 1)
        if expr.n <= order:
            cs[expr.n] = inner.coeffs[expr.n]
        return TruncSeries(cs)
    if isinstance(expr, HCT):
        return TruncSeries.from_counts(hct_counts(expr.r, order))
    raise DomainError(f"unknown expression node {expr!r}")


def eval_egf(expr: SpeciesExpr, order: int) -> TruncSeries:
    """Exponential generating series of the expression, exact to the order."""
    validate(expr)
    return _egf(expr, order)


def eval_counts(expr: SpeciesExpr, order: int) -> list[int]:
    """Labelled counts |F[0]| .. |F[order]|."""
    f = eval_egf(expr, order)
    out = []
    for n, c in enumerate(f.coeffs):
        v = c * nk.factorial(n)
        if v.denominator != 1 or v < 0:
            raise DomainError(f"count at {n} is {v}, not a nonnegative integer")
        out.append(int(v))
    return out


# -- cycle index evaluator -------------------------------------------------------

def eval_zi(expr: SpeciesExpr, bound: int) -> zi.CycleIndex:
    """Cycle index of the expression, exact to the weight bound."""
    validate(expr)
    return _zi(expr, bound, ())


def _zi(expr: SpeciesExpr, bound: int, path) -> zi.CycleIndex:
    if isinstance(expr, One):
        return zi.zi_atom("1", bound)
    if isinstance(expr, X):
        return zi.zi_atom("X", bound)
    if isinstance(expr, E):
        return zi.zi_atom("E", bound)
    if isinstance(expr, Eplus):
        return zi.zi_atom("Ep", bound)
    if isinstance(expr, L):
        return zi.zi_atom("L", bound)
    if isinstance(expr, Lplus):
        return zi.zi_atom("Lp", bound)
    if isinstance(expr, C):
        return zi.zi_atom("C", bound)
    if isinstance(expr, S):
        return zi.zi_atom("S", bound)
    if isinstance(expr, Splus):
        return zi.zi_atom("Sp", bound)
    if isinstance(expr, Ek):
        return zi.zi_atom("Ek", bound, k=expr.k)
    if isinstance(expr, XPow):
        fix = {}
        if expr.n <= bound:
            lam = (expr.n,) if expr.n else ()
            fix[lam] = nk.factorial(expr.n)
        return zi.CycleIndex(bound, fix)
    if isinstance(expr, OnePlusXPow):
        fix = {}
        for m in range(min(expr.n, bound) + 1):
            lam = (m,) if m else ()
            fix[lam] = nk.falling(expr.n, m)
        return zi.CycleIndex(bound, fix)
    if isinstance(expr, Necklace):
        base = zi.zi_atom("C", bound)
        a = expr.alpha
        # a coloring fixed along with the cycle must be constant on the
        # permutation's cycles: multiply by alpha^(number of parts)
        return zi.CycleIndex(
            bound, {lam: v * a ** nk.num_parts(lam) for lam, v in base.fix.items()}
        )
    if isinstance(expr, AperiodicNecklace):
        fix = {}
        for n in range(1, bound + 1):
            lam_n = nk.lyndon_count(n, expr.alpha)
            if lam_n:
                fix[(n,)] = lam_n * nk.factorial(n)
        return zi.CycleIndex(bound, fix)
    if isinstance(expr, Sum):
        return zi.zi_add(_zi(expr.f, bound, path + (0,)), _zi(expr.g, bound, path + (1,)))
    if isinstance(expr, Prod):
        return zi.zi_mul(_zi(expr.f, bound, path + (0,)), _zi(expr.g, bound, path + (1,)))
    if isinstance(expr, Cartesian):
        return zi.zi_hadamard(_zi(expr.f, bound, path + (0,)), _zi(expr.g, bound, path + (1,)))
    if isinstance(expr, Subst):
        return zi.zi_plethysm(_zi(expr.f, bound, path + (0,)), _zi(expr.g, bound, path + (1,)))
    if isinstance(expr, AProd):
        return zi.zi_aprod(_zi(expr.f, bound, path + (0,)), _zi(expr.g, bound, path + (1,)))
    if isinstance(expr, Derivative):
        # fix of the derivative at lam is fix of the operand at lam plus one fixed point
        inner = _zi(expr.f, bound + 1, path + (0,))
        return zi.CycleIndex(bound, {
            lam: inner.fix[_with_extra_fixed_point(lam)]
            for w in range(bound + 1)
            for lam in nk.int_partitions(w)
            if _with_extra_fixed_point(lam) in inner.fix
        })
    if isinstance(expr, Point):
        return zi.zi_point(_zi(expr.f, bound, path + (0,)))
    if isinstance(expr, NonEmpty):
        inner = _zi(expr.f, bound, path + (0,))
        return zi.CycleIndex(bound, {lam: v for lam, v in inner.fix.items() if lam})
    if isinstance(expr, Restrict):
        inner = _zi(expr.f, bound, path + (0,))
        return zi.CycleIndex(
            bound, {lam: v for lam, v in inner.fix.items() if nk.weight(lam) == expr.n}
        )
    if isinstance(expr, MAProd):
        raise UnsupportedForCycleIndex(path, "no cycle index for the modified arithmetic product")
    if isinstance(expr, HCT):
        raise UnsupportedForCycleIndex(path, "no cycle index for hyper-cloned trees")
    raise DomainError(f"unknown expression node {expr!r}")


def _with_extra_fixed_point(lam):
    if not lam:
        return (1,)
    return (lam[0] + 1,) + lam[1:]


def eval_ogf(expr: SpeciesExpr, order: int) -> TruncSeries:
    """Isomorphism-types series, through the cycle index."""
    return zi.zi_to_ogf(eval_zi(expr, order), order)


def type_counts(expr: SpeciesExpr, order: int) -> list[int]:
    """Unlabelled counts, asserting integrality."""
    f = eval_ogf(expr, order)
    out = []
    for n, c in enumerate(f.coeffs):
        if c.denominator != 1 or c < 0:
            raise DomainError(f"type count at {n} is {c}, not a nonnegative integer")
        out.append(int(c))
    return out


# -- hyper-cloned rooted trees ---------------------------------------------------

def hct_counts(r: SpeciesExpr, order: int) -> list[int]:
    """Counts of r-enriched hyper-cloned rooted trees by the divisor recursion.

    h[1] = 1 and h[n+1] = sum over d | n of rect_coeff(n, d) * |r[d]| * h[n/d].
    """
    validate(r)
    rc = eval_counts(r, max(order - 1, 0))
    h = [0] * (order + 1)
    if order >= 1:
        h[1] = 1
    for n in range(1, order):
        total = 0
        for d in nk.divisors(n):
            if rc[d]:
                total += nk.rect_coeff(n, d) * rc[d] * h[n // d]
        h[n + 1] = total
    return h


# -- multiplicative species -------------------------------------------------------

def is_multiplicative(counts) -> tuple[bool, tuple[int, int] | None]:
    """Check the count-level multiplicativity condition.

    Requires counts[1] == 1 (the species concentrated at 1 must be X);
    then for every coprime pair r, s >= 2 with r*s within range,
    |M[rs]| must equal (rs)!/(r!s!) * |M[r]| * |M[s]|.  Returns (ok,
    first failing pair or None).
    """
    top = len(counts) - 1
    if top >= 1 and counts[1] != 1:
        return False, (1, 1)
    from math import gcd

    pairs = []
    for r in range(2, top + 1):
        for s in range(r + 1, top + 1):
            if r * s <= top and gcd(r, s) == 1:
                pairs.append((r, s))
    pairs.sort(key=lambda p: (p[0] * p[1], p[0]))
    for r, s in pairs:
        expect = nk.rect_coeff(r * s, r) * counts[r] * counts[s]
        if counts[r * s] != expect:
            return False, (r, s)
    return True, None


def euler_reconstruct(prime_power_counts, order: int) -> list[int]:
    """Rebuild a multiplicative count sequence from its prime-power values.

    ``prime_power_counts`` maps (p, a) to |M[p^a]|; |M[1]| = 1 is implied.
    """
    out = [0] * (order + 1)
    if order >= 1:
        out[1] = 1
    for n in range(2, order + 1):
        denom = 1
        prod_counts = 1
        for p, a in nk.factorize(n):
            q = p ** a
            if (p, a) not in prime_power_counts:
                raise IncompleteData(f"missing count for prime power {p}^{a}")
            denom *= nk.factorial(q)
            prod_counts *= prime_power_counts[(p, a)]
        num = nk.factorial(n)
        assert num % denom == 0
        out[n] = num // denom * prod_counts
    return out


# -- closed-form counting -----------------------------------------------------------

def mnr_formula(m: int, n: int, r: int) -> int:
    """Number of m x n (0,1)-matrices with exactly r ones and no zero row or column.

    Signed double sum over the sizes (j, k) of the surviving row and
    column sets; grouping the terms by l = j*k gives the divisor form.
    """
    if m < 0 or n < 0 or r < 0:
        raise DomainError("matrix dimensions and weight must be nonnegative")
    total = 0
    for j in range(m + 1):
        cj = nk.binomial(m, j)
        for k in range(n + 1):
            c = nk.binomial(j * k, r)
            if not c:
                continue
            term = cj * nk.binomial(n, k) * c
            total += term if (m + n - j - k) % 2 == 0 else -term
    assert total >= 0
    return total


def partial_rect_mnr(m: int, n: int, r: int) -> int:
    """Number of m x n partial rectangles on r elements: r! M(m,n,r) / (m! n!)."""
    v = Fraction(nk.factorial(r) * mnr_formula(m, n, r), nk.factorial(m) * nk.factorial(n))
    assert v.denominator == 1 and v >= 0
    return int(v)


def pr_k_exact(k: int, order: int) -> list[int]:
    """Counts of k-tuples of partitions with meet the finest partition.

    Exact route: the Hadamard k-th power of the Bell series has count
    B_n^k; substituting ln(1+x) undoes the e^x - 1 inside and yields the
    partial-rectangle series itself.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    bells = [nk.bell(n) ** k for n in range(order + 1)]
    p = compose(TruncSeries.from_counts(bells), log1p_series(order))
    out = []
    for n, c in enumerate(p.coeffs):
        v = c * nk.factorial(n)
        assert v.denominator == 1 and v >= 0
        out.append(int(v))
    return out


# -- certified numeric sums ----------------------------------------------------------

def _tail_upper(term, ratio, start):
    """Upper bound on sum_{i >= start} term(i).

    Requires term(i+1) = ratio(i) * term(i) with ratio nonincreasing and
    eventually below 3/4.
    """
    acc = Fraction(0)
    j = start
    while ratio(j) >= Fraction(3, 4):
        acc += term(j)
        j += 1
    return acc + term(j) / (1 - ratio(j))


def _moment_upper(term, ratio, upto):
    """Upper bound on the full sum over i >= 0, exact through ``upto``."""
    exact = sum((term(i) for i in range(upto + 1)), Fraction(0))
    return exact + _tail_upper(term, ratio, upto + 1)


def _invfact_term(p):
    return lambda i: Fraction(i ** p, nk.factorial(i))


def _invfact_ratio(p):
    return lambda i: Fraction((i + 1) ** p, i ** p * (i + 1))


def _einv_enclosure(terms: int = 30) -> tuple[Fraction, Fraction]:
    """Rational enclosure of 1/e from the alternating series."""
    s = Fraction(0)
    lo = hi = None
    for j in range(terms + 2):
        s += Fraction((-1) ** j, nk.factorial(j))
        if j >= terms:
            if j % 2:
                lo = s
            else:
                hi = s
    assert lo is not None and hi is not None and lo < hi
    return lo, hi


def pittel_numeric(k: int, n: int, tol) -> tuple[float, float]:
    """Numeric value of the k-fold falling-factorial sum for partial rectangles.

    Evaluates e^(-k) * sum over i_1..i_k >= 0 of (i_1...i_k)_n / (i_1!...i_k!)
    with a certified rational enclosure of width below tol, asserts the
    exact count from pr_k_exact lies inside, and returns (midpoint,
    half-width) as floats.
    """
    if k < 1 or n < 0:
        raise DomainError("need k >= 1 and n >= 0")
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    einv_lo, einv_hi = _einv_enclosure()
    ek_lo, ek_hi = einv_lo ** k, einv_hi ** k
    exact = pr_k_exact(k, n)[n]
    term, ratio = _invfact_term(n), _invfact_ratio(n)
    box = 2 * n + 8
    while True:
        axis_tail = _tail_upper(term, ratio, box + 1)
        axis_full = _moment_upper(term, ratio, box)
        tail = k * axis_tail * axis_full ** (k - 1)
        s = _pittel_box_sum(k, n, box)
        lo = ek_lo * s
        hi = ek_hi * (s + tail)
        if hi - lo <= tol:
            break
        box *= 2
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    assert lo <= exact <= hi
    assert abs(mid - exact) <= tol
    return float(mid), float(half)


def _pittel_box_sum(k, n, box):
    """Exact sum of (prod i)_n / prod i! over the k-cube [0..box]^k."""
    fbox = nk.factorial(box)
    w = [fbox // nk.factorial(i) for i in range(box + 1)]
    total = 0
    for tup in product(range(box + 1), repeat=k):
        m = 1
        for i in tup:
            m *= i
        f = nk.falling(m, n)
        if f:
            ww = f
            for i in tup:
                ww *= w[i]
            total += ww
    return Fraction(total, fbox ** k)


# -- the cyclotomic identity -----------------------------------------------------------

def cyclotomic_check(alpha: int, order: int) -> bool:
    """Verify the colored-cycle factorization at the count and series level.

    Checks (a) cycles of aperiodic necklaces have the same counts as
    necklaces, (b) assemblies of necklaces expand both as
    exp(arithmetic product) and as the product of geometric factors with
    Lyndon-count exponents, all equal to sum alpha^n x^n.
    """
    if alpha < 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    neck = eval_counts(Necklace(alpha), order)
    octo = eval_counts(AProd(C(), AperiodicNecklace(alpha)), order)
    if octo != neck:
        return False
    target = TruncSeries(alpha ** n for n in range(order + 1))
    prod_form = TruncSeries.one(order)
    for n in range(1, order + 1):
        lam = nk.lyndon_count(n, alpha)
        if lam:
            prod_form = prod_form * geom_power(n, lam, order)
    if prod_form != target:
        return False
    exp_form = exp_series(aprod_egf(_egf(C(), order), _egf(AperiodicNecklace(alpha), order)))
    return exp_form == target
