"""Exact arithmetic and the number-theoretic functions the counting formulas use.

Everything here is exact: Python's arbitrary-precision ``int`` and
``fractions.Fraction`` only; no floats appear anywhere in this module.

Integer partitions are multiplicity tuples ``lam`` where ``lam[i]`` is the
number of parts equal to ``i + 1``, trailing zeros stripped, so the
partition 2+1+1 of 4 is ``(2, 1)`` and the empty partition is ``()``.
``int_partitions(n)`` lists partitions in reverse-lexicographic order of
their descending part lists — for n = 3: (3), (2,1), (1,1,1) — and that
order is the canonical one for all deterministic output.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import DomainError


def factorial(n: int) -> int:
    """n! for n >= 0."""
    if n < 0:
        raise DomainError(f"factorial of negative argument {n}")
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0; zero when k < 0 or k > n."""
    if n < 0:
        raise DomainError(f"binomial with negative upper argument {n}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    out = 1
    for i in range(1, k + 1):
        out = out * (n - k + i) // i
    return out


def falling(m: int, n: int) -> int:
    """Falling factorial m(m-1)...(m-n+1); the empty product 1 when n = 0."""
    if n < 0:
        raise DomainError(f"falling factorial with negative length {n}")
    out = 1
    for i in range(n):
        out *= m - i
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1 in ascending order."""
    if n < 1:
        raise DomainError(f"divisors of non-positive {n}")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as (prime, exponent) pairs, primes ascending."""
    if n < 1:
        raise DomainError(f"factorization of non-positive {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            a = 0
            while n % d == 0:
                n //= d
                a += 1
            out.append((d, a))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def sigma(n: int) -> int:
    """Sum of the positive divisors of n."""
    return sum(divisors(n))


def tau(n: int) -> int:
    """Number of positive divisors of n."""
    return len(divisors(n))


def mobius(n: int) -> int:
    """Moebius function: 0 on square factors, else (-1)^(number of primes)."""
    out = 1
    for _, a in factorize(n):
        if a > 1:
            return 0
        out = -out
    return out


def euler_phi(n: int) -> int:
    """Euler totient of n >= 1."""
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Number of set partitions of an n-set, by the Bell triangle."""
    if n < 0:
        raise DomainError(f"Bell number of negative index {n}")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def rect_coeff(n: int, d: int) -> int:
    """Number of rectangles of height d on an n-set: n!/(d! (n/d)!); requires d | n."""
    if n < 1:
        raise DomainError(f"rectangle coefficient needs n >= 1, got {n}")
    if d < 1 or n % d:
        raise DomainError(f"height {d} does not divide {n}")
    return factorial(n) // (factorial(d) * factorial(n // d))


def multi_rect_coeff(n: int, heights) -> int:
    """Number of k-rectangles of shape (d_1,...,d_k) on an n-set: n!/(d_1!...d_k!).

    The heights must multiply to n.
    """
    heights = tuple(heights)
    prod = 1
    for d in heights:
        if d < 1:
            raise DomainError(f"non-positive height {d}")
        prod *= d
    if prod != n:
        raise DomainError(f"heights {heights} multiply to {prod}, not {n}")
    denom = 1
    for d in heights:
        denom *= factorial(d)
    num = factorial(n)
    assert num % denom == 0
    return num // denom


def lyndon_count(n: int, alpha: int) -> int:
    """Number of Lyndon words of length n over an alpha-letter alphabet."""
    if n < 1:
        raise DomainError(f"Lyndon count needs n >= 1, got {n}")
    if alpha < 0:
        raise DomainError(f"alphabet size must be nonnegative, got {alpha}")
    total = sum(mobius(d) * alpha ** (n // d) for d in divisors(n))
    assert total % n == 0
    return total // n


# -- integer partitions as multiplicity tuples --------------------------------

def parts_to_mult(parts) -> tuple[int, ...]:
    """Multiplicity tuple of a list of parts (any order)."""
    parts = tuple(parts)
    if not parts:
        return ()
    m = [0] * max(parts)
    for p in parts:
        if p < 1:
            raise DomainError(f"partition part {p} must be positive")
        m[p - 1] += 1
    return tuple(m)


def mult_to_parts(lam) -> tuple[int, ...]:
    """Descending part list of a multiplicity tuple."""
    parts = []
    for i in range(len(lam), 0, -1):
        parts.extend([i] * lam[i - 1])
    return tuple(parts)


def weight(lam) -> int:
    """Sum of the parts."""
    return sum((i + 1) * m for i, m in enumerate(lam))


def num_parts(lam) -> int:
    """Total number of parts."""
    return sum(lam)


def aut(lam) -> int:
    """prod_i i^(m_i) m_i!, the centralizer order of a permutation of this cycle type."""
    out = 1
    for i, m in enumerate(lam, start=1):
        out *= i ** m * factorial(m)
    return out


@lru_cache(maxsize=None)
def int_partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of n as multiplicity tuples, in canonical order.

    Canonical = reverse-lexicographic on descending part lists, so the
    one-part partition (n) comes first and (1^n) last.
    """
    if n < 0:
        raise DomainError(f"partitions of negative {n}")
    out = []

    def rec(rest, biggest, acc):
        if rest == 0:
            out.append(parts_to_mult(tuple(acc)))
            return
        for p in range(min(rest, biggest), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)
