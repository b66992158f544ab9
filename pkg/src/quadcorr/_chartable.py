"""Low-level integer utilities: primes, factorization, Kronecker symbols,
and fast construction of the quadratic character table chi(n) = (Delta/n).

Kept separate so that both quadfield (which stores the table inside
FieldData) and character (which exposes the public operations) can share
it without a circular import.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

from .errors import NotSquarefree, OutOfRange

_primes_cache: list[int] = []
_primes_limit = 0

# Legendre tables (chi mod p for the prime discriminant (-1)^((p-1)/2) p),
# cached per odd prime.
_legendre_cache: dict[int, np.ndarray] = {}

# 2-part tables for the even prime discriminants -4, 8, -8.
_TABLE_M4 = np.array([0, 1, 0, -1], dtype=np.int8)
_TABLE_P8 = np.array([0, 1, 0, -1, 0, -1, 0, 1], dtype=np.int8)
_TABLE_M8 = np.array([0, 1, 0, 1, 0, -1, 0, -1], dtype=np.int8)


def primes_up_to(n: int) -> list[int]:
    """All primes <= n, cached and extended on demand."""
    global _primes_cache, _primes_limit
    if n > _primes_limit:
        limit = max(n, 2 * _primes_limit, 1 << 10)
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p:: p] = False
        _primes_cache = np.flatnonzero(sieve).tolist()
        _primes_limit = limit
    # bisect would do; the list is ascending and calls are rare
    import bisect

    k = bisect.bisect_right(_primes_cache, n)
    return _primes_cache[:k]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n > 0 by trial division."""
    if n <= 0:
        raise OutOfRange(f"cannot factorize {n}")
    out: list[tuple[int, int]] = []
    rest = n
    for p in primes_up_to(isqrt(n)):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out.append((p, e))
    if rest > 1:
        out.append((rest, 1))
    return out


def check_squarefree(d: int) -> list[int]:
    """Return the sorted prime divisors of d, raising if d is not squarefree."""
    factors = factorize(d)
    for p, e in factors:
        if e > 1:
            raise NotSquarefree(f"{d} is divisible by {p}^2")
    return [p for p, _ in factors]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) by the standard reduction: extract powers of 2
    with the (a/2) rule, then flip via quadratic reciprocity."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _legendre_table(p: int) -> np.ndarray:
    """chi(n) = (n/p) for the odd prime p, indexed by n mod p."""
    tbl = _legendre_cache.get(p)
    if tbl is None:
        tbl = np.full(p, -1, dtype=np.int8)
        tbl[0] = 0
        sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
        tbl[sq] = 1
        _legendre_cache[p] = tbl
    return tbl


def discriminant(d: int) -> int:
    """Fundamental discriminant of Q(sqrt(d)) for squarefree d > 1."""
    return d if d % 4 == 1 else 4 * d


def _component_tables(d: int, prime_divisors: list[int]) -> list[np.ndarray]:
    """Factor the discriminant of Q(sqrt(d)) into prime discriminants and
    return one periodic chi table per factor.

    The Legendre table for an odd p equals the character of the prime
    discriminant (-1)^((p-1)/2) p, and the product over all factors is the
    Kronecker character mod Delta.
    """
    parts: list[np.ndarray] = []
    if d % 2 == 0:
        dprime = d // 2
        parts.append(_TABLE_P8 if dprime % 4 == 1 else _TABLE_M8)
    elif d % 4 == 3:
        parts.append(_TABLE_M4)
    for p in prime_divisors:
        if p != 2:
            parts.append(_legendre_table(p))
    return parts


def chi_table(d: int, prime_divisors: list[int]) -> np.ndarray:
    """Length-Delta int8 table with chi_table[n % Delta] = (Delta/n)."""
    delta = discriminant(d)
    idx = np.arange(delta, dtype=np.int64)
    tbl = np.ones(delta, dtype=np.int8)
    for part in _component_tables(d, prime_divisors):
        m = len(part)
        tbl *= part[idx % m]
    return tbl


def weighted_sums(chi: np.ndarray) -> tuple[int, int, int]:
    """Exact (s0, s1, s2) with s_k = sum_{n=1}^{Delta} n^k chi(n).

    Chunked int64 dot products keep every partial sum below 2^63; the
    chunk totals are accumulated as Python ints, so the result is exact
    even when it exceeds 64 bits.
    """
    delta = len(chi)
    s0 = 0
    s1 = 0
    s2 = 0
    chunk = 1 << 18
    for lo in range(0, delta, chunk):
        hi = min(lo + chunk, delta)
        c = chi[lo:hi].astype(np.int64)
        n = np.arange(lo, hi, dtype=np.int64)
        s0 += int(c.sum())
        s1 += int(np.dot(n, c))
        s2 += int(np.dot(n * n, c))
    # n = Delta contributes chi(0) = 0, so summing residues 0..Delta-1
    # equals summing n = 1..Delta.
    return s0, s1, s2
