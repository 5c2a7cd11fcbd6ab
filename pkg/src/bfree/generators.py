"""Named generators that materialize BSet truncations with certified tails.

``prime-squares`` is {p^2 : p prime}; ``two-plus-odd-prime-squares`` is
{2} u {p^2 : p odd prime}.  Both are pairwise coprime with summable
reciprocals.  The tail bound for a cutoff is

    sum_{p^2 > cutoff} 1/p^2  <=  sum_{p <= 1e6, p^2 > cutoff} 1/p^2 + 1e-6,

since sum over integers n > x of 1/n^2 is at most 1/x.  The partial sum is
taken with exactly rounded fsum over per-term upper bounds, then widened by
one ulp, so the stored float is a true upper bound.
"""

from __future__ import annotations

import math

import numpy as np

from .bset import BSet, validate
from .errors import InvalidInput
from .intervals import up

_SIEVE_LIMIT = 10**6

GENERATOR_NAMES = ("prime-squares", "two-plus-odd-prime-squares")


def primes_up_to(n: int) -> np.ndarray:
    """Simple sieve of Eratosthenes, inclusive."""
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def certified_prime_square_tail(cutoff: int, odd_only: bool) -> float:
    """Certified upper bound on sum of 1/p^2 over primes with p^2 > cutoff."""
    ps = primes_up_to(_SIEVE_LIMIT)
    if odd_only:
        ps = ps[ps > 2]
    ps = ps[ps * ps > cutoff]
    terms = [up(1.0 / (int(p) * int(p))) for p in ps]
    partial = up(math.fsum(terms))
    return up(partial + 1.0 / _SIEVE_LIMIT)


def make_bset(name: str, cutoff: int) -> BSet:
    """Materialize a named generator up to ``cutoff`` (inclusive)."""
    if cutoff < 2:
        raise InvalidInput("cutoff must be at least 2")
    if name == "prime-squares":
        ps = primes_up_to(math.isqrt(cutoff))
        elements = [int(p) * int(p) for p in ps]
        tail = certified_prime_square_tail(cutoff, odd_only=False)
    elif name == "two-plus-odd-prime-squares":
        ps = primes_up_to(math.isqrt(cutoff))
        elements = [2] + [int(p) * int(p) for p in ps if p > 2]
        tail = certified_prime_square_tail(cutoff, odd_only=True)
    else:
        raise InvalidInput(f"unknown generator {name!r}; known: {GENERATOR_NAMES}")
    return validate(elements, tail, cutoff)
