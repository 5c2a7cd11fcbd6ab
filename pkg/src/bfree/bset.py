"""Validated truncations of a pairwise-coprime set B and their densities.

A ``BSet`` holds the known prefix b_1 < b_2 < ... < b_K of an infinite (or
exactly finite) set B of pairwise-coprime integers >= 2 with a certified
upper bound on the reciprocal sum of the unknown tail.  Every density output
is an interval that provably contains the infinite-B value: since the tail
factors satisfy prod_{k>K}(1 - 1/b_k) >= 1 - sum_{k>K} 1/b_k, truncating the
product loses at most a factor (1 - tail_bound).

All entropies are base 2, so the topological entropy of the associated
subshift coincides with the density of the B-free integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    ElementBelowTwo,
    KTooLarge,
    NotAscending,
    NotCoprime,
    WindowExceedsCompleteness,
)
from .intervals import Interval


@dataclass(frozen=True)
class BSet:
    """Truncation of B: known elements, tail bound, completeness threshold.

    ``complete_below = None`` means the truncation is complete up to infinity,
    i.e. B is exactly the finite set ``elements``.  An exactly finite B must
    have ``tail_bound == 0``.
    """

    elements: tuple[int, ...]
    tail_bound: float = 0.0
    complete_below: int | None = None

    @property
    def is_exactly_finite(self) -> bool:
        return self.tail_bound == 0 and self.complete_below is None

    @property
    def tail_fraction(self) -> Fraction:
        return Fraction(self.tail_bound)

    def period(self) -> int:
        """Product of the known elements (period of the truncated sieve)."""
        return math.prod(self.elements)

    def constrained(self, n: int) -> tuple[int, ...]:
        """Elements that can constrain a word of length n (those <= n)."""
        return tuple(b for b in self.elements if b <= n)

    def to_json(self) -> str:
        return json.dumps(
            {
                "elements": list(self.elements),
                "tail_bound": self.tail_bound,
                "complete_below": self.complete_below,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "BSet":
        obj = json.loads(text)
        return validate(
            obj["elements"],
            obj.get("tail_bound", 0.0),
            obj.get("complete_below"),
        )


def validate(elements, tail_bound: float = 0.0, complete_below: int | None = None) -> BSet:
    """Check the BSet invariants and build the value, or raise.

    Raises ``NotCoprime`` (with the offending pair), ``ElementBelowTwo`` or
    ``NotAscending``.  An exactly finite set (tail 0) forces
    ``complete_below = None``.
    """
    elems = tuple(int(b) for b in elements)
    if any(b < 2 for b in elems):
        raise ElementBelowTwo(f"all elements must be >= 2, got {min(elems)}")
    if any(a >= b for a, b in zip(elems, elems[1:])):
        raise NotAscending(f"elements must be strictly ascending: {elems}")
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            if math.gcd(a, b) != 1:
                raise NotCoprime(a, b)
    if tail_bound < 0:
        raise ElementBelowTwo("tail_bound must be nonnegative")
    if tail_bound == 0:
        complete_below = None
    return BSet(elems, float(tail_bound), complete_below)


def _prefix_density(elements) -> Fraction:
    """Exact prod (1 - 1/b) over the given elements."""
    d = Fraction(1)
    for b in elements:
        d *= Fraction(b - 1, b)
    return d


def free_density(bset: BSet) -> Interval:
    """Interval containing the density of the B-free integers.

    The upper endpoint is the exact truncated product d_K = prod (1 - 1/b);
    the lower endpoint multiplies by (1 - tail_bound), clipped at 0.  For an
    exactly finite B the interval is degenerate.
    """
    d_k = _prefix_density(bset.elements)
    lo = d_k * max(Fraction(0), 1 - bset.tail_fraction)
    return Interval(lo, d_k)


def topological_entropy(bset: BSet) -> Interval:
    """Base-2 entropy of the B-free subshift; equals the free density."""
    return free_density(bset)


def mset_density(bset: BSet, k: int) -> Fraction:
    """Exact density of the multiples of the first k elements.

    By CRT over pairwise-coprime moduli this is 1 - prod_{i<=k}(1 - 1/b_i).
    Nondecreasing in k.
    """
    if k > len(bset.elements):
        raise KTooLarge(f"k={k} exceeds the {len(bset.elements)} known elements")
    return 1 - _prefix_density(bset.elements[:k])


def log_density_mset(bset: BSet, n: int) -> float:
    """(1/log N) * sum of 1/a over multiples a <= N of the known elements.

    Uses the natural logarithm, matching sum_{a<=N} 1/a ~ log N.  Exact only
    while the truncation is complete over [1, N]; beyond ``complete_below``
    unknown elements of B could contribute, so that is refused.
    """
    if n < 2:
        raise WindowExceedsCompleteness("N must be at least 2")
    if bset.complete_below is not None and n > bset.complete_below:
        raise WindowExceedsCompleteness(
            f"N={n} exceeds the completeness threshold {bset.complete_below}"
        )
    marked = np.zeros(n + 1, dtype=bool)
    for b in bset.elements:
        marked[b::b] = True
    a = np.nonzero(marked)[0]
    return float(np.sum(1.0 / a) / math.log(n))


def davenport_erdos_table(bset: BSet) -> list[tuple[int, Fraction]]:
    """Multiples-set density along nested prefixes: monotone, Cauchy rows."""
    return [(k, mset_density(bset, k)) for k in range(1, len(bset.elements) + 1)]
