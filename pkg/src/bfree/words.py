"""Finite 0/1 words, admissibility, language enumeration and eta windows.

A word W is admissible for a truncation of B when, for every known element
b <= |W|, the residues of its support mod b leave at least one class free;
elements larger than |W| cannot be violated since the support occupies fewer
than b classes.  The language of the B-free subshift is exactly the set of
admissible words, it is hereditary (closed under turning ones into zeros),
and the characteristic point eta marks the integers no element divides.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._backend import kernels
from .bset import BSet
from .errors import (
    EnumerationBudgetExceeded,
    LengthMismatch,
    TooManyZeros,
    WindowTooShort,
)

DEFAULT_MAX_NODES = 50_000_000
MAX_SUPERSET_ZEROS = 28


@dataclass(frozen=True)
class Word:
    """A finite block over {0,1}, doubling as the cylinder it names."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"bits must be a nonempty 0/1 string, got {self.bits!r}")

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls("0" * n)

    @classmethod
    def from_positions(cls, n: int, ones) -> "Word":
        ones = set(ones)
        return cls("".join("1" if i in ones else "0" for i in range(n)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Word":
        return cls("".join("1" if (mask >> i) & 1 else "0" for i in range(n)))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    @property
    def ones_count(self) -> int:
        return self.bits.count("1")

    def ones_positions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.bits) if c == "1")

    def zeros_positions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.bits) if c == "0")

    def concat(self, other: "Word | str") -> "Word":
        other_bits = other.bits if isinstance(other, Word) else other
        return Word(self.bits + other_bits)


def le(w1: Word, w2: Word) -> bool:
    """Coordinatewise order: w1 <= w2 when every one of w1 is a one of w2."""
    if len(w1) != len(w2):
        raise LengthMismatch(f"lengths {len(w1)} and {len(w2)} differ")
    return all(a <= b for a, b in zip(w1.bits, w2.bits))


def is_admissible(word: Word, bset: BSet) -> bool:
    n = len(word)
    support = word.ones_positions()
    for b in bset.constrained(n):
        if len({i % b for i in support}) == b:
            return False
    return True


def count_language(n: int, bset: BSet, max_nodes: int = DEFAULT_MAX_NODES) -> int:
    """Exact number of admissible words of length n."""
    out = kernels.count_words(n, list(bset.elements), max_nodes)
    if out is None:
        raise EnumerationBudgetExceeded(f"count_language({n}) exceeded {max_nodes} nodes")
    return out


def enumerate_language(n: int, bset: BSet, cap: int) -> Iterator[Word]:
    """Admissible words of length n in lexicographic order, at most ``cap``."""
    if n < 1 or cap < 1:
        raise ValueError("n and cap must be positive")
    bs = list(bset.constrained(n))
    full = [(1 << b) - 1 for b in bs]
    masks = [0] * len(bs)
    emitted = 0
    prefix: list[str] = []

    def rec(i: int) -> Iterator[Word]:
        nonlocal emitted
        if emitted >= cap:
            return
        if i == n:
            emitted += 1
            yield Word("".join(prefix))
            return
        prefix.append("0")
        yield from rec(i + 1)
        prefix.pop()
        if emitted >= cap:
            return
        changed = []
        ok = True
        for k, b in enumerate(bs):
            bit = 1 << (i % b)
            if not (masks[k] & bit):
                if (masks[k] | bit) == full[k]:
                    ok = False
                    break
                masks[k] |= bit
                changed.append(k)
        if ok:
            prefix.append("1")
            yield from rec(i + 1)
            prefix.pop()
        for k in changed:
            masks[k] ^= 1 << (i % bs[k])

    yield from rec(0)


def supersets(word: Word, bset: BSet) -> Iterator[Word]:
    """All admissible words dominating ``word``, in lexicographic order.

    Flips subsets of the zero positions, pruning branches as soon as the
    partial word is inadmissible (hereditarity makes every further flip
    inadmissible too).  Includes ``word`` itself when admissible; empty when
    it is not.
    """
    n = len(word)
    zeros = word.zeros_positions()
    if len(zeros) > MAX_SUPERSET_ZEROS:
        raise TooManyZeros(
            f"{len(zeros)} zero positions exceed the {MAX_SUPERSET_ZEROS} cap"
        )
    bs = list(bset.constrained(n))
    full = [(1 << b) - 1 for b in bs]
    masks = [0] * len(bs)
    blocked = False
    for i in word.ones_positions():
        for k, b in enumerate(bs):
            masks[k] |= 1 << (i % b)
    if any(m == f for m, f in zip(masks, full)):
        return
    bits = list(word.bits)

    def rec(zi: int) -> Iterator[Word]:
        if zi == len(zeros):
            yield Word("".join(bits))
            return
        yield from rec(zi + 1)
        i = zeros[zi]
        changed = []
        ok = True
        for k, b in enumerate(bs):
            bit = 1 << (i % b)
            if not (masks[k] & bit):
                if (masks[k] | bit) == full[k]:
                    ok = False
                    break
                masks[k] |= bit
                changed.append(k)
        if ok:
            bits[i] = "1"
            yield from rec(zi + 1)
            bits[i] = "0"
        for k in changed:
            masks[k] ^= 1 << (zeros[zi] % bs[k])

    yield from rec(0)


@dataclass(frozen=True)
class MaxOnesResult:
    count: int
    witness: Word


def max_ones(
    n: int,
    bset: BSet,
    method: str = "exact",
    scan_window: int | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> MaxOnesResult:
    """Densest admissible word of length n.

    ``exact`` maximizes the free-set size over one choice of forbidden
    residue class per constraining element (every admissible support lies in
    such a free set, and each free set is itself admissible), branch-and-bound
    pruned by the current free count, ties broken toward the
    lexicographically smallest witness.  ``scan`` slides a length-n window
    along the eta segment on [1, scan_window] and is a lower-bound witness.
    """
    if method == "exact":
        out = kernels.max_ones_exact(n, list(bset.elements), max_nodes)
        if out is None:
            raise EnumerationBudgetExceeded(f"max_ones({n}) exceeded {max_nodes} nodes")
        count, mask = out
        return MaxOnesResult(count, Word.from_mask(n, mask))
    if method == "scan":
        m = scan_window if scan_window is not None else max(100_000, 10 * n)
        if m < n:
            raise WindowTooShort(f"scan window {m} is shorter than n={n}")
        segment = eta_window(bset, 1, m).word.bits
        arr = np.frombuffer(segment.encode(), dtype=np.uint8) - ord("0")
        sums = np.convolve(arr, np.ones(n, dtype=np.int64), mode="valid")
        best = int(sums.max())
        witness = None
        for start in np.nonzero(sums == best)[0]:
            cand = segment[start : start + n]
            if witness is None or cand < witness:
                witness = cand
        return MaxOnesResult(best, Word(witness))
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class EtaWindow:
    """A window of the characteristic point of the B-free integers."""

    word: Word
    start_index: int
    exact: bool

    def to_json(self) -> str:
        return json.dumps(
            {"start": self.start_index, "bits": self.word.bits, "exact": self.exact}
        )


def eta_window(bset: BSet, a: int, b: int) -> EtaWindow:
    """Bits of eta on [a, b]: 1 iff no known element divides the position.

    Positions may be negative (divisibility is symmetric under negation) and
    position 0 is always 0.  The window is exact when the truncation is
    complete past the largest absolute position.
    """
    if a > b:
        raise ValueError("window bounds out of order")
    length = b - a + 1
    bits = np.ones(length, dtype=np.uint8)
    for el in bset.elements:
        first = (-a) % el
        bits[first::el] = 0
    word = Word((bits + ord("0")).tobytes().decode("ascii"))
    max_pos = max(abs(a), abs(b))
    exact = bset.complete_below is None or max_pos <= bset.complete_below
    return EtaWindow(word, a, exact)


def ones_frequency(window: EtaWindow) -> float:
    return window.word.ones_count / len(window.word)
