"""Certified cylinder-measure evaluators.

Three measures on the B-free subshift and its hereditary closure:

* the Mirsky measure, the push-forward of Haar measure on the product of
  cyclic groups Z/bZ under the freeness indicator;
* Bernoulli measures on the full shift (q is the mass of symbol 0);
* their multiplicative convolution, the law of the coordinatewise product of
  an independent pair, evaluated through the superset sum
  kappa(C) = sum over admissible C' >= C of nu(C') q^(#1C' - #1C) (1-q)^(#1C).

Under the Haar product measure, the probability that a finite set T of
positions is entirely free factors over the coprime moduli:
F(T) = prod over b of (1 - |T mod b| / b).  The Mirsky mass of a cylinder
follows by inclusion-exclusion over its zero positions.  Unknown tail
elements contribute a factor between 1 - |T| * tail_bound and 1 per term,
which is where the interval width comes from.

Arithmetic is exact (Fraction endpoints) throughout this module, so every
interval provably contains the truncation-true value; only the tail bounds
carry uncertainty.  Each evaluator is cross-validated against an independent
oracle: CRT pattern counting for the Mirsky measure and a direct double sum
over mask words for the convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

import numpy as np

from .bset import BSet
from .errors import (
    EnumerationBudgetExceeded,
    NotExactlyFinite,
    PeriodTooLarge,
    QOutOfRange,
    TooManyZeros,
    WindowExceedsCompleteness,
    WordTooLong,
)
from .intervals import Interval, interval_sum
from .words import Word, enumerate_language, supersets

MAX_INCLEXCL_ZEROS = 28
MAX_ORACLE_PERIOD = 10**7
MAX_ORACLE_LENGTH = 12
_STRUCTURED_COMBO_BUDGET = 1_000_000

ZERO = Interval.point(Fraction(0))


def _free_factor(bset: BSet, positions) -> Fraction:
    """Exact prod over known elements of (1 - |T mod b| / b)."""
    out = Fraction(1)
    for b in bset.elements:
        hit = len({p % b for p in positions})
        if hit == b:
            return Fraction(0)
        out *= Fraction(b - hit, b)
    return out


def _tail_factor_interval(bset: BSet, m: int) -> tuple[Fraction, Fraction]:
    """Certified range of the unknown-tail factor for an m-point free event."""
    tau = bset.tail_fraction
    lo = max(Fraction(0), 1 - m * tau)
    return lo, Fraction(1)


def mirsky_eval(bset: BSet, word: Word) -> Interval:
    """Mirsky mass of a cylinder by inclusion-exclusion over zero positions.

    Sums (-1)^|S| F(A u S) over subsets S of the zeros, A the ones, with each
    term multiplied by its tail-factor range.  Exact rational endpoints.
    """
    ones = word.ones_positions()
    zeros = word.zeros_positions()
    if len(zeros) > MAX_INCLEXCL_ZEROS:
        raise TooManyZeros(
            f"{len(zeros)} zero positions exceed the {MAX_INCLEXCL_ZEROS} cap"
        )
    terms = []
    nz = len(zeros)
    for mask in range(1 << nz):
        extra = [zeros[i] for i in range(nz) if (mask >> i) & 1]
        t = ones + tuple(extra)
        f = _free_factor(bset, t)
        t_lo, t_hi = _tail_factor_interval(bset, len(t))
        lo, hi = f * t_lo, f * t_hi
        if len(extra) % 2:
            lo, hi = -hi, -lo
        terms.append(Interval(lo, hi))
    return interval_sum(terms)


def mirsky_eval_structured(bset: BSet, word: Word) -> Interval:
    """Mirsky mass for wide cylinders via residue-class enumeration.

    Splits the known elements at the word length n.  The joint hit classes of
    elements b <= n are enumerated directly (only classes disjoint from the
    ones survive); each element b > n meets the window in at most one
    position, so the probability that the ones stay free and a t-subset of
    leftover zeros gets hit reduces to an alternating binomial sum over
    g(m) = prod over large b of (1 - m/b).  Unknown tail elements (all larger
    than the completeness threshold) at worst cover single positions, giving
    the certified bracket

        sum_r S_U(r) * max(0, 1 - n*tau)  <=  P_small * nu(C)
        <=  sum_r [ S_U(r) + tau * (g(|A|) - S_U(r)) ].

    Exact rational arithmetic; meant for max-ones witnesses whose zero count
    exceeds the inclusion-exclusion cap.
    """
    n = len(word)
    if bset.complete_below is not None and bset.complete_below < n:
        raise WindowExceedsCompleteness(
            f"truncation only complete below {bset.complete_below} < n={n}"
        )
    ones = word.ones_positions()
    zeros_mask = 0
    for z in word.zeros_positions():
        zeros_mask |= 1 << z
    small = [b for b in bset.elements if b <= n]
    large = [b for b in bset.elements if b > n]
    a = len(ones)
    tau = bset.tail_fraction

    allowed: list[list[int]] = []
    combos = 1
    for b in small:
        bad = {p % b for p in ones}
        rs = [r for r in range(b) if r not in bad]
        combos *= len(rs)
        allowed.append(rs)
    if combos > _STRUCTURED_COMBO_BUDGET:
        raise EnumerationBudgetExceeded(
            f"{combos} residue combinations exceed the structured budget"
        )
    if combos == 0:
        return ZERO

    class_mask = []
    for k, b in enumerate(small):
        row = {}
        for r in allowed[k]:
            m = 0
            for j in range(r, n, b):
                m |= 1 << j
            row[r] = m
        class_mask.append(row)

    g = []  # g[t] = prod over large b of (1 - (|A|+t)/b), t up to the zero count
    for t in range(n - a + 1):
        val = Fraction(1)
        for b in large:
            val *= Fraction(b - (a + t), b)
        g.append(val)

    def cover_prob(u: int) -> Fraction:
        # P(large elements avoid the ones and hit all u leftover zeros)
        return sum(((-1) ** t) * math.comb(u, t) * g[t] for t in range(u + 1))

    s_total = Fraction(0)
    hi_total = Fraction(0)
    g_a = g[0]
    for combo in _cartesian(*[list(row.values()) for row in class_mask]):
        covered = 0
        for m in combo:
            covered |= m
        u = (zeros_mask & ~covered).bit_count()
        s_u = cover_prob(u)
        s_total += s_u
        hi_total += s_u + tau * (g_a - s_u)
    p_small = math.prod(small) if small else 1
    lo = s_total * max(Fraction(0), 1 - n * tau) / p_small
    hi = min(hi_total / p_small, Fraction(1))
    return Interval(lo, max(lo, hi))


def mirsky_crt_oracle(bset: BSet, word: Word) -> Fraction:
    """Exact cylinder mass for an exactly finite B by CRT pattern counting.

    The truncated characteristic sequence is periodic with period equal to
    the product of the elements; the measure of a cylinder is the density of
    pattern occurrences over one period.
    """
    if not bset.is_exactly_finite:
        raise NotExactlyFinite("the CRT oracle needs an exactly finite B")
    period = bset.period()
    if period > MAX_ORACLE_PERIOD:
        raise PeriodTooLarge(f"period {period} exceeds {MAX_ORACLE_PERIOD}")
    n = len(word)
    eta = np.ones(period + n, dtype=np.uint8)
    for b in bset.elements:
        eta[0::b] = 0
    match = np.ones(period, dtype=bool)
    for i, c in enumerate(word.bits):
        match &= eta[i : i + period] == int(c)
    return Fraction(int(match.sum()), period)


@dataclass(frozen=True)
class MirskyMeasure:
    """Cylinder evaluator for the Mirsky measure of a BSet truncation."""

    bset: BSet

    def cylinder(self, word: Word) -> Interval:
        return mirsky_eval(self.bset, word)


@dataclass(frozen=True)
class BernoulliMeasure:
    """Product measure on the full shift; q is the mass of symbol 0."""

    q: float

    def __post_init__(self):
        if not 0 <= self.q <= 1:
            raise QOutOfRange(f"q={self.q} outside [0, 1]")

    @property
    def bset(self):
        return None  # full shift: no admissibility constraint

    def cylinder(self, word: Word) -> Interval:
        q = Fraction(self.q)
        val = q ** len(word.zeros_positions()) * (1 - q) ** word.ones_count
        return Interval.point(val)


def bernoulli_eval(q: float, word: Word) -> float:
    if not 0 <= q <= 1:
        raise QOutOfRange(f"q={q} outside [0, 1]")
    return q ** len(word.zeros_positions()) * (1.0 - q) ** word.ones_count


def convolve_eval(base, q: float, word: Word) -> Interval:
    """Convolution mass kappa(C) as the superset sum over the base language.

    Extends by continuity to q in {0, 1}: at q=0 only C' = C contributes.
    The base's admissibility pruning keeps the enumeration well below the
    2^zeros worst case on hereditary languages.
    """
    if not 0 <= q <= 1:
        raise QOutOfRange(f"q={q} outside [0, 1]")
    qf = Fraction(q)
    ones = word.ones_count
    bset = base.bset
    terms = []
    sup_iter = (
        supersets(word, bset)
        if bset is not None
        else _all_flips(word)
    )
    for sup in sup_iter:
        delta = sup.ones_count - ones
        if qf == 0 and delta > 0:
            continue
        weight = qf**delta * (1 - qf) ** ones
        if weight == 0:
            continue
        terms.append(base.cylinder(sup) * weight)
    return interval_sum(terms) if terms else ZERO


def _all_flips(word: Word):
    zeros = word.zeros_positions()
    if len(zeros) > MAX_INCLEXCL_ZEROS:
        raise TooManyZeros(
            f"{len(zeros)} zero positions exceed the {MAX_INCLEXCL_ZEROS} cap"
        )
    n = len(word)
    onesets = word.ones_positions()
    for mask in range(1 << len(zeros)):
        extra = {zeros[i] for i in range(len(zeros)) if (mask >> i) & 1}
        yield Word.from_positions(n, set(onesets) | extra)


@dataclass(frozen=True)
class ConvolvedMeasure:
    """Multiplicative convolution of a base cylinder measure with Bernoulli(q)."""

    base: object
    q: float

    def cylinder(self, word: Word) -> Interval:
        return convolve_eval(self.base, self.q, word)


def convolve_bruteforce_oracle(base, q: float, word: Word) -> float:
    """Independent convolution oracle: double sum over words and mask blocks.

    Enumerates every base-language word C' of the same length and every 0/1
    mask D with coordinatewise product C'.D = C, weighting by the exact
    Bernoulli mask mass.  Base values come from the CRT oracle (Mirsky) or
    the closed product form (Bernoulli), never from the superset evaluator.
    """
    if not 0 <= q <= 1:
        raise QOutOfRange(f"q={q} outside [0, 1]")
    n = len(word)
    if n > MAX_ORACLE_LENGTH:
        raise WordTooLong(f"|C|={n} exceeds the oracle cap {MAX_ORACLE_LENGTH}")
    qf = Fraction(q)
    bset = base.bset
    if bset is not None:
        if not bset.is_exactly_finite:
            raise NotExactlyFinite("the bruteforce oracle needs an exactly finite B")
        lang = list(enumerate_language(n, bset, cap=1 << n))
        values = {w.bits: mirsky_crt_oracle(bset, w) for w in lang}
    else:
        lang = [Word.from_mask(n, m) for m in range(1 << n)]
        values = {w.bits: base.cylinder(w).lo for w in lang}

    cmask = 0
    for i in word.ones_positions():
        cmask |= 1 << i
    qpow = [qf**j for j in range(n + 1)]
    ppow = [(1 - qf) ** j for j in range(n + 1)]
    total = Fraction(0)
    for w in lang:
        wmask = 0
        for i in w.ones_positions():
            wmask |= 1 << i
        val = values[w.bits]
        if val == 0:
            continue
        for d in range(1 << n):
            if wmask & d == cmask:
                ones_d = d.bit_count()
                total += val * qpow[n - ones_d] * ppow[ones_d]
    return float(total)


def integral_phi(measure, phi) -> Interval:
    """Integral of a two-symbol-cylinder potential: a finite sum over [ab]."""
    total = None
    for a in "01":
        for b in "01":
            cyl = measure.cylinder(Word(a + b)).to_float()
            term = cyl * phi.value(int(a), int(b))
            total = term if total is None else total + term
    return total
