"""Certified interval arithmetic with mixed exact/float endpoints.

Endpoints may be ``fractions.Fraction`` (or int), in which case arithmetic is
exact and intervals stay tight, or ``float``, in which case every operation
rounds outward by one ulp via ``math.nextafter``.  IEEE 754 guarantees that
+, -, *, / and ``math.fsum`` are correctly rounded, so a single outward step
certifies containment.  Transcendental helpers (exp2, log2, log1p) are not
guaranteed correctly rounded by libm and get a two-ulp margin.

The number-theoretic evaluators in this package keep Fraction endpoints all
the way through; the closed-form pressure/entropy formulas use the float
helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

_INF = math.inf


def _exp2(x: float) -> float:
    return math.pow(2.0, x)


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


def down(x):
    """Round a freshly computed value down by one ulp (floats only)."""
    return math.nextafter(x, -_INF) if isinstance(x, float) else x


def up(x):
    return math.nextafter(x, _INF) if isinstance(x, float) else x


def down2(x):
    """Two-ulp downward margin, for libm results."""
    return math.nextafter(math.nextafter(x, -_INF), -_INF)


def up2(x):
    return math.nextafter(math.nextafter(x, _INF), _INF)


def float_down(x) -> float:
    """Largest float <= x (directional conversion from an exact value)."""
    if isinstance(x, float):
        return x
    f = float(x)
    return f if Fraction(f) <= x else math.nextafter(f, -_INF)


def float_up(x) -> float:
    if isinstance(x, float):
        return x
    f = float(x)
    return f if Fraction(f) >= x else math.nextafter(f, _INF)


def _exact_pair(a, b) -> bool:
    return _is_exact(a) and _is_exact(b)


def add_down(a, b):
    # Mixed exact/float operands lose <= 1 ulp in conversion plus <= 0.5 ulp
    # in the operation; a two-ulp step certifies either way.
    return a + b if _exact_pair(a, b) else down2(float(a) + float(b))


def add_up(a, b):
    return a + b if _exact_pair(a, b) else up2(float(a) + float(b))


def sub_down(a, b):
    return a - b if _exact_pair(a, b) else down2(float(a) - float(b))


def sub_up(a, b):
    return a - b if _exact_pair(a, b) else up2(float(a) - float(b))


def mul_down(a, b):
    return a * b if _exact_pair(a, b) else down2(float(a) * float(b))


def mul_up(a, b):
    return a * b if _exact_pair(a, b) else up2(float(a) * float(b))


def sum_down(xs) -> float | Fraction:
    xs = list(xs)
    if all(_is_exact(x) for x in xs):
        return sum(xs, Fraction(0))
    return down(math.fsum(float_down(x) for x in xs))


def sum_up(xs) -> float | Fraction:
    xs = list(xs)
    if all(_is_exact(x) for x in xs):
        return sum(xs, Fraction(0))
    return up(math.fsum(float_up(x) for x in xs))


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] guaranteed to contain a true value."""

    lo: float | Fraction
    hi: float | Fraction

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")
        for e in (self.lo, self.hi):
            if isinstance(e, float) and not math.isfinite(e):
                raise ValueError("interval endpoints must be finite")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (float(self.lo) + float(self.hi)) / 2.0

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_float(self) -> "Interval":
        """Outward-rounded float enclosure of this interval."""
        return Interval(float_down(self.lo), float_up(self.hi))

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
        return Interval(add_down(self.lo, other), add_up(self.hi, other))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Interval) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Interval):
            other = Interval.point(other)
        cands_lo = []
        cands_hi = []
        for a in (self.lo, self.hi):
            for b in (other.lo, other.hi):
                cands_lo.append(mul_down(a, b))
                cands_hi.append(mul_up(a, b))
        return Interval(min(cands_lo), max(cands_hi))

    __rmul__ = __mul__

    def scaled_pow(self, k: int) -> "Interval":
        """self**k for integer k >= 0, valid for intervals within [0, inf)."""
        if k == 0:
            return Interval.point(1 if _is_exact(self.lo) else 1.0)
        if self.lo < 0:
            raise ValueError("scaled_pow expects a nonnegative interval")
        if _is_exact(self.lo) and _is_exact(self.hi):
            return Interval(self.lo**k, self.hi**k)
        lo, hi = self.lo, self.hi
        rlo, rhi = lo, hi
        for _ in range(k - 1):
            rlo = mul_down(rlo, lo)
            rhi = mul_up(rhi, hi)
        return Interval(rlo, rhi)

    def __repr__(self):
        return f"[{float(self.lo)!r}, {float(self.hi)!r}]"


def interval_sum(terms) -> Interval:
    """Sum of intervals; float paths use fsum with one-ulp outward rounding."""
    terms = list(terms)
    if not terms:
        return Interval.point(0)
    return Interval(sum_down(t.lo for t in terms), sum_up(t.hi for t in terms))


def exp2_interval(x) -> Interval:
    """Enclosure of 2**x for a scalar or interval x."""
    if isinstance(x, Interval):
        return Interval(max(0.0, down2(_exp2(float(x.lo)))), up2(_exp2(float(x.hi))))
    v = _exp2(float(x))
    return Interval(max(0.0, down2(v)), up2(v))


def log2_interval(x) -> Interval:
    if isinstance(x, Interval):
        return Interval(down2(math.log2(float(x.lo))), up2(math.log2(float(x.hi))))
    v = math.log2(float(x))
    return Interval(down2(v), up2(v))


def log2_sum_of_two_pow(x: float, y: float) -> Interval:
    """Enclosure of log2(2**x + 2**y), computed in the max-shifted form."""
    m = max(x, y)
    t = exp2_interval(min(x, y) - m)
    s = Interval(add_down(1.0, t.lo), add_up(1.0, t.hi))
    return log2_interval(s) + m


def binary_entropy_interval(p: float) -> Interval:
    """Enclosure of H2(p) = -p*log2(p) - (1-p)*log2(1-p), base 2."""
    if p < 0.0 or p > 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return Interval.point(0.0)
    q = 1.0 - p
    lo = add_down(mul_down(-p, up2(math.log2(p))), mul_down(-q, up2(math.log2(q))))
    hi = add_up(mul_up(-p, down2(math.log2(p))), mul_up(-q, down2(math.log2(q))))
    # H2 <= 1 exactly; clip the upper endpoint to keep the bound sharp at 1/2.
    return Interval(min(lo, 1.0), min(hi, 1.0))
