"""Pressure, entropy, equilibrium parameters and non-Gibbs certificates.

Everything is base 2: the partition sum weights a word by 2 to its maximal
Birkhoff sum, pressures are log2-growth rates, and the Gibbs ratio compares
cylinder mass against 2^(Birkhoff - n P).

For the two-symbol-cylinder family  phi = a00 on [00] + a01 on [01] + a1 on
[1]  over a B-free subshift with 2 in B, closed forms hold:

    P        = a00 (1 - 2d) + d log2(2^(a1+a01) + 2^(2 a00))
    h(kappa) = H2(p) d                 for kappa the Bernoulli convolution
    p*       = 2^(2 a00) / (2^(a1+a01) + 2^(2 a00))
    d^phi   >= a00 (1 - 2d) + d max(2 a00, a1 + a01)

and at p = p* the pressure identity P = h + integral(phi) is algebraic in d,
which `equilibrium_residual` verifies to machine width.  The non-Gibbs
certificate evaluates the three sufficient conditions (pressure bound,
sup comparison, variation bound) with interval-safe trichotomy, and the
trajectory exhibits the decay of the max-ones cylinder masses that a Gibbs
measure would forbid.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernels
from .bset import BSet, free_density
from .errors import (
    EnumerationBudgetExceeded,
    NotAdmissible,
    PreconditionViolated,
    QOutOfRange,
)
from .intervals import (
    Interval,
    binary_entropy_interval,
    exp2_interval,
    log2_interval,
    log2_sum_of_two_pow,
)
from .measures import mirsky_eval_structured
from .words import DEFAULT_MAX_NODES, Word, is_admissible, max_ones

DEFAULT_EQ_TOL = 1e-9


@dataclass(frozen=True)
class Potential2:
    """A potential depending on two consecutive symbols."""

    v00: float
    v01: float
    v10: float
    v11: float

    @classmethod
    def paper_family(cls, a00: float, a01: float, a1: float) -> "Potential2":
        """a00 on [00], a01 on [01], a1 on [1] (both [10] and [11])."""
        return cls(a00, a01, a1, a1)

    @classmethod
    def constant(cls, c: float) -> "Potential2":
        return cls(c, c, c, c)

    def value(self, x0: int, x1: int) -> float:
        return (self.v00, self.v01, self.v10, self.v11)[2 * x0 + x1]

    @property
    def sup_zero(self) -> float:
        return max(self.v00, self.v01)

    @property
    def sup_one(self) -> float:
        return max(self.v10, self.v11)

    @property
    def var_zero(self) -> float:
        return max(self.v00, self.v01) - min(self.v00, self.v01)

    @property
    def var_one(self) -> float:
        return max(self.v10, self.v11) - min(self.v10, self.v11)

    @property
    def bound(self) -> float:
        """Sup norm |phi|."""
        return max(abs(v) for v in (self.v00, self.v01, self.v10, self.v11))


def birkhoff_sup(word: Word, phi: Potential2, bset: BSet) -> float:
    """Largest n-step Birkhoff sum over points starting with this word.

    The sum reads one symbol past the right edge, so the last term maximizes
    over the admissible one-symbol extensions (extending by 0 always stays in
    the language).
    """
    if not is_admissible(word, bset):
        raise NotAdmissible(f"word {word.bits} is not in the language")
    n = len(word)
    bits = [int(c) for c in word.bits]
    total = sum(phi.value(bits[i], bits[i + 1]) for i in range(n - 1))
    last = bits[-1]
    ext = phi.value(last, 0)
    if is_admissible(Word(word.bits + "1"), bset):
        ext = max(ext, phi.value(last, 1))
    return total + ext


def partition_pressure_numeric(
    n: int, phi: Potential2, bset: BSet, max_nodes: int = DEFAULT_MAX_NODES
) -> float:
    """log2(partition sum)/n: an upper bound on the truncated pressure."""
    stats = kernels.partition_stats(
        n, list(bset.elements), phi.v00, phi.v01, phi.v10, phi.v11, max_nodes
    )
    if stats is None:
        raise EnumerationBudgetExceeded(f"Z_{n} exceeded {max_nodes} nodes")
    return stats[0] / n


def dphi_numeric_upper(
    n: int, phi: Potential2, bset: BSet, max_nodes: int = DEFAULT_MAX_NODES
) -> float:
    """(max over admissible words of the sup-Birkhoff sum)/n.

    The sequence is subadditive, so every value upper-bounds the limit
    Birkhoff density of the potential.
    """
    stats = kernels.partition_stats(
        n, list(bset.elements), phi.v00, phi.v01, phi.v10, phi.v11, max_nodes
    )
    if stats is None:
        raise EnumerationBudgetExceeded(f"max Birkhoff at n={n} exceeded {max_nodes} nodes")
    return stats[1] / n


def pressure_closed_form(a00: float, a01: float, a1: float, d: Interval) -> Interval:
    """Closed-form pressure for 2 in B: a00(1-2d) + d log2(2^(a1+a01)+2^(2a00))."""
    d = d.to_float()
    log_term = log2_sum_of_two_pow(a1 + a01, 2.0 * a00)
    return a00 * (1.0 - 2.0 * d) + d * log_term


def entropy_convolved(p: float, d: Interval) -> Interval:
    """Entropy of the Bernoulli convolution: H2(p) * d, base 2."""
    if p == 0.0 or p == 1.0:
        return Interval.point(0.0)  # continuity endpoint, exactly zero
    return binary_entropy_interval(p) * d.to_float()


def equilibrium_p(a00: float, a01: float, a1: float) -> float:
    """The convolution parameter that makes the closed forms balance."""
    return 1.0 / (1.0 + math.pow(2.0, a1 + a01 - 2.0 * a00))


def integral_convolved_closed(a00: float, a01: float, a1: float, p: float, d: Interval) -> Interval:
    """Closed-form integral of the family potential against the convolution."""
    d = d.to_float()
    return a00 * (1.0 - 2.0 * d) + d * (2.0 * a00 * p + (a01 + a1) * (1.0 - p))


def equilibrium_residual(a00: float, a01: float, a1: float, d: Interval) -> Interval:
    """P - h - integral at p*; contains 0 and is algebraically 0 in d."""
    p = equilibrium_p(a00, a01, a1)
    return (
        pressure_closed_form(a00, a01, a1, d)
        - entropy_convolved(p, d)
        - integral_convolved_closed(a00, a01, a1, p, d)
    )


def dphi_lower(a00: float, a01: float, a1: float, d: Interval) -> Interval:
    """Lower bound on the Birkhoff density of the potential.

    The integral against the q-convolution is linear in q, so its sup over
    q in (0,1) is attained at an endpoint: a00(1-2d) + d max(2a00, a1+a01).
    """
    d = d.to_float()
    return a00 * (1.0 - 2.0 * d) + d * max(2.0 * a00, a1 + a01)


@dataclass(frozen=True)
class PressureReport:
    closed_form: Interval
    numeric_upper: tuple[tuple[int, float], ...]
    d_interval: Interval

    def to_dict(self) -> dict:
        return {
            "closed_form": {"lo": float(self.closed_form.lo), "hi": float(self.closed_form.hi)},
            "numeric_upper": [{"n": n, "log2_Z_over_n": v} for n, v in self.numeric_upper],
            "d": {"lo": float(self.d_interval.lo), "hi": float(self.d_interval.hi)},
        }


def pressure_report(
    a00: float,
    a01: float,
    a1: float,
    bset: BSet,
    ns: tuple[int, ...],
    max_nodes: int = DEFAULT_MAX_NODES,
) -> PressureReport:
    phi = Potential2.paper_family(a00, a01, a1)
    d_iv = free_density(bset)
    numeric = tuple((n, partition_pressure_numeric(n, phi, bset, max_nodes)) for n in ns)
    return PressureReport(pressure_closed_form(a00, a01, a1, d_iv), numeric, d_iv.to_float())


# --- certificates -----------------------------------------------------------

HOLDS = "holds"
FAILS = "fails"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Condition:
    """One certificate hypothesis with its interval-safe status and slack."""

    name: str
    status: str
    slack_lo: float
    slack_hi: float

    @classmethod
    def from_comparison(cls, name: str, lhs: Interval, rhs: Interval, tol: float) -> "Condition":
        # Tests lhs <= rhs.  Holds only if true for every pair of values in
        # the intervals, fails only if false for every pair; tol absorbs the
        # float noise of exact-equality cases.
        slack_lo = float(rhs.lo) - float(lhs.hi)
        slack_hi = float(rhs.hi) - float(lhs.lo)
        if slack_lo >= -tol:
            status = HOLDS
        elif slack_hi < -tol:
            status = FAILS
        else:
            status = INDETERMINATE
        return cls(name, status, slack_lo, slack_hi)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "slack": [self.slack_lo, self.slack_hi],
        }


CERTIFIED = "certified-non-gibbs"
NOT_CERTIFIED = "not-certified"


@dataclass(frozen=True)
class GibbsCertificate:
    """Evaluation of the three sufficient conditions for failing Gibbs."""

    cond_pressure: Condition
    cond_sup: Condition
    cond_var: Condition
    q: float
    corollary_form: bool  # zero-variation potential at q = 1/2: P <= d + dphi

    @property
    def verdict(self) -> str:
        statuses = (self.cond_pressure.status, self.cond_sup.status, self.cond_var.status)
        if all(s == HOLDS for s in statuses):
            return CERTIFIED
        if any(s == FAILS for s in statuses):
            return NOT_CERTIFIED
        return INDETERMINATE

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "conditions": {
                "pressure": self.cond_pressure.to_dict(),
                "sup": self.cond_sup.to_dict(),
                "var": self.cond_var.to_dict(),
            },
            "corollary_form": self.corollary_form,
            "verdict": self.verdict,
        }


def _log2_one_minus_q(q: float) -> Interval:
    if q == 0.5:
        return Interval.point(-1.0)  # exact in binary
    return log2_interval(1.0 - q)


def gibbs_certificate(
    phi: Potential2,
    q: float,
    d: Interval,
    dphi: Interval,
    pressure: Interval,
    tol: float = DEFAULT_EQ_TOL,
) -> GibbsCertificate:
    """Evaluate the certificate hypotheses at convolution parameter q.

    Conditions (base-2 logs):
      pressure: P <= (Var phi([0]) - log2(1-q) - Var phi([1])) d + dphi - Var phi([0])
      sup:      sup phi([1]) >= sup phi([0])
      var:      Var phi([1]) <= Var phi([0]) - log2(1-q)

    All three holding certifies that the convolution is not a Gibbs measure
    for phi.  Interval overlap within tol reports as indeterminate rather
    than being coerced.
    """
    if not 0 < q < 1:
        raise QOutOfRange(f"q={q} outside (0, 1)")
    d = d.to_float()
    dphi = dphi.to_float()
    pressure = pressure.to_float()
    log1q = _log2_one_minus_q(q)
    coeff = phi.var_zero - log1q - phi.var_one  # interval
    rhs = coeff * d + dphi - phi.var_zero
    cond_pressure = Condition.from_comparison("pressure", pressure, rhs, tol)
    cond_sup = Condition.from_comparison(
        "sup", Interval.point(phi.sup_zero), Interval.point(phi.sup_one), tol
    )
    var_rhs = phi.var_zero - log1q
    cond_var = Condition.from_comparison(
        "var", Interval.point(phi.var_one), var_rhs, tol
    )
    corollary = phi.var_zero == 0.0 and phi.var_one == 0.0 and q == 0.5
    return GibbsCertificate(cond_pressure, cond_sup, cond_var, q, corollary)


# --- trajectories -----------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryRow:
    n: int
    word: Word
    nu: Interval
    kappa: Interval
    ratio: Interval
    birkhoff: float
    ratio_bounded: bool  # ratio <= nu * 2^(4|phi|) within intervals
    ones_lb_ok: bool  # ones count >= n*d.lo - 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "word": self.word.bits,
            "nu_lo": float(self.nu.lo),
            "nu_hi": float(self.nu.hi),
            "kappa_lo": float(self.kappa.lo),
            "kappa_hi": float(self.kappa.hi),
            "ratio_lo": float(self.ratio.lo),
            "ratio_hi": float(self.ratio.hi),
        }


CSV_COLUMNS = ("n", "word", "nu_lo", "nu_hi", "kappa_lo", "kappa_hi", "ratio_lo", "ratio_hi")


@dataclass(frozen=True)
class GibbsTrajectory:
    """Per-n Gibbs-ratio data along the max-ones cylinder sequence.

    A Gibbs measure forces inf_n ratio > 0; these trajectories decay to 0
    together with the Mirsky mass of the max-ones blocks.
    """

    rows: tuple[TrajectoryRow, ...]
    p: float
    pressure_mid: float
    phi: Potential2

    @property
    def nu_decreasing(self) -> bool:
        his = [float(r.nu.hi) for r in self.rows]
        return all(b < a for a, b in zip(his, his[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.to_dict())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "pressure_mid": self.pressure_mid,
            "rows": [r.to_dict() for r in self.rows],
            "nu_decreasing": self.nu_decreasing,
            "all_rows_bounded": all(r.ratio_bounded for r in self.rows),
        }


def gibbs_trajectory(
    a00: float,
    a01: float,
    a1: float,
    bset: BSet,
    n_grid: tuple[int, ...],
    max_nodes: int = DEFAULT_MAX_NODES,
    slack_bits: float = 1e-9,
) -> GibbsTrajectory:
    """Gibbs-ratio rows along max-ones words at the equilibrium parameter.

    Requires a1 >= max(a00, a01), 2 a00 <= a1 + a01 and 2 among the elements.
    Each row takes the lexicographically smallest max-ones witness C_n, its
    Mirsky mass (structured evaluator, exact rationals), the convolution mass
    kappa(C_n) = nu(C_n) (1-p)^(ones) (no admissible word strictly dominates
    a max-ones block), and ratio = kappa(C_n) 2^(n P - S_n) with S_n the
    sup-Birkhoff sum of C_n and P the closed-form midpoint.
    """
    if a1 < max(a00, a01) or 2 * a00 > a1 + a01:
        raise PreconditionViolated(
            "need a1 >= max(a00, a01) and 2*a00 <= a1 + a01 for the decay argument"
        )
    if 2 not in bset.elements:
        raise PreconditionViolated("the closed forms need 2 among the elements")
    phi = Potential2.paper_family(a00, a01, a1)
    p = equilibrium_p(a00, a01, a1)
    pf = Fraction(p)
    d_iv = free_density(bset)
    p_mid = pressure_closed_form(a00, a01, a1, d_iv).mid
    four_phi = exp2_interval(4.0 * phi.bound)
    slack = exp2_interval(slack_bits)
    rows = []
    for n in sorted(n_grid):
        res = max_ones(n, bset, method="exact", max_nodes=max_nodes)
        word = res.witness
        nu = mirsky_eval_structured(bset, word)
        kappa = nu * (1 - pf) ** word.ones_count
        s_n = birkhoff_sup(word, phi, bset)
        ratio = kappa.to_float() * exp2_interval(n * p_mid - s_n)
        bound = nu.to_float() * four_phi * slack
        ratio_bounded = float(ratio.hi) <= float(bound.hi)
        ones_lb_ok = word.ones_count >= n * float(d_iv.lo) - 1.0
        rows.append(
            TrajectoryRow(n, word, nu, kappa, ratio, s_n, ratio_bounded, ones_lb_ok)
        )
    return GibbsTrajectory(tuple(rows), p, p_mid, phi)
