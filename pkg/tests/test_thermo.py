import math
import random
from fractions import Fraction

import pytest

from bfree._backend import kernels
from bfree.bset import free_density, validate
from bfree.errors import NotAdmissible, PreconditionViolated, QOutOfRange
from bfree.generators import make_bset
from bfree.intervals import Interval
from bfree.measures import (
    ConvolvedMeasure,
    MirskyMeasure,
    convolve_eval,
    integral_phi,
    mirsky_crt_oracle,
)
from bfree.thermo import (
    Potential2,
    birkhoff_sup,
    dphi_lower,
    dphi_numeric_upper,
    entropy_convolved,
    equilibrium_p,
    equilibrium_residual,
    gibbs_certificate,
    gibbs_trajectory,
    integral_convolved_closed,
    partition_pressure_numeric,
    pressure_closed_form,
    pressure_report,
)
from bfree.words import Word, enumerate_language

B2 = validate([2])
B23 = validate([2, 3])


# --- potential ---------------------------------------------------------------


def test_potential_family_statistics():
    phi = Potential2.paper_family(0.3, -0.2, 0.9)
    assert phi.sup_zero == 0.3 and phi.sup_one == 0.9
    assert phi.var_zero == pytest.approx(0.5)
    assert phi.var_one == 0.0
    assert phi.bound == 0.9
    assert phi.value(0, 0) == 0.3 and phi.value(0, 1) == -0.2
    assert phi.value(1, 0) == phi.value(1, 1) == 0.9


# --- Birkhoff sums -----------------------------------------------------------


def test_birkhoff_constant():
    phi = Potential2.constant(0.4)
    for bits in ("0", "0101", "000101"):
        assert birkhoff_sup(Word(bits), phi, B2) == pytest.approx(0.4 * len(bits))


def test_birkhoff_example_010():
    phi = Potential2.paper_family(0.3, -0.2, 0.9)
    # extensions 0100 and 0101 are both admissible; the sup picks the larger tail
    expect = -0.2 + 0.9 + max(0.3, -0.2)
    assert birkhoff_sup(Word("010"), phi, B2) == pytest.approx(expect)


def test_birkhoff_blocked_extension():
    phi = Potential2(0.0, 0.0, 0.0, 5.0)
    # after a trailing 1 with 2 in B, extending by another 1 is inadmissible,
    # so the big v(1,1) tail term cannot be collected
    assert birkhoff_sup(Word("01"), phi, B2) == pytest.approx(0.0)
    # without the parity block the same potential does collect it
    assert birkhoff_sup(Word("01"), phi, validate([3])) == pytest.approx(5.0)


def test_birkhoff_rejects_inadmissible():
    with pytest.raises(NotAdmissible):
        birkhoff_sup(Word("11"), Potential2.constant(0.0), B2)


def test_birkhoff_claim_bound():
    rng = random.Random(12)
    phi = Potential2.paper_family(0.7, -0.4, 1.3)
    for w in enumerate_language(10, B23, cap=10**6):
        ones = w.ones_count
        n = len(w)
        bound = (1.3 + -0.4) * ones + 0.7 * (n - 2 * ones) + phi.var_zero
        assert birkhoff_sup(w, phi, B23) <= bound + 1e-12


# --- partition sums ----------------------------------------------------------


def test_partition_zero_potential_matches_entropy_estimate():
    zero = Potential2.constant(0.0)
    assert partition_pressure_numeric(1, zero, B2) == pytest.approx(1.0)
    from bfree.words import count_language

    for n in (4, 9, 14):
        assert partition_pressure_numeric(n, zero, B23) == pytest.approx(
            math.log2(count_language(n, B23)) / n
        )


def test_partition_decreases_toward_closed_form():
    phi = Potential2.paper_family(0.0, 0.0, 1.0)
    closed = pressure_closed_form(0.0, 0.0, 1.0, Interval.point(Fraction(1, 3)))
    values = [partition_pressure_numeric(n, phi, B23) for n in (12, 24)]
    assert values[1] < values[0]
    assert values[1] >= float(closed.lo) - 1e-9


def test_partition_subadditive():
    rng = random.Random(5)
    for _ in range(3):
        phi = Potential2(*(rng.uniform(-1.5, 1.5) for _ in range(4)))
        logz = {}
        for n in range(1, 13):
            logz[n] = kernels.partition_stats(
                n, [2, 3], phi.v00, phi.v01, phi.v10, phi.v11, 10**8
            )[0]
        for n in range(1, 9):
            for m in range(1, 9):
                if n + m <= 12:
                    assert logz[n + m] <= logz[n] + logz[m] + 1e-9


# --- closed forms ------------------------------------------------------------


def test_pressure_closed_form_zero_potential_is_entropy():
    d = Interval.point(Fraction(1, 3))
    iv = pressure_closed_form(0.0, 0.0, 0.0, d)
    assert iv.contains(1 / 3)
    assert iv.width < 1e-14


def test_pressure_closed_form_example():
    iv = pressure_closed_form(0.0, 0.0, 1.0, Interval.point(Fraction(1, 3)))
    assert abs(iv.mid - math.log2(3) / 3) < 1e-13


def test_pressure_one_cylinder_reduction():
    rng = random.Random(8)
    for _ in range(50):
        a0, a1, dv = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.05, 0.45)
        d = Interval.point(dv)
        general = pressure_closed_form(a0, a0, a1, d)
        reduced = a0 * (1 - dv) + dv * math.log2(2.0**a1 + 2.0**a0)
        assert general.lo - 1e-10 <= reduced <= general.hi + 1e-10


def test_pressure_interval_image_over_d():
    iv_d = Interval(0.2, 0.3)
    out = pressure_closed_form(0.5, -0.5, 1.0, iv_d)
    lo_end = pressure_closed_form(0.5, -0.5, 1.0, Interval.point(0.2))
    hi_end = pressure_closed_form(0.5, -0.5, 1.0, Interval.point(0.3))
    assert out.lo <= min(lo_end.mid, hi_end.mid) <= max(lo_end.mid, hi_end.mid) <= out.hi


def test_entropy_convolved_values():
    d = Interval.point(Fraction(1, 3))
    assert entropy_convolved(0.5, d).contains(1 / 3)
    assert entropy_convolved(0.0, d).is_degenerate
    assert entropy_convolved(1.0, d).mid == 0.0
    h_quarter = 2 - 0.75 * math.log2(3)  # independent evaluation of H2(1/4)
    iv = entropy_convolved(0.25, d)
    assert abs(iv.mid - h_quarter / 3) < 1e-13


def test_equilibrium_p_values():
    assert equilibrium_p(0.7, 0.7, 0.7) == pytest.approx(0.5)
    assert equilibrium_p(0.0, 0.0, 1.0) == pytest.approx(1 / 3)
    rng = random.Random(3)
    for _ in range(50):
        a0, a1 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        p = equilibrium_p(a0, a0, a1)
        assert p == pytest.approx(2.0**a0 / (2.0**a1 + 2.0**a0))


def test_equilibrium_residual_is_zero_at_p_star():
    rng = random.Random(17)
    for _ in range(100):
        a = [rng.uniform(-2, 2) for _ in range(3)]
        for dv in (0.1, 0.25, 0.4):
            r = equilibrium_residual(*a, Interval.point(dv))
            assert r.contains(0.0)
            assert max(abs(float(r.lo)), abs(float(r.hi))) <= 1e-12


def test_equilibrium_residual_zero_potential():
    r = equilibrium_residual(0.0, 0.0, 0.0, Interval.point(0.3))
    assert r.contains(0.0) and float(r.hi) - float(r.lo) < 1e-14


def test_perturbed_p_breaks_identity():
    a00, a01, a1 = 0.5, -0.3, 1.0
    d = Interval.point(0.25)
    p = equilibrium_p(a00, a01, a1) + 0.01
    off = (
        pressure_closed_form(a00, a01, a1, d)
        - entropy_convolved(p, d)
        - integral_convolved_closed(a00, a01, a1, p, d)
    )
    assert off.lo > 1e-8 or off.hi < -1e-8


def test_dphi_lower_values():
    assert dphi_lower(0.0, 0.0, 1.0, Interval.point(Fraction(1, 3))).contains(1 / 3)
    assert abs(dphi_lower(0.7, 0.7, 0.7, Interval.point(0.29)).mid - 0.7) < 1e-12
    # one-cylinder case with a1 >= a0 reduces to a0(1-d) + a1 d
    iv = dphi_lower(0.2, 0.2, 1.4, Interval.point(0.3))
    assert abs(iv.mid - (0.2 * 0.7 + 1.4 * 0.3)) < 1e-12


# --- numeric Birkhoff density bounds ------------------------------------------


def test_dphi_upper_indicator():
    phi = Potential2.paper_family(0.0, 0.0, 1.0)
    assert dphi_numeric_upper(6, phi, B23) == pytest.approx(2 / 6)
    # at multiples of 6 the witness density is exactly the free density
    for n in (12, 18, 24):
        assert dphi_numeric_upper(n, phi, B23) == pytest.approx(1 / 3)


def test_dphi_upper_constant():
    phi = Potential2.constant(0.7)
    for n in (3, 7, 11):
        assert dphi_numeric_upper(n, phi, B23) == pytest.approx(0.7)


def test_density_chain():
    d = free_density(B23)
    mirsky = MirskyMeasure(B23)
    for phi, abc in [
        (Potential2.paper_family(0.0, 0.0, 1.0), (0.0, 0.0, 1.0)),
        (Potential2.constant(0.7), (0.7, 0.7, 0.7)),
    ]:
        uppers = {n: dphi_numeric_upper(n, phi, B23) for n in range(1, 17)}
        low = dphi_lower(*abc, d)
        for n, up in uppers.items():
            assert float(low.lo) <= up + 1e-9
        for q in (0.25, 0.5):
            integral = integral_phi(ConvolvedMeasure(mirsky, q), phi)
            for n, up in uppers.items():
                assert float(integral.hi) <= up + 1e-9
        integral = integral_phi(mirsky, phi)
        for n, up in uppers.items():
            assert float(integral.hi) <= up + 1e-9


# --- certificates ------------------------------------------------------------


def _certificate_for(a00, a01, a1, d, q=None):
    phi = Potential2.paper_family(a00, a01, a1)
    q = equilibrium_p(a00, a01, a1) if q is None else q
    return gibbs_certificate(
        phi,
        q,
        d,
        dphi_lower(a00, a01, a1, d),
        pressure_closed_form(a00, a01, a1, d),
    )


def test_certificate_one_cylinder_family_certifies():
    d = free_density(B23)
    rng = random.Random(40)
    for _ in range(20):
        a0 = rng.uniform(-2, 2)
        a1 = a0 + rng.uniform(0.0, 2.0)
        cert = _certificate_for(a0, a0, a1, d)
        assert cert.verdict == "certified-non-gibbs", (a0, a1, cert.to_dict())


def test_certificate_failing_family():
    d = free_density(B23)
    rng = random.Random(41)
    for _ in range(20):
        a01 = rng.uniform(-2, 0.0)
        a00 = a01 + rng.uniform(0.2, 1.5)
        a1 = a00 + rng.uniform(0.1, 1.0)
        if 2 * a00 <= a1 + a01:
            a1 = 2 * a00 - a01 - 0.05  # force the failing regime
        assert a1 > a00 > a01 and 2 * a00 > a1 + a01
        cert = _certificate_for(a00, a01, a1, d)
        assert cert.cond_pressure.status == "fails", (a00, a01, a1, cert.to_dict())


def test_certificate_constant_potential_equality():
    d = free_density(B23)
    cert = _certificate_for(0.7, 0.7, 0.7, d, q=0.5)
    assert cert.corollary_form
    assert cert.cond_sup.status == "holds"
    assert cert.cond_var.status == "holds"
    assert cert.cond_pressure.status == "holds"  # equality within tolerance


def test_certificate_shift_invariance():
    d = free_density(B23)
    for c in (-1.3, 0.0, 0.8):
        base = _certificate_for(0.1, -0.2, 0.9, d)
        phi = Potential2.paper_family(0.1 + c, -0.2 + c, 0.9 + c)
        q = equilibrium_p(0.1, -0.2, 0.9)  # p* is shift-invariant
        assert equilibrium_p(0.1 + c, -0.2 + c, 0.9 + c) == pytest.approx(q)
        shifted = gibbs_certificate(
            phi,
            q,
            d,
            dphi_lower(0.1, -0.2, 0.9, d) + c,
            pressure_closed_form(0.1, -0.2, 0.9, d) + c,
        )
        assert shifted.verdict == base.verdict
        assert shifted.cond_pressure.status == base.cond_pressure.status


def test_certificate_indeterminate_on_wide_d():
    # the equality-case pressure condition cannot resolve on a wide interval
    wide = validate([2, 9, 25, 49], tail_bound=0.05, complete_below=10**6)
    cert = _certificate_for(0.0, 0.0, 1.0, free_density(wide))
    assert cert.cond_pressure.status == "indeterminate"
    assert cert.verdict == "indeterminate"


def test_certificate_q_range():
    d = free_density(B23)
    with pytest.raises(QOutOfRange):
        _certificate_for(0.0, 0.0, 1.0, d, q=0.0)
    with pytest.raises(QOutOfRange):
        _certificate_for(0.0, 0.0, 1.0, d, q=1.0)


# --- pressure report -----------------------------------------------------------


def test_pressure_report_invariants():
    report = pressure_report(0.0, 0.0, 1.0, B23, (6, 12, 18))
    values = [v for _, v in report.numeric_upper]
    assert values == sorted(values, reverse=True)
    for v in values:
        assert v >= float(report.closed_form.lo) - 1e-9
    d = report.to_dict()
    assert {"closed_form", "numeric_upper", "d"} <= set(d)


# --- trajectories ---------------------------------------------------------------


def test_trajectory_preconditions():
    with pytest.raises(PreconditionViolated):
        gibbs_trajectory(1.0, 0.0, 0.5, B23, (4, 8))  # a1 < a00
    with pytest.raises(PreconditionViolated):
        gibbs_trajectory(1.0, 0.0, 1.5, B23, (4, 8))  # 2 a00 > a1 + a01
    with pytest.raises(PreconditionViolated):
        gibbs_trajectory(0.0, 0.0, 1.0, validate([3, 5]), (4, 8))  # 2 not in B


def test_trajectory_n1_row_closed_form():
    traj = gibbs_trajectory(0.0, 0.0, 1.0, B23, (1,))
    row = traj.rows[0]
    assert row.word.bits == "1"
    d = Fraction(1, 3)
    p = Fraction(traj.p)
    assert row.nu.lo == row.nu.hi == d
    assert row.kappa.lo == row.kappa.hi == d * (1 - p)
    expect_ratio = float(d * (1 - p)) * 2.0 ** (traj.pressure_mid - 1.0)
    assert row.ratio.lo <= expect_ratio <= row.ratio.hi


def test_trajectory_rows_validate_against_oracles():
    b = validate([2, 9, 25])
    traj = gibbs_trajectory(0.0, 0.0, 1.0, b, (4, 8, 12, 16))
    mm = MirskyMeasure(b)
    for row in traj.rows:
        exact = mirsky_crt_oracle(b, row.word)
        assert row.nu.contains(exact)
        kappa_iv = convolve_eval(mm, traj.p, row.word)
        assert kappa_iv.intersects(row.kappa)
        assert row.ratio_bounded and row.ones_lb_ok


def test_trajectory_decay_on_demo_generator():
    bset = make_bset("two-plus-odd-prime-squares", 1000)
    traj = gibbs_trajectory(0.0, 0.0, 1.0, bset, (4, 8, 16, 32, 64))
    assert traj.nu_decreasing
    assert all(r.ratio_bounded for r in traj.rows)
    assert all(r.ones_lb_ok for r in traj.rows)
    csv_text = traj.to_csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "n,word,nu_lo,nu_hi,kappa_lo,kappa_hi,ratio_lo,ratio_hi"
    assert len(lines) == 6
