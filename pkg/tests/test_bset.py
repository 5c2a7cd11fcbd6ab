import math
from fractions import Fraction

import pytest

from bfree.bset import (
    BSet,
    davenport_erdos_table,
    free_density,
    log_density_mset,
    mset_density,
    topological_entropy,
    validate,
)
from bfree.errors import (
    ElementBelowTwo,
    KTooLarge,
    NotAscending,
    NotCoprime,
    WindowExceedsCompleteness,
)
from bfree.generators import make_bset


def test_validate_accepts_coprime_sets():
    b = validate([2, 3, 5])
    assert b.elements == (2, 3, 5)
    assert b.is_exactly_finite


def test_validate_reports_offending_pair():
    with pytest.raises(NotCoprime) as exc:
        validate([2, 4])
    assert exc.value.pair == (2, 4)


def test_validate_rejects_small_and_unsorted():
    with pytest.raises(ElementBelowTwo):
        validate([1, 3])
    with pytest.raises(NotAscending):
        validate([3, 2])


def _simple_prime_sieve(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def test_odd_prime_square_tail_is_below_005():
    # independent verification that {2, 9, 25, 49} with tail 0.05 is honest:
    # partial summation over primes up to 1e6 plus the integral bound 1/x
    partial = sum(1.0 / (p * p) for p in _simple_prime_sieve(10**6) if p % 2 and p * p > 49)
    assert partial + 1e-6 < 0.05
    b = validate([2, 9, 25, 49], tail_bound=0.05, complete_below=10**6)
    assert b.tail_bound == 0.05


def test_free_density_examples():
    assert free_density(validate([2])) == free_density(validate([2]))
    iv = free_density(validate([2]))
    assert iv.lo == iv.hi == Fraction(1, 2)
    iv = free_density(validate([2, 3]))
    assert iv.lo == iv.hi == Fraction(1, 3)


def test_free_density_tail_interval():
    b = validate([2, 9, 25, 49], tail_bound=0.05, complete_below=10**6)
    d_k = Fraction(1, 2) * Fraction(8, 9) * Fraction(24, 25) * Fraction(48, 49)
    iv = free_density(b)
    assert iv.hi == d_k
    assert iv.lo == d_k * (1 - Fraction(0.05))
    assert iv.lo < iv.hi


def test_exactly_finite_interval_is_degenerate():
    for els in ([2], [2, 3], [3, 7, 11]):
        iv = free_density(validate(els))
        assert iv.is_degenerate


def test_entropy_equals_density():
    b = validate([2, 9, 25, 49], tail_bound=0.05, complete_below=10**6)
    assert topological_entropy(b) == free_density(b)


def test_mset_density_examples():
    b = validate([2, 3])
    assert mset_density(b, 1) == Fraction(1, 2)
    # period-6 count: multiples of 2 or 3 in one period are {0,2,3,4}
    direct = Fraction(sum(1 for r in range(6) if r % 2 == 0 or r % 3 == 0), 6)
    assert mset_density(b, 2) == direct == Fraction(2, 3)
    b3 = validate([2, 9, 25])
    period = 2 * 9 * 25
    direct = Fraction(
        sum(1 for r in range(period) if any(r % e == 0 for e in (2, 9, 25))), period
    )
    assert mset_density(b3, 3) == direct == 1 - Fraction(1, 2) * Fraction(8, 9) * Fraction(24, 25)


def test_mset_density_monotone_and_cauchy():
    b = make_bset("prime-squares", 10**4)
    table = davenport_erdos_table(b)
    for (k1, v1), (k2, v2) in zip(table, table[1:]):
        assert v2 >= v1
        assert v2 - v1 <= Fraction(1, b.elements[k2 - 1])


def test_mset_density_complements_free_density():
    b = validate([2, 3, 5, 7])
    for k in range(1, 5):
        prefix = validate(b.elements[:k])
        assert mset_density(b, k) == 1 - free_density(prefix).hi


def test_mset_density_k_too_large():
    with pytest.raises(KTooLarge):
        mset_density(validate([2, 3]), 3)


def test_log_density_examples():
    assert abs(log_density_mset(validate([2]), 10**4) - 0.5) < 0.05
    assert abs(log_density_mset(validate([2, 3]), 10**5) - 2 / 3) < 0.05
    # N=2: the single term is 1/2 when 2 is an element, else empty
    assert log_density_mset(validate([2]), 2) == pytest.approx((1 / math.log(2)) * 0.5)
    assert log_density_mset(validate([3]), 2) == 0.0


def test_log_density_refuses_past_completeness():
    b = validate([2, 9], tail_bound=0.01, complete_below=100)
    with pytest.raises(WindowExceedsCompleteness):
        log_density_mset(b, 1000)


def test_json_roundtrip():
    b = validate([2, 9, 25], tail_bound=0.03, complete_below=500)
    again = BSet.from_json(b.to_json())
    assert again == b
    finite = validate([2, 3])
    assert "null" in finite.to_json()
    assert BSet.from_json(finite.to_json()) == finite
