import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadcorr import (
    OutOfRange,
    c_constant,
    covolume,
    field_new,
    index_gamma,
    kronecker,
    l_value_2,
    weighted_char_sums,
)


def squarefree_up_to(limit):
    out = []
    for d in range(2, limit + 1):
        if all(d % (k * k) for k in range(2, int(math.isqrt(d)) + 1)):
            out.append(d)
    return out


def test_kronecker_examples():
    assert kronecker(8, 3) == -1
    assert kronecker(5, 4) == 1
    assert kronecker(8, 2) == 0


@given(st.sampled_from(squarefree_up_to(60)),
       st.integers(min_value=1, max_value=500),
       st.integers(min_value=1, max_value=500))
def test_kronecker_multiplicative_and_periodic(d, m, n):
    delta = field_new(d).delta
    assert kronecker(delta, m * n) == kronecker(delta, m) * kronecker(delta, n)
    assert kronecker(delta, n + delta) == kronecker(delta, n)
    assert (kronecker(delta, n) == 0) == (math.gcd(n, delta) > 1)


def test_chi_table_matches_kronecker_everywhere():
    for d in squarefree_up_to(60):
        field = field_new(d)
        for n in range(1, field.delta + 1):
            assert field.chi(n) == kronecker(field.delta, n), (d, n)


def test_chi_table_spot_checks_large():
    for d in (1001, 10001, 100001):
        field = field_new(d)
        for n in (1, 2, 3, 97, 12345, field.delta - 1, field.delta):
            assert field.chi(n) == kronecker(field.delta, n), (d, n)


def test_weighted_sum_examples():
    assert weighted_char_sums(field_new(2)) == (0, 0, 16)
    assert weighted_char_sums(field_new(5)) == (0, 0, 4)
    assert weighted_char_sums(field_new(3)) == (0, 0, 48)


def test_weighted_sums_vanish_broadly():
    for d in squarefree_up_to(300):
        s0, s1, s2 = weighted_char_sums(field_new(d))
        assert s0 == 0
        assert s1 == 0
        assert s2 > 0


def test_c_constant_examples():
    assert c_constant(field_new(2)) == 8
    assert c_constant(field_new(6)) == Fraction(4, 3)
    assert c_constant(field_new(1001)) == Fraction(2, 753)
    assert c_constant(field_new(7)) == 1


def test_index_examples():
    assert index_gamma(field_new(2)) == 6
    assert index_gamma(field_new(17)) == 9
    assert index_gamma(field_new(13)) == 15


def test_chi4_is_chi2_squared():
    for d in squarefree_up_to(200):
        field = field_new(d)
        if field.chi(2) != 0:
            assert field.chi(4) == field.chi(2) ** 2
        else:
            assert field.chi(4) == 0


def test_l_value_examples():
    f5 = field_new(5)
    value, bound = l_value_2(f5, 10**6)
    assert bound <= 5 / 10**6
    assert value == pytest.approx(4 * math.pi**2 / (25 * math.sqrt(5)), abs=2 * bound + 1e-11)

    f2 = field_new(2)
    value, bound = l_value_2(f2, 10**6)
    assert value == pytest.approx(math.pi**2 * 8 ** (-2.5) * 16, abs=2 * bound + 1e-11)


def test_l_value_identity_for_many_fields():
    for d in (2, 3, 5, 6, 7, 13, 17, 21, 29):
        field = field_new(d)
        _, _, s2 = weighted_char_sums(field)
        value, bound = l_value_2(field, 500_000)
        target = math.pi**2 * field.delta ** (-2.5) * s2
        assert abs(value - target) <= bound + 1e-11, d


def test_l_value_requires_full_period():
    with pytest.raises(OutOfRange):
        l_value_2(field_new(101), 50)


def test_covolume_examples():
    rep2 = covolume(field_new(2))
    assert rep2.closed_form == pytest.approx(4 * math.pi**2, rel=1e-12)
    rep5 = covolume(field_new(5))
    assert rep5.closed_form == pytest.approx(4 * math.pi**2, rel=1e-12)
    for d in (2, 3, 5, 6, 7, 13, 17):
        rep = covolume(field_new(d))
        assert rep.max_relative_spread() <= rep.l2_truncation_error + 1e-9
        assert rep.siegel_form / rep.closed_form == pytest.approx(1.0, abs=1e-6)


def test_c_bounds_small_range():
    for d in squarefree_up_to(500):
        field = field_new(d)
        c = c_constant(field)
        delta = field.delta
        assert Fraction(192, 5) ** 2 < c * c * delta**3 < 240**2, d


def test_one_mod_eight_lower_limit():
    # fields with d = 1 (mod 8) sit above the limiting constant 64
    for d in (17, 41, 73, 89, 97, 113):
        field = field_new(d)
        c = c_constant(field)
        assert c * c * field.delta**3 > 64**2, d
