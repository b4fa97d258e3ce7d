from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _towers import cubic_tower, gauss_tower, tower
from zptowers.lfun import CharSpec
from zptowers.series import (
    GrowthRingSpec,
    PiRing,
    TruncSeries,
    artin_hasse,
    artin_hasse_log,
    growth_check,
    series_log,
    splitting_series,
    tau,
)
from zptowers.tower import ram_breaks


def exp_series(s):
    """exp of a series without constant term, by the recursion n a_n = Σ k b_k a_{n-k}."""
    a = [Fraction(1)] + [Fraction(0)] * (s.order - 1)
    for n in range(1, s.order):
        a[n] = sum(k * s[k] * a[n - k] for k in range(1, n + 1)) / n
    return TruncSeries(a, s.order)


def test_artin_hasse_frozen_p2():
    assert artin_hasse(8, 2).coeffs == [1, 1, 1, Fraction(2, 3), Fraction(2, 3), Fraction(7, 15),
                                        Fraction(16, 45), Fraction(67, 315)]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_artin_hasse_is_exp_of_log(p):
    order = 30
    assert artin_hasse(order, p) == exp_series(artin_hasse_log(order, p))
    assert series_log(artin_hasse(order, p)) == artin_hasse_log(order, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_artin_hasse_p_integral(p):
    assert artin_hasse(40, p).is_p_integral(p)


@pytest.mark.parametrize("p,j", [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (5, 1)])
def test_tau_inverts_artin_hasse(p, j):
    order = 16
    t = tau(j, order, p)
    one_plus_T = TruncSeries([Fraction(1), Fraction(1)], order, "T")
    assert artin_hasse(order, p).compose(t) == one_plus_T ** (p**j)
    assert t.is_p_integral(p)


def test_tau_leading_terms():
    # τ_0 = T + O(T^2); τ_j ≡ T^{p^j} modulo p
    assert tau(0, 6, 3)[1] == 1
    t = tau(1, 10, 2).mod(2)
    assert t.valuation() == 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6),
       st.lists(st.integers(-20, 20), min_size=1, max_size=6))
def test_truncseries_log_turns_products_into_sums(a, b):
    order = 6
    x = TruncSeries([Fraction(1)] + [Fraction(v) for v in a], order)
    y = TruncSeries([Fraction(1)] + [Fraction(v) for v in b], order)
    assert series_log(x * y) == series_log(x) + series_log(y)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 1), (3, 2)])
def test_pi_ring_minimal_polynomial(p, m):
    R = PiRing(p, m, 1, 6)
    zeta = R.one() + R.pi()
    assert zeta ** (p**m) == R.one()
    assert zeta ** (p ** (m - 1)) != R.one()
    assert R.pi().valuation() == 1
    assert R([p]).valuation() == R.e


def test_pi_ring_frobenius_acts_on_coefficients():
    R = PiRing(2, 2, 2, 4)
    u = R.base.gen()
    x = R([u, 1])
    assert x.frobenius(2) == x
    assert (x * x).frobenius() == x.frobenius() * x.frobenius()


def test_growth_check_detects_first_violation():
    s = TruncSeries([Fraction(1), Fraction(2), Fraction(2), Fraction(8)], 4)
    assert growth_check(s, GrowthRingSpec(Fraction(1)), 2) == (False, 2)
    assert growth_check(s, GrowthRingSpec(Fraction(2)), 2) == (True, None)


@pytest.mark.parametrize("build,m", [(cubic_tower, 2), (gauss_tower, 2), (gauss_tower, 1),
                                     (lambda: tower(3, {"inf": {2: 1, 1: 2}}), 1),
                                     (lambda: tower(2, {"inf": {3: 1, 1: 1}}), 3)])
def test_splitting_series_lies_in_growth_ring_of_rate_delta(build, m):
    red = build()
    delta = ram_breaks(red).deltas()[0]
    e = red.p ** (m - 1) * (red.p - 1)
    s = splitting_series(red, CharSpec.finite(m), 14)
    assert growth_check(s, GrowthRingSpec(delta, e + 2)) == (True, None)
    if delta > 1:
        assert growth_check(s, GrowthRingSpec(delta - 1, e + 2))[0] is False


def test_equichar_splitting_series_valuations():
    s = splitting_series(gauss_tower(), CharSpec.equichar(9), 8)
    assert [x.valuation() for x in s.coeffs][::2] == [0, 1, 2, 3]
