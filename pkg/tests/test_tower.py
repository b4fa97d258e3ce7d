import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _towers import cubic_tower, gauss_tower, gm_tower, tower
from zptowers.corpus import random_reduced_form
from zptowers.tower import (
    INFINITY,
    claimed_degree,
    hodge_polygon,
    ram_breaks,
    twisted_hodge_polygon,
)

F = Fraction


def coeffs(red, P=INFINITY):
    return {k: v.c for k, v in red.local[P].items()}


def test_reduction_removes_pole_orders_divisible_by_p():
    red = tower(3, {"inf": {3: 1, 2: 1}})
    assert coeffs(red) == {2: (1,), 1: (1,)}
    red = tower(3, {"inf": {9: 5}})
    assert coeffs(red) == {1: (5,)}


def test_reduction_merges_into_existing_term():
    red = tower(2, {"inf": {2: 1, 1: 3}})
    assert coeffs(red) == {1: (4,)}


def test_reduction_over_f4_applies_inverse_frobenius():
    red = tower(2, {"inf": {2: [0, 1]}}, a=2)
    R = red.spec.ring()
    assert red.local[INFINITY][1] == R([0, 1]).frobenius(1)


def test_constant_is_normalized_by_trace():
    red = tower(3, {"inf": {1: 1}}, constant=2)
    assert red.const_c == 2


def test_breaks_and_delta_frozen():
    ram = ram_breaks(cubic_tower())
    r = ram.per_point[INFINITY]
    assert r.breaks == (3, 6, 12, 24, 48)
    assert (r.delta, r.stable, r.m0) == (3, True, 0)
    assert ram.period == 3


def test_breaks_with_p_divisible_coefficient():
    # f = t^3 + 2 t^5 over p = 2: the t^5 term only contributes from level 2
    ram = ram_breaks(tower(2, {"inf": {3: 1, 5: 2}}))
    assert ram.per_point[INFINITY].breaks[:3] == (3, 6, 12)
    ram = ram_breaks(tower(2, {"inf": {1: 1, 3: 2}}))
    r = ram.per_point[INFINITY]
    assert r.breaks[:3] == (1, 3, 6)
    assert (r.delta, r.m0) == (F(3, 2), 1)
    assert ram.period == 3


def test_hodge_polygon_frozen():
    ram = ram_breaks(gauss_tower())
    assert hodge_polygon(ram).slopes_below(6) == [1, 2, 3, 4, 5]
    ram = ram_breaks(cubic_tower())
    assert hodge_polygon(ram).first(5).slopes() == [F(1, 3), F(2, 3), 1, F(4, 3), F(5, 3)]
    ram = ram_breaks(gm_tower())
    assert hodge_polygon(ram).first(4).slopes() == [0, 2, 2, 4]


def test_claimed_degree():
    assert claimed_degree(ram_breaks(gauss_tower()), 1) == 1
    assert claimed_degree(ram_breaks(gauss_tower()), 2) == 5
    assert [claimed_degree(ram_breaks(cubic_tower()), m) for m in (1, 2, 3)] == [2, 5, 11]
    assert claimed_degree(ram_breaks(gm_tower()), 2) == 6


def test_twisted_hodge_polygon():
    ram = ram_breaks(gm_tower())
    hp = twisted_hodge_polygon(ram, {P: 1 for P in ram.points})
    assert hp.zeros == 0
    assert hp.first(4).slopes() == [1, 1, 3, 3]
    with pytest.raises(ValueError):
        twisted_hodge_polygon(ram, {P: 2 for P in ram.points})


def test_unknown_point_data_rejected():
    with pytest.raises(ValueError):
        tower(3, {1: {3: 1}})


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_break_growth_and_digit_verdict_agreement(p, seed):
    rng = random.Random(seed)
    red = random_reduced_form(rng, p, max_pole=7, precision=rng.randint(1, 4))
    for r in ram_breaks(red).per_point.values():
        if r.unramified:
            continue
        assert r.consistent
        assert all(b >= p * a for a, b in zip(r.breaks, r.breaks[1:]))
        assert all(k % p for k in red.local.get(INFINITY, {}))
