from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zptowers.arith import INF
from zptowers.polygon import (
    Polygon,
    ProgressionPolygon,
    agreement_intervals,
    contains_interval,
    dominates,
    lower_hull,
    reference_hull_values,
    shared_vertices,
    split_progressions,
    stability_pattern,
    truncate_below,
    uniformity_discrepancy,
)

F = Fraction

point_sets = st.lists(
    st.tuples(st.integers(0, 12), st.one_of(st.integers(0, 30).map(F), st.just(INF))),
    min_size=1, max_size=13, unique_by=lambda t: t[0],
).filter(lambda pts: any(y != INF for _, y in pts))


@settings(max_examples=200, deadline=None)
@given(point_sets)
def test_lower_hull_matches_reference(points):
    # shift so the leftmost finite point sits at x = 0
    x0 = min(x for x, y in points if y != INF)
    pts = [(x - x0, y) for x, y in points if x >= x0]
    hull = lower_hull(pts)
    for x, v in reference_hull_values(pts).items():
        assert hull.value_at(x) == v


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(0, 5, max_denominator=6), min_size=1, max_size=10))
def test_from_slopes_roundtrip(slopes):
    assert Polygon.from_slopes(slopes).slopes() == sorted(slopes)


def test_collinear_vertices_are_dropped():
    a = Polygon([(0, 0), (1, 1), (2, 2), (3, 4)])
    assert a.vertices == ((0, 0), (2, 2), (3, 4))
    assert a == Polygon.from_slopes([1, 1, 2])


def test_polygon_rejects_concave_input():
    with pytest.raises(ValueError):
        Polygon([(0, 0), (1, 2), (2, 3)])


def test_progression_polygon_slopes():
    hp = ProgressionPolygon(1, ((F(1, 3), F(1, 3)), (F(1, 2), F(1, 2))))
    assert hp.slopes_below(1) == [0, F(1, 3), F(1, 2), F(2, 3)]
    assert hp.first(6).slopes() == [0, F(1, 3), F(1, 2), F(2, 3), 1, 1]
    assert truncate_below(hp, 1) == Polygon.from_slopes([0, F(1, 3), F(1, 2), F(2, 3)])


def test_dominance_and_agreement():
    hp = Polygon.from_slopes([F(1, 3), F(2, 3), 1, F(4, 3), F(5, 3)])
    np_ = Polygon.from_slopes([F(1, 2), F(1, 2), 1, F(3, 2), F(3, 2)])
    assert dominates(np_, hp)
    assert not dominates(hp, np_)
    iv = agreement_intervals(np_, hp)
    assert iv == [(0, 0), (2, 3), (5, 5)]
    assert contains_interval(iv, 2, 3)
    assert not contains_interval(iv, 1, 2)
    assert shared_vertices(np_, hp) == [0, 2, 3, 5]


def test_agreement_at_crossing():
    a = Polygon([(0, 0), (2, 0), (3, 3)])
    b = Polygon([(0, 0), (3, 1)])
    assert agreement_intervals(a, b) == [(0, 0), (F(9, 4), F(9, 4))]


def test_uniformity_discrepancy():
    assert uniformity_discrepancy(Polygon.from_slopes([F(1, 2)]), 1) == F(1, 2)
    assert uniformity_discrepancy(Polygon.from_slopes([F(1, 4), F(3, 4)]), 1) == F(1, 4)
    with pytest.raises(ValueError):
        uniformity_discrepancy(Polygon([]), 1)


def test_split_progressions():
    alphas, K = split_progressions([F(1, 4), F(3, 4), F(1, 2), 0], 2)
    assert alphas == [0, F(1, 2)]
    assert K == [0]


def test_stability_pattern_positive_and_negative():
    lvl2 = Polygon.from_slopes([F(1, 2), F(1, 2), 1, F(3, 2), F(3, 2)])
    lvl3 = Polygon.from_slopes([F(1, 2), F(1, 2), 1, F(3, 2), F(3, 2), 2, F(5, 2), F(5, 2), 3,
                                F(7, 2), F(7, 2)])
    good = stability_pattern([lvl2, lvl3], 0, 1, 2, [2, 3])
    assert good.positive
    bad = stability_pattern([lvl2, Polygon.from_slopes([1, 1, 1])], 0, 1, 2, [2, 3])
    assert not bad.positive
    assert bad.witness is not None
    with pytest.raises(ValueError):
        stability_pattern([lvl2], 0, 1, 2, [2])
