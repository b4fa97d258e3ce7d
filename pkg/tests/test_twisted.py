import pytest

from _towers import gauss_tower, gm_tower, quadratic_psi, tower
from zptowers.lfun import CharSpec, TameSpec
from zptowers.tower import INFINITY, ram_breaks
from zptowers.twisted import (
    expected_slope_count,
    hp_decomposition,
    kummer_index,
    make_run,
    perturbed_eps,
    psi_power,
    results_json,
    twisted_summary,
    verify_twisted,
)


def test_kummer_index_and_pullback():
    red = gm_tower()
    run = make_run(red, quadratic_psi(red))
    assert run.s == 2
    assert {k: v.c for k, v in run.pullback.local[INFINITY].items()} == {2: (1,)}
    assert kummer_index(TameSpec(((red.params.field(1)(0), 2),), 4)) == 2


def test_psi_power_trivial_component():
    red = gm_tower()
    psi = quadratic_psi(red)
    assert psi_power(psi, 2) is None
    assert psi_power(psi, 3).factors[0][1] == 3


def test_gm_quadratic_twist_factorization():
    red = gm_tower()
    res = verify_twisted(make_run(red, quadratic_psi(red)), [CharSpec.finite(1)])
    entry = res[0]
    assert entry["factorization"] and entry["slope_union"] and entry["hp_decomposition"]
    assert entry["negative_control_flagged"]
    assert entry["L_tame"].degree == 4
    assert [str(s) for s in entry["components"][1]["np"].slopes()] == ["1", "1"]
    assert twisted_summary(res)
    doc = results_json(res)
    assert doc[0]["tame_degree"] == 4


@pytest.mark.slow
def test_quartic_twist_meets_hodge_bound_for_every_power():
    # the sign of the local exponent is what makes NP and HP coincide here
    red = tower(5, {0: {1: 1}, "inf": {1: 1}})
    psi = TameSpec(((red.params.field(1)(0), 1),), 4)
    res = verify_twisted(make_run(red, psi), [CharSpec.finite(1)])
    comps = res[0]["components"]
    assert [c["eps"][INFINITY] for c in comps] == [0, 1, 2, 3]
    assert all(c["equal"] for c in comps)
    assert [[str(s) for s in c["np_below_e"].slopes()] for c in comps] == [["0"], ["1", "3"], ["2", "2"], ["1", "3"]]
    assert twisted_summary(res)


def test_negative_control_breaks_decomposition():
    red = gm_tower()
    run = make_run(red, quadratic_psi(red))
    assert hp_decomposition(run, 1) is True
    assert hp_decomposition(run, 1, perturbed_eps(run)) is False


def test_expected_slope_count():
    ram = ram_breaks(gm_tower())
    assert expected_slope_count(ram, 1, 0, {P: 0 for P in ram.points}) == 1
    assert expected_slope_count(ram, 1, 0, {P: 1 for P in ram.points}) == 2
    assert expected_slope_count(ram, 2, 0, {P: 0 for P in ram.points}) == 5


def test_twist_needs_points_of_s():
    red = gauss_tower()
    run = make_run(red, TameSpec(((red.params.field(1)(1), 1),), 2))
    with pytest.raises(ValueError):
        verify_twisted(run, [CharSpec.finite(1)])
