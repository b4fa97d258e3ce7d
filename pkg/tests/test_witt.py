import pytest
from hypothesis import given, settings, strategies as st

from zptowers.arith import LaurentPoly, finite_field, unram_ring
from zptowers.witt import (
    WittVec,
    d_sigma,
    ghost,
    int_to_witt,
    universal_polys,
    witt_to_int,
    witt_trace,
    wp,
    wp_kernel,
    wp_preimage,
    witt_vectors,
)


def wvec(p, m, R):
    return st.lists(st.integers(0, R.mod - 1), min_size=m, max_size=m).map(
        lambda cs: WittVec(p, [R(c) for c in cs]))


def test_universal_addition_length_two():
    # S_1 = x1 + y1 - Σ_{0<i<p} binom(p, i)/p x0^i y0^(p-i); over p = 2: x1 + y1 + x0 y0
    polys = universal_polys(2, 2, "add")
    assert len(polys) == 2
    F = finite_field(2, 1)
    x = WittVec(2, [F(1), F(0)])
    assert (x + x).comps == (F(0), F(1))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_ghost_components_are_ring_maps(p, m, data):
    # characteristic-zero coefficients: ghost maps are additive and multiplicative
    R = unram_ring(p, 1, 12)
    x, y = data.draw(wvec(p, m, R)), data.draw(wvec(p, m, R))
    for i in range(m):
        assert ghost(x + y, i) == ghost(x, i) + ghost(y, i)
        assert ghost(x * y, i) == ghost(x, i) * ghost(y, i)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
def test_witt_vectors_of_prime_field_are_integers(p, m):
    for a in range(p**m):
        for b in range(0, p**m, max(1, p**m // 7)):
            wa, wb = int_to_witt(a, p, m), int_to_witt(b, p, m)
            assert witt_to_int(wa) == a
            assert witt_to_int(wa + wb) == (a + b) % p**m
            assert witt_to_int(wa * wb) == (a * b) % p**m


@pytest.mark.parametrize("p,n,m", [(2, 2, 2), (3, 2, 2), (2, 3, 2)])
def test_witt_ring_axioms_exhaustive_sample(p, n, m):
    F = finite_field(p, n)
    vs = list(witt_vectors(F, m))[::3]
    zero = WittVec(p, [F.zero()] * m)
    for x in vs[:12]:
        assert x - x == zero
        for y in vs[:12]:
            assert x + y == y + x
            assert x * y == y * x


def test_teichmuller_multiplicative():
    F = finite_field(3, 2)
    xs = list(F.elements())
    for a in xs:
        for b in xs:
            ta, tb = WittVec.teichmuller(3, a, 2), WittVec.teichmuller(3, b, 2)
            assert ta * tb == WittVec.teichmuller(3, a * b, 2)


def test_wp_of_teichmuller_component():
    # ℘((g, 0)) over F_4 = (g^2 + g, g) = (1, g)
    F = finite_field(2, 2)
    g = F([0, 1])
    assert wp(WittVec(2, [g, F.zero()])).comps == (F.one(), g)


@pytest.mark.parametrize("p,n,m", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2)])
def test_wp_kernel_is_prime_field_witt_ring(p, n, m):
    ker = wp_kernel(finite_field(p, n), m)
    assert len(ker) == p**m
    for x in ker:
        assert all(not any(c.c[1:]) for c in x.comps)


def test_wp_preimage_solves():
    from zptowers.arith import embed

    F4, F256 = finite_field(2, 2), finite_field(2, 8)
    g = F4([0, 1])
    y = WittVec(2, [g, F4.one()])
    x = wp_preimage(y, F256)
    assert x is not None
    assert wp(x) == WittVec(2, [embed(c, 8) for c in y.comps])


def test_length_two_preimage_can_need_degree_p_squared():
    # degree-p extensions do not always suffice at length 2
    F4 = finite_field(2, 2)
    missing = [y for y in witt_vectors(F4, 2) if wp_preimage(y, finite_field(2, 4)) is None]
    assert len(missing) == 8
    assert all(wp_preimage(y, finite_field(2, 8)) is not None for y in missing)


@pytest.mark.parametrize("p,n,m", [(2, 2, 2), (3, 2, 2), (2, 3, 1)])
def test_witt_trace_matches_teichmuller_trace(p, n, m):
    from zptowers.arith import teichmuller_lift, trace_to_prime

    F = finite_field(p, n)
    for x in F.elements():
        assert witt_trace(WittVec.teichmuller(p, x, m)) == trace_to_prime(teichmuller_lift(x, m)) % p**m


def test_d_sigma_ghost_identity():
    # ghost_i(D_σ f) = σ^i(f) with σ(t) = t^p; check on a monomial over ℤ_2/2^5
    R = unram_ring(2, 1, 5)
    f = LaurentPoly(R, {1: R(3)})
    w = d_sigma(f, 2)
    assert w.m == 2
    # f = 3t: D_σ gives (3t, (3t^2 - 9t^2)/2) = (3t, -3t^2) at precision 4
    assert w.comps[0].terms[1].c[0] % 16 == 3
    assert w.comps[1].terms[2].c[0] % 16 == (-3) % 16


def test_d_sigma_rejects_short_precision():
    R = unram_ring(3, 1, 1)
    with pytest.raises(ValueError):
        d_sigma(LaurentPoly(R, {1: R(1)}), 2)
