"""Acceptance criteria, one test each, at the stated tolerances.

Every check prints a ``criterion N: PASS|FAIL`` line (collected into the
terminal summary under pytest, or printed when run as a script).
"""

import random
import time
from collections import Counter

import pytest

from _towers import cubic_tower, gauss_tower, gm_tower, quadratic_psi
from conftest import ACCEPTANCE_LINES
from zptowers.arith import embed, finite_field
from zptowers.corpus import random_reduced_form, tower_corpus
from zptowers.lfun import CharSpec, closed_points, frobenius_value
from zptowers.polygon import contains_interval, newton_polygon
from zptowers.report import (
    equality_conditions,
    equichar_run,
    finite_run,
    verdict_equichar,
    verdict_factor_degree,
)
from zptowers.series import path_c_value
from zptowers.tower import claimed_degree, is_zero_point, ram_breaks
from zptowers.twisted import make_run, twisted_summary, verify_twisted
from zptowers.witt import WittVec, witt_vectors, wp, wp_kernel, wp_preimage

_RUNS = {}


def report(n, ok, detail, seconds=None):
    timing = "" if seconds is None else f" ({seconds:.2f}s)"
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}{timing} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def slopes(poly):
    return [str(s) for s in poly.slopes()]


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


# ---------------------------------------------------------------- 1

def test_criterion_1_gauss_sum():
    red = gauss_tower()
    run, dt = timed(finite_run, red, 1)
    _RUNS[1] = (red, [run])
    L = run["L"]
    R = L.coeffs[0].ring
    # oracle: enumerate F_3 and sum ζ^{x^2}
    gauss = R.zero()
    for x in range(3):
        gauss = gauss + R.char_value(x * x % 3)
    exact = L.degree == 1 and L.coeffs[1] == gauss == R.one() + R.char_value(1) * 2
    ok = (exact and slopes(run["np"]) == ["1"] and slopes(run["hp_below_e"]) == ["1"]
          and run["np"] == run["hp"] and all(equality_conditions(red, ram_breaks(red)).values())
          and dt < 1)
    assert report(1, ok, f"L = 1 + (1+2ζ_3)s: {exact}; NP {slopes(run['np'])}", dt)


# ---------------------------------------------------------------- 2

def test_criterion_2_level_two_equality():
    red = gauss_tower()
    run, dt = timed(finite_run, red, 2)
    _RUNS[2] = (red, [run])
    want = ["1", "2", "3", "4", "5"]
    ok = (run["L"].degree == 5 and slopes(run["np_below_e"]) == want
          and slopes(run["hp_below_e"]) == want and dt < 10)
    assert report(2, ok, f"degree {run['L'].degree}; NP^<6 {slopes(run['np_below_e'])}", dt)


# ---------------------------------------------------------------- 3

def test_criterion_3_touching_without_equality():
    red = cubic_tower()
    t0 = time.perf_counter()
    runs = [finite_run(red, m) for m in (2, 3)]
    dt = time.perf_counter() - t0
    _RUNS[3] = (red, runs)
    ok = dt < 30
    notes = []
    for r in runs:
        m = r["m"]
        want = [(3 * n - 1, 3 * n) for n in range(1, 2 ** (m - 1))]
        touch = all(contains_interval(r["intervals"], lo, hi) for lo, hi in want)
        ok &= r["dominance"] and touch and r["np"] != r["hp"]
        notes.append(f"m={m}: dominance {r['dominance']}, intervals {want} contained {touch}")
    assert report(3, ok, "; ".join(notes), dt)


# ---------------------------------------------------------------- 4

def test_criterion_4_discrepancy_trend():
    red = cubic_tower()
    discs = [finite_run(red, m)["discrepancy"] for m in (1, 2, 3)]
    ok = all(b < a for a, b in zip(discs, discs[1:]))
    assert report(4, ok, f"discrepancies {[str(d) for d in discs]}")


# ---------------------------------------------------------------- 5

def test_criterion_5_equicharacteristic():
    red = gauss_tower()
    ram = ram_breaks(red)
    run, dt = timed(equichar_run, red, 24, D=6)
    eq = verdict_equichar([run], red, ram)
    fd = verdict_factor_degree([run], ram)
    ok = (run["dominance"] and run["equal"] and eq["status"] == "pass" and fd["status"] == "pass"
          and all(d <= ram.period for d in run["slope_denominators"]) and dt < 30)
    assert report(5, ok, f"NP_T {slopes(run['np'])} = HP: {run['equal']}; {fd['detail']}", dt)


# ---------------------------------------------------------------- 6

def test_criterion_6_twisted_factorization():
    red = gm_tower()
    t0 = time.perf_counter()
    trun = make_run(red, quadratic_psi(red))
    res = verify_twisted(trun, [CharSpec.finite(1)])
    dt = time.perf_counter() - t0
    _RUNS[6] = (red, res)
    entry = res[0]
    comps = entry["components"]
    ok = (entry["factorization"] and entry["slope_union"] and entry["equality_expected"]
          and all(c["dominance"] and c["equal"] for c in comps) and twisted_summary(res) and dt < 30)
    detail = (f"L^tame = L(ρ)·L(ψ⊗ρ): {entry['factorization']}; slope union {entry['slope_union']}; "
              f"twisted NP {slopes(comps[1]['np_below_e'])} = HP {slopes(comps[1]['hp_below_e'])}")
    assert report(6, ok, detail, dt)


# ---------------------------------------------------------------- 7

@pytest.mark.slow
def test_criterion_7_cross_path_frobenius():
    towers = tower_corpus(11, 24, fields=((2, 1), (3, 1), (2, 2), (3, 2)))
    t0 = time.perf_counter()
    checked = mismatches = 0
    m = 2
    for red in towers:
        has_zero = any(is_zero_point(P) for P in red.points)
        for k in (1, 2, 3):
            for x in closed_points(red.params, k):
                if has_zero and x.is_zero():
                    continue
                a = frobenius_value(red, x, m, "A")
                b = frobenius_value(red, x, m, "B")
                c = path_c_value(red, x, m)
                checked += 1
                mismatches += not (a == b == c)
    dt = time.perf_counter() - t0
    fields = sorted({red.params.q for red in towers})
    ok = mismatches == 0 and len(towers) >= 20 and fields == [2, 3, 4, 9]
    assert report(7, ok, f"{len(towers)} towers over F_{fields}, {checked} points, {mismatches} mismatches", dt)


# ---------------------------------------------------------------- 8

def _preimages_missing(q_field, m, ext_degree):
    F = q_field
    big = finite_field(F.p, F.n * ext_degree)
    missing = 0
    for y in witt_vectors(F, m):
        x = wp_preimage(y, big)
        if x is None:
            missing += 1
        else:
            assert wp(x) == WittVec(F.p, [embed(c, big.n) for c in y.comps])
    return missing


@pytest.mark.xfail(strict=True, reason="degree-p extensions do not always split ℘ at length 2")
def test_criterion_8_witt_kernel_and_exactness():
    ok = True
    notes = []
    for p, n in ((2, 2), (3, 2)):
        F = finite_field(p, n)
        for m in (1, 2):
            ker = len(wp_kernel(F, m))
            missing = _preimages_missing(F, m, p)
            ok &= ker == p**m and missing == 0
            notes.append(f"F_{p**n} m={m}: |ker| {ker}, no preimage in degree p: {missing}")
    report(8, ok, "; ".join(notes))
    assert ok


def test_criterion_8_with_degree_p_to_the_m_extensions():
    # same statement with the extension degree p^m, which is what length m requires
    ok = True
    for p, n in ((2, 2), (3, 2)):
        F = finite_field(p, n)
        for m in (1, 2):
            ok &= len(wp_kernel(F, m)) == p**m and _preimages_missing(F, m, p**m) == 0
    assert ok


# ---------------------------------------------------------------- 9

def test_criterion_9_ramification_equivalence():
    disagreements = growth = total = 0
    for p in (2, 3, 5):
        rng = random.Random(1000 + p)
        for _ in range(100):
            red = random_reduced_form(rng, p, max_pole=7, precision=rng.randint(1, 4))
            for r in ram_breaks(red).per_point.values():
                if r.unramified:
                    continue
                total += 1
                disagreements += not r.consistent
                growth += any(b < p * a for a, b in zip(r.breaks, r.breaks[1:]))
    ok = disagreements == 0 and growth == 0
    assert report(9, ok, f"{total} ramified points: {disagreements} verdict mismatches, "
                         f"{growth} growth violations")


# ---------------------------------------------------------------- 10

def _finite_runs():
    for n in (1, 2, 3):
        if n not in _RUNS:
            red = cubic_tower() if n == 3 else gauss_tower()
            _RUNS[n] = (red, [finite_run(red, m) for m in ({1: (1,), 2: (2,), 3: (2, 3)}[n])])
    if 6 not in _RUNS:
        red = gm_tower()
        _RUNS[6] = (red, verify_twisted(make_run(red, quadratic_psi(red)), [CharSpec.finite(1)]))


def test_criterion_10_degree_formula():
    _finite_runs()
    ok = True
    count = 0
    for n in (1, 2, 3):
        red, runs = _RUNS[n]
        ram = ram_breaks(red)
        for r in runs:
            m = r["m"]
            target = red.spec.genus - 1 + ram.swan(m)
            ok &= r["beyond_degree_vanish"] and r["L"].degree == claimed_degree(ram, m)
            ok &= r["slope_count"][0] == target
            count += 1
    red, res = _RUNS[6]
    ram = ram_breaks(red)
    for entry in res:
        m = entry["m"]
        for comp in entry["components"]:
            eps = comp["eps"]
            omega = sum(eps.values()) // (red.p - 1)
            target = red.spec.genus - 1 + ram.swan(m) + sum(1 for v in eps.values() if v) - omega
            ok &= comp["L"].beyond_degree_vanish() and comp["slope_count"] == (target, target)
            count += 1
        ok &= entry["L_tame"].beyond_degree_vanish()
        tame = newton_polygon(entry["L_tame"])
        ok &= Counter(tame.slopes()) == Counter(s for c in entry["components"] for s in c["np"].slopes())
    assert report(10, ok, f"{count} runs: coefficients beyond the degree vanish and slope counts match")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
