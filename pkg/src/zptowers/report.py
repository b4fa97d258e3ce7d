"""Per-character comparisons and theorem verdicts, assembled into a deterministic report."""

from fractions import Fraction

from .accel import BACKEND
from .lfun import CharSpec, l_function
from .polygon import (
    PrecisionError,
    agreement_intervals,
    contains_interval,
    dominates,
    newton_polygon,
    shared_vertices,
    stability_pattern,
    truncate_below,
    uniformity_discrepancy,
)
from .tower import claimed_degree, hodge_polygon, point_label, ram_breaks

PASS, FAIL, NA, INCONCLUSIVE = "pass", "fail", "n/a", "inconclusive"


def _fr(x):
    return str(Fraction(x))


def _intervals_json(iv):
    return [[_fr(a), _fr(b)] for a, b in iv]


def finite_run(red, m, D=None, budget=None, workers=None, ram=None):
    """L-function at the order-p^m character with every comparison the report needs."""
    ram = ram or ram_breaks(red)
    g = red.spec.genus
    p = red.p
    e = p ** (m - 1) * (p - 1)
    ls = l_function(red, CharSpec.finite(m), D=D, budget=budget, workers=workers)
    np_ = newton_polygon(ls)
    hp_full = hodge_polygon(ram, g)
    hp = hp_full.first(ls.degree)
    np_lo = truncate_below(np_, e)
    hp_lo = hp_full.truncate_below(e)
    intervals = agreement_intervals(np_, hp)
    return {
        "kind": "finite",
        "m": m,
        "e": e,
        "L": ls,
        "np": np_,
        "hp": hp,
        "np_below_e": np_lo,
        "hp_below_e": hp_lo,
        "dominance": dominates(np_, hp),
        "intervals": intervals,
        "shared": shared_vertices(np_, hp),
        "equal_below_e": np_lo == hp_lo,
        "discrepancy": uniformity_discrepancy(np_lo, e) if not np_lo.is_empty() else None,
        "beyond_degree_vanish": ls.beyond_degree_vanish(),
        "slope_count": (len(np_lo.slopes()), len(hp_lo.slopes())),
        "claimed_degree": claimed_degree(ram, m, g),
    }


def equichar_run(red, M, D=None, budget=None, workers=None, ram=None):
    ram = ram or ram_breaks(red)
    g = red.spec.genus
    ls = l_function(red, CharSpec.equichar(M), D=D, budget=budget, workers=workers)
    try:
        np_ = newton_polygon(ls)
    except PrecisionError as exc:
        return {"kind": "equichar", "M": M, "L": ls, "error": str(exc)}
    hp = hodge_polygon(ram, g).first(int(np_.length))
    intervals = agreement_intervals(np_, hp)
    return {
        "kind": "equichar",
        "M": M,
        "L": ls,
        "np": np_,
        "hp": hp,
        "dominance": dominates(np_, hp),
        "intervals": intervals,
        "shared": shared_vertices(np_, hp),
        "equal": np_ == hp,
        "slope_denominators": sorted({s.denominator for s in np_.slopes()}),
    }


# ---------------------------------------------------------------- verdicts

def touching_intervals(ram, g, m):
    """[g-1+nd, g-1+|S|+nd] for 1 ≤ n < p^{m-m0-1}."""
    p, d, m0 = ram.p, ram.period, ram.m0
    top = p ** (m - m0 - 1) if m - m0 - 1 >= 0 else 0
    return [(g - 1 + n * d, g - 1 + len(ram.points) + n * d) for n in range(1, top)]


def equality_conditions(red, ram):
    ordinary = red.spec.ordinary
    m0_zero = ram.m0 == 0
    congruence = all(Fraction(red.p - 1) / r.delta == int(Fraction(red.p - 1) / r.delta)
                     for r in ram.per_point.values()) and m0_zero
    return {"ordinary": ordinary, "m0_zero": m0_zero, "p_congruent": congruence}


def verdict_touching(runs, ram, g):
    finite = [r for r in runs if r["kind"] == "finite"]
    if not finite:
        return {"status": NA, "detail": "no finite characters"}
    if not all(r["dominance"] for r in finite):
        return {"status": FAIL, "detail": "Newton polygon dips below the Hodge polygon"}
    checked = 0
    for r in finite:
        for lo, hi in touching_intervals(ram, g, r["m"]):
            if hi > r["np"].length:
                continue
            checked += 1
            if not contains_interval(r["intervals"], lo, hi):
                return {"status": FAIL, "detail": f"no agreement on [{_fr(lo)}, {_fr(hi)}] at m={r['m']}"}
    if not checked:
        return {"status": NA, "detail": "no level exceeds m0 + 1"}
    return {"status": PASS, "detail": f"{checked} predicted intervals contained"}


def verdict_equality(runs, red, ram):
    finite = [r for r in runs if r["kind"] == "finite"]
    if not finite:
        return {"status": NA, "detail": "no finite characters", "conditions": equality_conditions(red, ram)}
    cond = equality_conditions(red, ram)
    predicted = all(cond.values())
    equal = [r["equal_below_e"] for r in finite]
    if predicted:
        status = PASS if all(equal) else FAIL
        detail = "conditions hold; NP = HP below e for every level" if all(equal) else "conditions hold but NP ≠ HP"
    elif not all(equal):
        status, detail = PASS, "conditions fail and some level has NP ≠ HP"
    else:
        status, detail = INCONCLUSIVE, "conditions fail but every computed level has NP = HP"
    return {"status": status, "detail": detail, "conditions": cond}


def verdict_equichar(runs, red, ram):
    eq = [r for r in runs if r["kind"] == "equichar"]
    if not eq:
        return {"status": NA, "detail": "no equicharacteristic run"}
    r = eq[0]
    if "error" in r:
        return {"status": INCONCLUSIVE, "detail": r["error"]}
    if not r["dominance"]:
        return {"status": FAIL, "detail": "NP_T dips below HP"}
    g = red.spec.genus
    d = ram.period
    n = 1
    while g - 1 + len(ram.points) + n * d <= r["np"].length:
        lo, hi = g - 1 + n * d, g - 1 + len(ram.points) + n * d
        if not contains_interval(r["intervals"], lo, hi):
            return {"status": FAIL, "detail": f"no touching on [{_fr(lo)}, {_fr(hi)}]"}
        n += 1
    cond = ram.m0 == 0 and all(Fraction(red.p - 1) / x.delta == int(Fraction(red.p - 1) / x.delta)
                               for x in ram.per_point.values())
    if cond and not r["equal"]:
        return {"status": FAIL, "detail": "m0 = 0 and p ≡ 1 mod δ but NP_T ≠ HP"}
    return {"status": PASS, "detail": "dominance and touching hold" + ("; NP_T = HP" if cond else "")}


def verdict_factor_degree(runs, ram):
    eq = [r for r in runs if r["kind"] == "equichar" and "error" not in r]
    if not eq:
        return {"status": NA, "detail": "no equicharacteristic run"}
    d = ram.period
    dens = eq[0]["slope_denominators"]
    ok = all(x <= d for x in dens)
    return {"status": PASS if ok else FAIL, "detail": f"slope denominators {dens}, d = {_fr(d)}"}


# ---------------------------------------------------------------- JSON assembly

def run_json(r):
    if r["kind"] == "equichar":
        out = {"character": {"kind": "equichar", "M": r["M"]}, "L": r["L"].to_json()}
        if "error" in r:
            out["error"] = r["error"]
            return out
        out.update({
            "np_vertices": r["np"].to_json(),
            "hp_vertices": r["hp"].to_json(),
            "dominance": r["dominance"],
            "agreement_intervals": _intervals_json(r["intervals"]),
            "shared_vertices": [_fr(x) for x in r["shared"]],
            "equal": r["equal"],
        })
        return out
    return {
        "character": {"kind": "finite", "m": r["m"]},
        "degree": r["L"].degree,
        "coefficients": [c.to_json() for c in r["L"].coeffs],
        "np_vertices": r["np"].to_json(),
        "hp_vertices": r["hp"].to_json(),
        "dominance": r["dominance"],
        "agreement_intervals": _intervals_json(r["intervals"]),
        "shared_vertices": [_fr(x) for x in r["shared"]],
        "equal_below_e": r["equal_below_e"],
        "discrepancy": None if r["discrepancy"] is None else _fr(r["discrepancy"]),
        "beyond_degree_vanish": r["beyond_degree_vanish"],
        "slope_count_below_e": list(r["slope_count"]),
    }


def assumptions(red):
    spec = red.spec
    return {
        "p": red.p,
        "a": red.params.a,
        "precision": red.precision,
        "S": [point_label(P) for P in red.points],
        "genus": spec.genus,
        "ordinary": spec.ordinary,
        "ordinary_tame": spec.ordinary_tame,
        "backend": BACKEND,
    }


def build_report(red, chars, psi=None, D=None, budget=None, workers=None):
    """Run every requested character and return (report dict, exit status)."""
    ram = ram_breaks(red)
    runs = []
    for ch in chars:
        if ch.kind == "finite":
            runs.append(finite_run(red, ch.m, D=D, budget=budget, workers=workers, ram=ram))
        else:
            runs.append(equichar_run(red, ch.M, D=D, budget=budget, workers=workers, ram=ram))
    return assemble(red, runs, ram, psi, budget, workers)


def assemble(red, runs, ram, psi=None, budget=None, workers=None):
    from .twisted import make_run, results_json, twisted_summary, verify_twisted

    g = red.spec.genus
    verdicts = {
        "thm-1.3-touching": verdict_touching(runs, ram, g),
        "thm-1.4-equality": verdict_equality(runs, red, ram),
        "thm-1.10-equichar": verdict_equichar(runs, red, ram),
        "cor-1.11-factor-degree": verdict_factor_degree(runs, ram),
        "thm-1.6/1.7-twisted": {"status": NA, "detail": "no tame twist declared"},
    }
    report = {
        "schema": 1,
        "assumptions": assumptions(red),
        "ramification": ram.to_json(),
        "characters": [run_json(r) for r in runs],
    }
    if psi is not None:
        trun = make_run(red, psi, red.spec.ordinary_tame)
        finite = [CharSpec.finite(r["m"]) for r in runs if r["kind"] == "finite"]
        tres = verify_twisted(trun, finite, D=None, budget=budget, workers=workers)
        report["twisted"] = results_json(tres)
        ok = twisted_summary(tres)
        verdicts["thm-1.6/1.7-twisted"] = {"status": PASS if ok else FAIL,
                                           "detail": "dominance, slope counts and factorization"}
    report["verdicts"] = verdicts
    falsified = any(v["status"] == FAIL for v in verdicts.values())
    falsified |= any(r.get("dominance") is False for r in runs)
    return report, 2 if falsified else 0


def sweep_report(red, levels, D=None, budget=None, workers=None, k=None):
    """Levels m = 1..M: per-level summaries, discrepancy trend and slope-stability fit."""
    ram = ram_breaks(red)
    g = red.spec.genus
    runs = [finite_run(red, m, D=D, budget=budget, workers=workers, ram=ram) for m in levels]
    k = ram.m0 + 1 if k is None else k
    usable = [(r["np_below_e"], r["m"]) for r in runs if r["m"] > k]
    if len(usable) >= 2:
        verdict = stability_pattern([u[0] for u in usable], g, k, red.p, [u[1] for u in usable]).to_json()
    else:
        verdict = {"positive": None, "detail": "insufficient data: need at least two levels above k"}
    discs = [r["discrepancy"] for r in runs]
    trend = all(a is not None and b is not None and b < a for a, b in zip(discs, discs[1:]))
    report, status = assemble(red, runs, ram, budget=budget, workers=workers)
    report["sweep"] = {
        "levels": list(levels),
        "discrepancy": [None if x is None else _fr(x) for x in discs],
        "discrepancy_strictly_decreasing": trend,
        "stability": verdict,
        "k": k,
    }
    return report, status
