"""ℤp-towers on P¹∖S presented by Artin-Schreier-Witt data.

A tower is given per ramified point P by polar data f_P = Σ_k c_k u_P^{-k}
in the local parameter u_P (u_∞ = 1/t, u_0 = t, u_a = t - [a]) plus an
unramified constant. Coefficients are UnramElem over ℤ_q at precision N.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    INF,
    GlobalParams,
    LaurentPoly,
    teichmuller_digits,
    teichmuller_lift,
    trace_to_prime,
)
from .polygon import ProgressionPolygon

INFINITY = "inf"


def point_key(P):
    """Deterministic sort key: finite points by code, then ∞."""
    return (1, 0) if P == INFINITY else (0, P.code())


def point_label(P):
    if P == INFINITY:
        return "inf"
    return str(P.code())


def is_zero_point(P):
    return P != INFINITY and P.is_zero()


@dataclass(frozen=True)
class TowerSpec:
    """Polar data of an ASW function on P¹∖S plus declared curve metadata."""

    params: GlobalParams
    points: tuple
    local: dict
    precision: int
    constant: object = None
    genus: int = 0
    ordinary: bool = True
    ordinary_tame: bool = True

    def __post_init__(self):
        if not self.points:
            raise ValueError("S must contain at least one point")
        keys = [point_key(P) for P in self.points]
        if len(set(keys)) != len(keys):
            raise ValueError("points of S must be distinct")
        for P, data in self.local.items():
            if P not in self.points:
                raise ValueError(f"local data given at {point_label(P)} which is not in S")
            for k in data:
                if k < 1:
                    raise ValueError("polar data must use positive pole orders")

    @property
    def p(self):
        return self.params.p

    def ring(self):
        return self.params.unram(1, self.precision)

    def sorted_points(self):
        return sorted(self.points, key=point_key)

    def data(self, P):
        return self.local.get(P, {})


@dataclass(frozen=True)
class ReducedForm:
    """Standard-form data: no pole order divisible by p, constant c·[β]."""

    spec: TowerSpec
    local: dict
    const_c: int
    beta: object
    digits: dict
    degrees: dict

    @property
    def p(self):
        return self.spec.p

    @property
    def params(self):
        return self.spec.params

    @property
    def precision(self):
        return self.spec.precision

    @property
    def points(self):
        return self.spec.sorted_points()

    def constant(self, N=None):
        """c·[β] in ℤ_q at precision N."""
        N = self.precision if N is None else N
        R = self.params.unram(1, N)
        return teichmuller_lift(self.beta, N) * self.const_c if self.const_c else R.zero()

    def is_laurent(self):
        """True when every point of S is 0 or ∞, so f is a Laurent polynomial in t."""
        return all(P == INFINITY or is_zero_point(P) for P in self.points)

    def laurent(self):
        """f as a Laurent polynomial in t (only for S ⊆ {0, ∞})."""
        if not self.is_laurent():
            raise ValueError("f is a Laurent polynomial only when S ⊆ {0, ∞}")
        R = self.spec.ring()
        terms = {0: self.constant()}
        for P in self.points:
            sign = 1 if P == INFINITY else -1
            for k, c in self.local.get(P, {}).items():
                terms[sign * k] = terms.get(sign * k, R.zero()) + c
        return LaurentPoly(R, terms)

    def to_json(self):
        out = {"p": self.p, "a": self.params.a, "precision": self.precision,
               "beta": self.beta.code(), "c": self.const_c, "points": {}}
        for P in self.points:
            loc = self.local.get(P, {})
            out["points"][point_label(P)] = {
                "coefficients": {str(k): list(loc[k].c) for k in sorted(loc)},
                "digits": {str(k): [d.code() for d in self.digits[P][k]] for k in sorted(loc)},
                "d_j": list(self.degrees[P]),
            }
        return out


def least_beta(params):
    """Least element β of F_q with Tr(β) ≠ 0."""
    for x in params.field(1).elements():
        if x.trace() != 0:
            return x
    raise AssertionError("trace map is identically zero")


def asw_reduce(spec):
    """Bring polar data into standard form modulo ℘-equivalence."""
    p = spec.p
    R = spec.ring()
    n = R.n
    local = {}
    for P in spec.sorted_points():
        data = {k: v for k, v in spec.data(P).items() if not v.is_zero()}
        while any(k % p == 0 for k in data):
            if P != INFINITY and not is_zero_point(P):
                raise ValueError(
                    f"pole order divisible by p at {point_label(P)}: reduction needs σ(u) = u^p, "
                    "which only holds at 0 and ∞"
                )
            k = max(k for k in data if k % p == 0)
            c = data.pop(k)
            # ℘(σ^{-1}(c) u^{-k/p}) = c u^{-k} - σ^{-1}(c) u^{-k/p}
            new = c.frobenius(n - 1)
            j = k // p
            data[j] = data[j] + new if j in data else new
            data = {kk: v for kk, v in data.items() if not v.is_zero()}
        local[P] = data
    beta = least_beta(spec.params)
    if spec.constant is None:
        const_c = 0
    else:
        N = spec.precision
        tr0 = trace_to_prime(spec.constant)
        trb = trace_to_prime(teichmuller_lift(beta, N))
        const_c = tr0 * pow(trb, -1, p**N) % p**N
    digits, degrees = {}, {}
    for P, data in local.items():
        digits[P] = {k: teichmuller_digits(c) for k, c in data.items()}
        degs = []
        for j in range(spec.precision):
            nz = [k for k in data if not digits[P][k][j].is_zero()]
            degs.append(max(nz) if nz else 0)
        degrees[P] = tuple(degs)
    return ReducedForm(spec, local, const_c, beta, digits, degrees)


# ---------------------------------------------------------------- ramification

@dataclass
class PointRam:
    breaks: tuple
    delta: Fraction
    stable: bool
    m0: int
    delta_digits: Fraction
    stable_digits: bool
    m0_digits: int
    unramified: bool = False
    diagnostics: str = ""

    @property
    def consistent(self):
        return (self.delta, self.stable, self.m0) == (self.delta_digits, self.stable_digits, self.m0_digits)


@dataclass
class RamData:
    p: int
    per_point: dict
    m0: int
    period: Fraction
    J: int
    points: tuple = field(default_factory=tuple)

    @property
    def stable(self):
        return all(r.stable for r in self.per_point.values())

    def delta(self, P):
        return self.per_point[P].delta

    def deltas(self):
        return [self.per_point[P].delta for P in self.points]

    def swan(self, m):
        """Σ_P p^{m-1} δ_P."""
        return sum(self.p ** (m - 1) * d for d in self.deltas())

    def to_json(self):
        return {
            "J": self.J,
            "m0": self.m0,
            "d": str(self.period),
            "points": {
                point_label(P): {
                    "breaks": [str(v) for v in r.breaks],
                    "delta": str(r.delta),
                    "m0": r.m0,
                    "stable": r.stable,
                    "unramified": r.unramified,
                }
                for P, r in self.per_point.items()
            },
        }


def breaks_from_valuations(vals, p, J):
    """v_j = p^{j-1} max{k p^{-v_p(c_k)} : v_p(c_k) < j} for j = 1..J."""
    out = []
    for j in range(1, J + 1):
        cands = [Fraction(k, p**v) for k, v in vals.items() if v < j]
        out.append(p ** (j - 1) * max(cands) if cands else Fraction(0))
    return out


def _stability_from_breaks(breaks, p):
    J = len(breaks)
    delta = breaks[-1] / p ** (J - 1)
    stable = J >= 2 and breaks[-1] == p * breaks[-2]
    m0 = next(i for i, v in enumerate(breaks) if v == p**i * delta)
    return delta, stable, m0


def _stability_from_degrees(degs, p, J):
    """δ = max_j d_j/p^j over the window j < J, with the index where it is reached."""
    window = [Fraction(degs[j] if j < len(degs) else 0, p**j) for j in range(J)]
    delta = max(window)
    first = window.index(delta)
    stable = J >= 2 and first < J - 1
    return delta, stable, first


def ram_breaks(red, J=None):
    """Upper ramification breaks, δ_P, m_0 and the period d."""
    p = red.p
    J = red.precision + 1 if J is None else J
    if J < 1:
        raise ValueError("depth J must be positive")
    per = {}
    for P in red.points:
        data = red.local.get(P, {})
        vals = {k: c.valuation() for k, c in data.items()}
        vals = {k: v for k, v in vals.items() if v != INF}
        if not vals:
            zeros = tuple(Fraction(0) for _ in range(J))
            per[P] = PointRam(zeros, Fraction(0), True, 0, Fraction(0), True, 0, unramified=True,
                              diagnostics="f vanishes at this point; it is unramified")
            continue
        brk = breaks_from_valuations(vals, p, J)
        delta, stable, m0 = _stability_from_breaks(brk, p)
        d2, s2, m2 = _stability_from_degrees(red.degrees[P], p, J)
        diag = "" if stable else f"breaks still growing faster than p at depth {J}"
        per[P] = PointRam(tuple(brk), delta, stable, m0, d2, s2, m2, diagnostics=diag)
    m0 = max(r.m0 for r in per.values())
    period = p**m0 * sum(r.delta for r in per.values())
    return RamData(p, per, m0, period, J, tuple(red.points))


def _check_ramified(ram):
    for P, r in ram.per_point.items():
        if r.unramified:
            raise ValueError(f"point {point_label(P)} is unramified and must be removed from S")
        if not r.stable:
            raise ValueError(f"tower is not stable at {point_label(P)} within the computed window")


def hodge_polygon(ram, g=0, truncation=None):
    """HP: g-1+|S| zero slopes and k(p-1)/δ_P for k ≥ 1 at each P."""
    _check_ramified(ram)
    zeros = g - 1 + len(ram.points)
    if zeros < 0:
        raise ValueError("g - 1 + |S| must be non-negative")
    p = ram.p
    progs = tuple((Fraction(p - 1) / ram.delta(P), Fraction(p - 1) / ram.delta(P)) for P in ram.points)
    poly = ProgressionPolygon(zeros, progs)
    return poly if truncation is None else poly.truncate_below(truncation)


def local_hodge_polygon(delta, p):
    d = Fraction(delta)
    return ProgressionPolygon(0, ((Fraction(p - 1) / d, Fraction(p - 1) / d),))


def omega(eps, p):
    total = Fraction(sum(eps.values()), p - 1)
    if total.denominator != 1:
        raise ValueError(f"Ω_ψ = {total} is not an integer")
    return int(total)


def twisted_hodge_polygon(ram, eps, g=0, truncation=None):
    """Twisted HP: g-1+|S|-Ω zeros and ((p-1)k - ε_P)/δ_P for k ≥ 1 at each P."""
    _check_ramified(ram)
    p = ram.p
    for P in ram.points:
        e = eps.get(P, 0)
        if not 0 <= e <= p - 2:
            raise ValueError(f"ε at {point_label(P)} must lie in 0..{p - 2}")
    om = omega({P: eps.get(P, 0) for P in ram.points}, p)
    zeros = g - 1 + len(ram.points) - om
    if zeros < 0:
        raise ValueError("g - 1 + |S| - Ω must be non-negative")
    progs = []
    for P in ram.points:
        d = ram.delta(P)
        progs.append((Fraction(p - 1 - eps.get(P, 0)) / d, Fraction(p - 1) / d))
    poly = ProgressionPolygon(zeros, tuple(progs))
    return poly if truncation is None else poly.truncate_below(truncation)


def swan_conductor(ram, P, m):
    """Highest upper break at level m: v_{P,m}."""
    r = ram.per_point[P]
    if m <= len(r.breaks):
        return r.breaks[m - 1]
    return ram.p ** (m - 1) * r.delta


def claimed_degree(ram, m, g=0):
    """2g - 2 + |S| + Σ_P v_{P,m} (equal to Σ p^{m-1} δ_P once m > m_0)."""
    total = 2 * g - 2 + len(ram.points) + sum(swan_conductor(ram, P, m) for P in ram.points)
    if Fraction(total).denominator != 1:
        raise ValueError(f"non-integral degree {total} at level {m}")
    return int(total)
