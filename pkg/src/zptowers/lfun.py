"""Frobenius values, characters and exact L-functions of towers on P¹∖S."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import accel
from .arith import (
    INF,
    CycloRing,
    EqCharSeries,
    FFElem,
    embed,
    eqchar_char_value,
    finite_field,
    primitive_element,
    teichmuller_lift,
    trace_to_prime,
    unram_ring,
)
from .tower import INFINITY, is_zero_point, point_key, point_label
from .witt import d_sigma, witt_trace


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate, budget):
        super().__init__(f"estimated enumeration cost {estimate} exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


class PrecisionShortfall(ValueError):
    pass


def default_workers():
    env = os.environ.get("ZPTOWERS_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------- characters

@dataclass(frozen=True)
class TameSpec:
    """ψ = ω(N h)^{(q-1)/c} with h = ∏ (t - a_i)^{e_i}, a_i ∈ F_q."""

    factors: tuple
    order: int

    def validate(self, params):
        if (params.q - 1) % self.order:
            raise ValueError(f"order {self.order} does not divide q - 1 = {params.q - 1}")
        for a, e in self.factors:
            if a == INFINITY:
                raise ValueError("∞ is handled by degree bookkeeping; list finite factors only")
            if e % self.order == 0:
                raise ValueError("factor exponents divisible by the order do not ramify ψ")

    def degree(self):
        return sum(e for _, e in self.factors)

    def valuation_at(self, P):
        if P == INFINITY:
            return -self.degree()
        return sum(e for a, e in self.factors if a == P)

    def ramified_points(self):
        pts = {a for a, _ in self.factors}
        out = [a for a in pts if self.valuation_at(a) % self.order]
        if self.degree() % self.order:
            out.append(INFINITY)
        return sorted(out, key=point_key)

    def local_exponent(self, P):
        """e_P = -v_P(h)/c reduced into [0, 1).

        The sign matches ψ(Frob_x) = ω(N h(x))^{(q-1)/c}: with it the twisted
        Newton polygon below e_χ meets the twisted Hodge bound exactly.
        """
        from fractions import Fraction

        v = Fraction(-self.valuation_at(P), self.order)
        return v - math.floor(v)

    def eps(self, P, p):
        """ε_P = (p-1)·e_P, required to be an integer."""
        val = (p - 1) * self.local_exponent(P)
        if val.denominator != 1:
            raise ValueError(f"ε at {point_label(P)} is not integral; need c | p - 1")
        return int(val)

    def tame_root(self, params):
        """ξ = γ^{(q-1)/c} for the canonical primitive γ of F_q."""
        g = primitive_element(params.p, params.a)
        return g ** ((params.q - 1) // self.order)

    def to_json(self):
        return {"factors": [[point_label(a), e] for a, e in self.factors], "order": self.order}


@dataclass(frozen=True)
class CharSpec:
    kind: str
    m: int = 1
    M: int = 0
    tame: TameSpec = None

    def __post_init__(self):
        if self.kind == "finite" and self.m < 1:
            raise ValueError("finite level m must be at least 1")
        if self.kind == "equichar" and self.M < 1:
            raise ValueError("T-precision M must be at least 1")
        if self.kind not in ("finite", "equichar"):
            raise ValueError(f"unknown character kind {self.kind!r}")
        if self.kind == "equichar" and self.tame is not None:
            raise ValueError("tame twists are only supported for finite characters")

    @classmethod
    def finite(cls, m, tame=None):
        return cls("finite", m=m, tame=tame)

    @classmethod
    def equichar(cls, M):
        return cls("equichar", M=M)

    def digits_needed(self, p):
        """p-adic digits of Frobenius values that the character sees."""
        if self.kind == "finite":
            return self.m
        r = 0
        while p**r < self.M:
            r += 1
        return max(r, 1)

    def describe(self):
        if self.kind == "finite":
            out = {"kind": "finite", "m": self.m}
        else:
            out = {"kind": "equichar", "M": self.M}
        if self.tame is not None:
            out["tame"] = self.tame.to_json()
        return out


def cyclo_ring(params, char):
    c = 1 if char.tame is None else char.tame.order
    root = None if c <= 2 else char.tame.tame_root(params)
    return CycloRing(params.p, char.m, c, root)


def char_value(a, char, p=None, ring=None):
    """χ(a) = (1+π)^a for finite χ, (1+T)^a for the equicharacteristic χ_0."""
    if char.kind == "finite":
        ring = ring or CycloRing(p, char.m)
        return ring.char_value(a)
    r = char.digits_needed(p)
    return eqchar_char_value(a, char.M, p, r)


def tame_exponent(psi, params, x):
    """j with ψ(Frob_x) = ζ_c^j, for x ∈ F_{q^k} (any representative of the point)."""
    psi.validate(params)
    if psi.order == 1:
        return 0
    p, a = params.p, params.a
    n = x.ring.n
    k = n // a
    F = finite_field(p, n)
    h = F.one()
    for pt, e in psi.factors:
        diff = x - embed(pt, n)
        if diff.is_zero():
            raise ValueError("ψ is evaluated at a zero or pole of its defining function")
        h = h * diff ** (e % (F.Q - 1))
    # norm down to F_q, then express in the canonical generator of F_q
    Nh = h ** ((F.Q - 1) // (params.q - 1))
    gamma = embed(primitive_element(p, a), n)
    log = _subfield_log(gamma, Nh, params.q)
    del k
    return log % psi.order


def _subfield_log(gamma, y, q):
    z = gamma.ring.one()
    for s in range(q - 1):
        if z == y:
            return s
        z = z * gamma
    raise ValueError("element is not in the base field")


def tame_value(psi, params, x, m=1):
    """ψ(Frob_x) as an element of ℤ[ζ_c] (inside the level-m cyclotomic ring)."""
    ring = cyclo_ring(params, CharSpec.finite(m, psi))
    return ring.zeta_c(tame_exponent(psi, params, x))


# ---------------------------------------------------------------- Frobenius values

def _check_point(red, x):
    n = x.ring.n
    for P in red.points:
        if P != INFINITY and (x - embed(P, n)).is_zero():
            raise ValueError(f"x lies in S at {point_label(P)}")


def _work_coeff(c, N, n):
    """Coefficient at working precision N, embedded in degree n."""
    c = unram_ring(c.ring.p, c.ring.n, N)(c.c)
    return embed(c, n)


def flat_value(red, x, N):
    """f(x̂) at the Teichmüller point x̂ = [x], in ℤ/p^N[u]/(h)."""
    if N > red.precision:
        raise PrecisionShortfall(f"tower precision {red.precision} < required {N}")
    n = x.ring.n
    xh = teichmuller_lift(x, N)
    R = xh.ring
    val = _work_coeff(red.constant(), N, n)
    for P in red.points:
        data = red.local.get(P, {})
        if not data:
            continue
        if P == INFINITY:
            base = xh
        elif is_zero_point(P):
            base = xh.inverse()
        else:
            base = (xh - teichmuller_lift(embed(P, n), N)).inverse()
        for k, c in data.items():
            val = val + _work_coeff(c, N, n) * base**k
    assert val.ring is R
    return val


def frobenius_value(red, x, m, path="A"):
    """ρ(Frob_x) ∈ ℤ/p^m at the closed point through x ∈ F_{q^k}."""
    if x == INFINITY:
        if INFINITY in red.points:
            raise ValueError("x lies in S at inf")
        return trace_to_prime(_work_coeff(red.constant(), m, red.params.a)) % p_pow(red, m)
    _check_point(red, x)
    if path == "A":
        return trace_to_prime(flat_value(red, x, m)) % p_pow(red, m)
    if path == "B":
        vec = _witt_components(red, m)
        comps = [c.evaluate(x) for c in vec]
        from .witt import WittVec

        return witt_trace(WittVec(red.p, comps))
    raise ValueError(f"unknown path {path!r}")


def p_pow(red, m):
    return red.p**m


_DSIGMA_CACHE = {}


def _witt_components(red, m):
    key = (id(red), m)
    if key not in _DSIGMA_CACHE:
        if red.precision < m:
            raise PrecisionShortfall(f"tower precision {red.precision} < Witt length {m}")
        vec = d_sigma(red.laurent().reduce_precision(m), m)
        comps = [c.reduce_precision(1) for c in vec.comps]
        _DSIGMA_CACHE[key] = (red, comps)
    return _DSIGMA_CACHE[key][1]


def closed_points(params, k):
    """Least-code representatives of the closed points of A¹ of degree k over F_q."""
    F = params.field(k)
    q = params.q
    seen = set()
    out = []
    for x in F.elements():
        if x.code() in seen:
            continue
        orbit = [x]
        y = x ** q
        while y != x:
            orbit.append(y)
            y = y ** q
        for z in orbit:
            seen.add(z.code())
        if len(orbit) == k:
            out.append(min(orbit, key=lambda z: z.code()))
    return out


# ---------------------------------------------------------------- vectorized enumeration

@dataclass
class LevelTable:
    """Frobenius values and degrees of all x ∈ P¹(F_{q^k}) off S (and off the ψ support)."""

    k: int
    values: np.ndarray
    degrees: np.ndarray
    tame: np.ndarray


@lru_cache(maxsize=64)
def _power_table(p, n, N):
    R = unram_ring(p, n, N)
    g = primitive_element(p, n)
    G = teichmuller_lift(g, N)
    return accel.power_table(np.array(G.c, dtype=np.int64), np.array(R.modulus, dtype=np.int64), R.mod, R.Q - 1)


def _dlog_table(p, n, table):
    """dlog[code of g^i mod p] = i."""
    Q = p**n
    weights = p ** np.arange(n, dtype=np.int64)
    codes = (table % p) @ weights
    out = np.full(Q, -1, dtype=np.int64)
    out[codes] = np.arange(len(codes), dtype=np.int64)
    return out


def _lift_rows(elem, N, n):
    return np.array(_work_coeff(elem, N, n).c, dtype=np.int64)


def level_table(red, k, N, psi=None):
    """Enumerate x ∈ F_{q^k} plus ∞ (when ∞ ∉ S); values are Tr f(x̂) mod p^N."""
    params = red.params
    p, a, q = params.p, params.a, params.q
    n = a * k
    R = unram_ring(p, n, N)
    mod = R.mod
    modulus = np.array(R.modulus, dtype=np.int64)
    Q = R.Q
    T = _power_table(p, n, N)  # T[i] = [g]^i, i < Q-1
    idx = np.arange(Q - 1, dtype=np.int64)
    # rows: 0 ↔ x = 0, i + 1 ↔ x = g^i
    vals = np.zeros((Q, n), dtype=np.int64)
    vals[:] = _lift_rows(red.constant(), N, n)
    valid = np.ones(Q, dtype=bool)
    xs_full = np.vstack([np.zeros((1, n), dtype=np.int64), T])
    for P in red.points:
        data = red.local.get(P, {})
        if P == INFINITY:
            for kk, c in data.items():
                mat = accel.mult_matrix(_lift_rows(c, N, n), modulus, mod)
                vals[1:] = (vals[1:] + accel.batch_mul_fixed(T[(kk * idx) % (Q - 1)], mat, mod)) % mod
            continue
        if is_zero_point(P):
            valid[0] = False
            for kk, c in data.items():
                mat = accel.mult_matrix(_lift_rows(c, N, n), modulus, mod)
                vals[1:] = (vals[1:] + accel.batch_mul_fixed(T[(-kk * idx) % (Q - 1)], mat, mod)) % mod
            continue
        aP = np.array(teichmuller_lift(embed(P, n), N).c, dtype=np.int64)
        diff = (xs_full - aP[None, :]) % mod
        bad = ~np.any(diff % p, axis=1)
        valid &= ~bad
        diff[bad] = 0
        diff[bad, 0] = 1
        inv = accel.batch_pow(diff, Q ** (N - 1) * (Q - 1) - 1, modulus, mod)
        powk = np.zeros_like(inv)
        powk[:, 0] = 1
        last = 0
        for kk in sorted(data):
            powk = accel.batch_mulmod(powk, accel.batch_pow(inv, kk - last, modulus, mod), modulus, mod)
            last = kk
            mat = accel.mult_matrix(_lift_rows(data[kk], N, n), modulus, mod)
            vals = (vals + accel.batch_mul_fixed(powk, mat, mod)) % mod
    trvec = np.array(R.trace_vector(), dtype=np.int64)
    traces = (vals @ trvec) % mod
    degs = np.ones(Q, dtype=np.int64)
    degs[1:] = accel.exact_degrees(idx, Q - 1, q, k)
    tame = np.zeros(Q, dtype=np.int64)
    if psi is not None and psi.order > 1:
        tame, tvalid = _tame_column(psi, params, k, n, T, xs_full)
        valid &= tvalid
    values, degrees, tames = traces[valid], degs[valid], tame[valid]
    if INFINITY not in red.points:
        cval = trace_to_prime(_work_coeff(red.constant(), N, n)) % mod
        values = np.append(values, cval)
        degrees = np.append(degrees, 1)
        tames = np.append(tames, 0)
    return LevelTable(k, values, degrees, tames)


def _tame_column(psi, params, k, n, T, xs_full):
    p, q = params.p, params.q
    Q = p**n
    dlog = _dlog_table(p, n, T)
    total = np.zeros(Q, dtype=np.int64)
    valid = np.ones(Q, dtype=bool)
    weights = p ** np.arange(n, dtype=np.int64)
    for pt, e in psi.factors:
        aP = np.array(embed(pt, n).c, dtype=np.int64)
        diff = (xs_full - aP[None, :]) % p
        codes = diff @ weights
        logs = dlog[codes]
        bad = codes == 0
        valid &= ~bad
        total = (total + e * np.where(bad, 0, logs)) % (Q - 1)
    # N_{F_{q^k}/F_q}(g) = γ^s for the canonical generator γ of F_q
    g = primitive_element(p, n)
    gamma = embed(primitive_element(p, params.a), n)
    s = _subfield_log(gamma, g ** ((Q - 1) // (q - 1)), q)
    return (total * s) % psi.order, valid


# ---------------------------------------------------------------- L-functions

@dataclass
class LSeries:
    char: CharSpec
    coeffs: list
    D: int
    degree: int
    p: int
    a: int
    kind: str
    M: int = 0
    meta: dict = field(default_factory=dict)

    def valuations(self):
        return [c.valuation() for c in self.coeffs]

    def beyond_degree_vanish(self):
        return all(c.is_zero() for c in self.coeffs[self.degree + 1:])

    def to_json(self):
        vals = self.valuations()
        return {
            "character": self.char.describe(),
            "kind": self.kind,
            "D": self.D,
            "degree": self.degree,
            "coefficients": [c.to_json() for c in self.coeffs],
            "valuations": [None if v == INF else str(v) for v in vals],
            **self.meta,
        }


def enumeration_cost(params, D):
    return sum(params.q**k for k in range(1, D + 1))


def _level_tables(red, char, D, workers, psi):
    N = char.digits_needed(red.p)
    if red.precision < N:
        raise PrecisionShortfall(f"tower precision {red.precision} < required {N}")
    workers = workers or default_workers()
    ks = list(range(1, D + 1))
    if workers > 1 and D > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(lambda k: level_table(red, k, N, psi), ks))
    else:
        tables = [level_table(red, k, N, psi) for k in ks]
    return tables, N


def _unit(ring, j, r):
    return ring.zeta_c(j) * ring.char_value(r)


def l_function(red, char, D=None, budget=None, workers=None, degree=None):
    """Truncated L(ρ_χ, s) (finite kind: Euler product and power sums, which must agree)."""
    from .tower import claimed_degree, ram_breaks

    params = red.params
    p = params.p
    psi = char.tame
    if psi is not None:
        psi.validate(params)
        for P in psi.ramified_points():
            if all(point_key(P) != point_key(Q) for Q in red.points):
                raise ValueError(f"ψ ramifies at {point_label(P)} outside S")
    if degree is None and char.kind == "finite":
        degree = claimed_degree(ram_breaks(red), char.m, red.spec.genus)
    if D is None:
        D = degree + 1 if char.kind == "finite" else 3
    if budget is not None:
        cost = enumeration_cost(params, D)
        if cost > budget:
            raise BudgetExceeded(cost, budget)
    tables, N = _level_tables(red, char, D, workers, psi)
    mod = p**N
    c = 1 if psi is None else psi.order
    if char.kind == "finite":
        ring = cyclo_ring(params, char)
        euler = _euler_finite(tables, ring, mod, c, D)
        power = _power_sum_finite(tables, ring, mod, c, D)
        if euler != power:
            raise AssertionError("Euler product and power-sum exponential disagree")
        ls = LSeries(char, euler, D, degree, p, params.a, "finite")
        ls.meta["degree_formula"] = "2g-2+|S|+sum_P v_P,m (assumed; checked by vanishing)"
        return ls
    coeffs = _euler_equichar(tables, char, p, mod, D)
    return LSeries(char, coeffs, D, -1 if degree is None else degree, p, params.a, "equichar", M=char.M)


def _power_sums(tables, ring, mod, c):
    out = []
    for t in tables:
        hist = accel.residue_histogram(t.values, t.tame, mod, c)
        s = ring.zero()
        for j in range(c):
            for r in np.nonzero(hist[j])[0]:
                s = s + _unit(ring, j, int(r)) * int(hist[j, r])
        out.append(s)
    return out


def _power_sum_finite(tables, ring, mod, c, D):
    S = _power_sums(tables, ring, mod, c)
    L = [ring.one()]
    for n in range(1, D + 1):
        acc = ring.zero()
        for i in range(1, n + 1):
            acc = acc + S[i - 1] * L[n - i]
        L.append(acc.exact_div(n))
    return L


def _series_mul(a, b, D, zero):
    out = [zero] * (D + 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(min(D + 1 - i, len(b))):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + x * b[j]
    return out


def _euler_finite(tables, ring, mod, c, D):
    L = [ring.one()] + [ring.zero()] * D
    for t in tables:
        d = t.k
        sel = t.degrees == d
        hist = accel.residue_histogram(t.values[sel], t.tame[sel], mod, c)
        for j in range(c):
            for r in np.nonzero(hist[j])[0]:
                count = int(hist[j, r])
                if count % d:
                    raise AssertionError("points of exact degree d do not form whole orbits")
                npts = count // d
                factor = [ring.zero()] * (D + 1)
                for s_pow in range(D // d + 1):
                    factor[s_pow * d] = _unit(ring, j * s_pow, int(r) * s_pow) * math.comb(npts + s_pow - 1, s_pow)
                L = _series_mul(L, factor, D, ring.zero())
    return L


def _euler_equichar(tables, char, p, mod, D):
    M = char.M
    r_digits = char.digits_needed(p)
    zero = EqCharSeries.zero(p, M)
    L = [EqCharSeries.one(p, M)] + [zero] * D
    for t in tables:
        d = t.k
        sel = t.degrees == d
        hist = accel.residue_histogram(t.values[sel], t.tame[sel], mod, 1)[0]
        for r in np.nonzero(hist)[0]:
            count = int(hist[r])
            if count % d:
                raise AssertionError("points of exact degree d do not form whole orbits")
            npts = count // d
            factor = [zero] * (D + 1)
            for s_pow in range(D // d + 1):
                val = eqchar_char_value(int(r) * s_pow, M, p, r_digits)
                factor[s_pow * d] = val * (math.comb(npts + s_pow - 1, s_pow) % p)
            L = _series_mul(L, factor, D, zero)
    return L


def default_equichar_precision(a, max_ordinate):
    """M = a·(max NP ordinate + 2)."""
    return a * (int(math.ceil(max_ordinate)) + 2)


def multiply_series(a, b, D):
    zero = a[0] * 0
    return _series_mul(a, b, D, zero)


def is_ffelem(x):
    return isinstance(x, FFElem)
