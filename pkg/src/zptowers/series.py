"""Truncated series, the Artin-Hasse exponential, τ_j and Dwork splitting functions."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import (
    INF,
    CycloRing,
    EqCharSeries,
    embed,
    frac_mod,
    pi_minpoly,
    teichmuller_digits,
    teichmuller_lift,
    unram_ring,
    vp,
)


def _is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _valuation(c, p):
    if isinstance(c, (int, Fraction)):
        return vp(c, p) if c else INF
    return c.valuation()


class TruncSeries:
    """Σ_{k < order} a_k X^k with eager truncation."""

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs, order, var="t"):
        if order < 1:
            raise ValueError("truncation order must be positive")
        coeffs = list(coeffs)[:order]
        zero = coeffs[0] * 0 if coeffs else 0
        self.coeffs = coeffs + [zero] * (order - len(coeffs))
        self.order = order
        self.var = var

    def __repr__(self):
        return f"TruncSeries({self.coeffs!r}, order={self.order}, var={self.var!r})"

    def __getitem__(self, k):
        return self.coeffs[k]

    def _zero(self):
        return self.coeffs[0] * 0

    def _check(self, other):
        if not isinstance(other, TruncSeries) or other.order != self.order:
            raise ValueError("series must share the truncation order")

    def __add__(self, other):
        self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order, self.var)

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries([a * other for a in self.coeffs], self.order, self.var)
        self._check(other)
        n = self.order
        out = [self._zero() for _ in range(n)]
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if not _is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(out, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, k):
        one = self._zero() + 1
        result = TruncSeries([one], self.order, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self.order == other.order and self.coeffs == other.coeffs

    def valuation(self):
        """Index of the first nonzero coefficient (INF for zero)."""
        for k, a in enumerate(self.coeffs):
            if not _is_zero(a):
                return k
        return INF

    def compose(self, inner):
        """self(inner) for inner with positive valuation."""
        if inner.valuation() < 1:
            raise ValueError("composition needs an inner series without constant term")
        one = inner._zero() + 1
        acc = TruncSeries([self._zero() * one], inner.order, inner.var)
        power = TruncSeries([one], inner.order, inner.var)
        for k, a in enumerate(self.coeffs[: inner.order]):
            if not _is_zero(a):
                acc = acc + power * a
            power = power * inner
        return acc

    def map(self, fn):
        return TruncSeries([fn(a) for a in self.coeffs], self.order, self.var)

    def is_p_integral(self, p):
        return all(Fraction(a).denominator % p for a in self.coeffs)

    def mod(self, modulus):
        """Coefficients as integers mod ``modulus`` (coefficients must be p-integral)."""
        return self.map(lambda a: frac_mod(Fraction(a), modulus))


# ---------------------------------------------------------------- Artin-Hasse

def _mobius(n):
    out, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    return -out if n > 1 else out


def _binomial_series(alpha, step, order):
    """(1 - X^step)^alpha as exact rationals."""
    out = [Fraction(0)] * order
    coef = Fraction(1)
    k = 0
    while k * step < order:
        out[k * step] = coef * (-1) ** k
        coef = coef * (alpha - k) / (k + 1)
        k += 1
    return out


@lru_cache(maxsize=None)
def _artin_hasse_cached(p, order):
    series = TruncSeries([Fraction(1)], order)
    for n in range(1, order):
        if n % p == 0:
            continue
        mu = _mobius(n)
        if mu:
            series = series * TruncSeries(_binomial_series(Fraction(-mu, n), n, order), order)
    if not series.is_p_integral(p):
        raise AssertionError("Artin-Hasse coefficients are not p-integral")
    return tuple(series.coeffs)


def artin_hasse(order, p):
    """E(t) = ∏_{p ∤ n} (1 - t^n)^{-μ(n)/n}, exact rationals, truncated at t^order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return TruncSeries(list(_artin_hasse_cached(p, order)), order)


def series_log(s):
    """log of a series with constant term 1, exact rationals."""
    if s[0] != 1:
        raise ValueError("log needs constant term 1")
    x = s - TruncSeries([Fraction(1)], s.order, s.var)
    acc = TruncSeries([Fraction(0)], s.order, s.var)
    power = TruncSeries([Fraction(1)], s.order, s.var)
    for k in range(1, s.order):
        power = power * x
        acc = acc + power * Fraction((-1) ** (k + 1), k)
    return acc


def artin_hasse_log(order, p):
    """Σ_{p^i < order} t^{p^i}/p^i."""
    out = [Fraction(0)] * order
    i = 0
    while p**i < order:
        out[p**i] = Fraction(1, p**i)
        i += 1
    return TruncSeries(out, order)


@lru_cache(maxsize=None)
def _tau_cached(p, j, order):
    # E(τ) = (1+T)^{p^j}  <=>  Σ_i τ^{p^i}/p^i = p^j log(1+T)
    log1p = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, order)]
    target = TruncSeries(log1p, order, "T") * p**j
    tau = TruncSeries([Fraction(0)], order, "T")
    for _ in range(order + 1):
        rest = TruncSeries([Fraction(0)], order, "T")
        i = 1
        while p**i < order:
            rest = rest + tau ** (p**i) * Fraction(1, p**i)
            i += 1
        new = target - rest
        if new == tau:
            break
        tau = new
    if not tau.is_p_integral(p):
        raise AssertionError("τ_j is not p-integral")
    return tuple(tau.coeffs)


def tau(j, order, p):
    """The series τ_j ∈ TΛ with E(τ_j(T)) = (1+T)^{p^j}."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if order < 2:
        raise ValueError("order must be at least 2")
    return TruncSeries(list(_tau_cached(p, j, order)), order, "T")


# ---------------------------------------------------------------- ℤ_Q[π]

class PiRing:
    """(ℤ/p^K)[u]/(h_n) [π] / Φ_{p^m}(1+π); v_π(π) = 1."""

    def __init__(self, p, m, n, K):
        self.p, self.m, self.n, self.K = p, m, n, K
        self.e = p ** (m - 1) * (p - 1)
        self.minpoly = pi_minpoly(p, m)
        self.base = unram_ring(p, n, K)
        self.key = (p, m, n, K)

    def __call__(self, coeffs):
        base = self.base
        out = []
        for c in coeffs:
            out.append(base(c) if isinstance(c, int) else c)
        out += [base.zero()] * (self.e - len(out))
        return PiElem(self, out[: self.e])

    def zero(self):
        return self([])

    def one(self):
        return self([1])

    def pi(self):
        if self.e == 1:
            return self([-self.minpoly[0]])
        return self([0, 1])

    def from_series(self, series):
        """Σ a_k π^k for a p-integral rational series."""
        mod = self.base.mod
        acc = self.zero()
        power = self.one()
        for a in series.coeffs:
            if a:
                acc = acc + power * frac_mod(Fraction(a), mod)
            power = power * self.pi()
        return acc


class PiElem:
    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = tuple(coeffs)

    def __repr__(self):
        return f"PiElem({[list(x.c) for x in self.c]})"

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring([other])
        return PiElem(self.ring, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return PiElem(self.ring, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return PiElem(self.ring, [a * other for a in self.c])
        if not isinstance(other, PiElem):
            # scalar from the unramified coefficient ring
            return PiElem(self.ring, [a * other for a in self.c])
        e = self.ring.e
        zero = self.ring.base.zero()
        prod = [zero] * (2 * e - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                if not b.is_zero():
                    prod[i + j] = prod[i + j] + a * b
        h = self.ring.minpoly
        for d in range(2 * e - 2, e - 1, -1):
            top = prod[d]
            if top.is_zero():
                continue
            for i in range(e):
                if h[i]:
                    prod[d - e + i] = prod[d - e + i] - top * h[i]
        return PiElem(self.ring, prod[:e])

    __rmul__ = __mul__

    def __pow__(self, k):
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring([other])
        return isinstance(other, PiElem) and self.ring.key == other.ring.key and self.c == other.c

    def __hash__(self):
        return hash((self.ring.key, self.c))

    def is_zero(self):
        return all(a.is_zero() for a in self.c)

    def frobenius(self, k=1):
        return PiElem(self.ring, [a.frobenius(k) for a in self.c])

    def valuation(self):
        e = self.ring.e
        best = INF
        for i, a in enumerate(self.c):
            v = a.valuation()
            if v != INF:
                best = min(best, e * v + i)
        return best

    def int_rows(self):
        """Coefficients as integers, when they all lie in ℤ_p."""
        if any(any(a.c[1:]) for a in self.c):
            raise ValueError("coefficients do not lie in ℤ_p")
        return [a.c[0] for a in self.c]


# ---------------------------------------------------------------- growth rings

@dataclass(frozen=True)
class GrowthRingSpec:
    """𝒜^m: Σ a_k t^{-k} with v(a_k) ≥ k/m."""

    m: Fraction
    cap: object = None

    def __post_init__(self):
        if Fraction(self.m) <= 0:
            raise ValueError("growth rate must be positive")


def growth_check(s, spec, p=None):
    """(True, None) if every checkable coefficient satisfies v(a_k) ≥ k/m, else (False, k).

    Coefficients whose computed valuation reaches the working cap are only
    known to be at least the cap; they are skipped when the bound exceeds it.
    """
    m = Fraction(spec.m)
    for k, a in enumerate(s.coeffs):
        v = _valuation(a, p)
        bound = Fraction(k) / m
        if v == INF or v >= bound:
            continue
        if spec.cap is not None and v >= spec.cap:
            continue
        return False, k
    return True, None


# ---------------------------------------------------------------- splitting functions

def _digit_factors(red, P, m):
    """[(j, k, digit)] for the polar data at P, j < m."""
    out = []
    for k, digs in sorted(red.digits.get(P, {}).items()):
        for j in range(min(m, len(digs))):
            if not digs[j].is_zero():
                out.append((j, k, digs[j]))
    return out


def _constant_digits(red, m):
    if not red.const_c:
        return []
    digs = teichmuller_digits(red.constant(), m)
    return [(j, 0, d) for j, d in enumerate(digs[:m]) if not d.is_zero()]


def work_precision(p, m, cap):
    e = p ** (m - 1) * (p - 1)
    return -(-cap // e) + 1


def splitting_series(red, char, t_order, val_cap=None, point=None):
    """Ẽ = ∏_{j,k} E([c_{j,k}] τ_j t^{-k}) at one point of S, as a series in t^{-1}."""
    from .tower import point_label

    p = red.p
    if point is None:
        if len(red.points) != 1:
            raise ValueError("choose a point of S")
        point = red.points[0]
    if char.kind == "finite":
        m = char.m
        e = p ** (m - 1) * (p - 1)
        cap = e + 2 if val_cap is None else val_cap
        K = work_precision(p, m, cap)
        if red.precision < min(m, K):
            raise ValueError(f"tower precision {red.precision} is short of {min(m, K)}")
        ring = PiRing(p, m, red.params.a, K)
        lam = [ring.from_series(tau(j, cap + 1, p)) for j in range(m)]
        E = artin_hasse(cap + 1, p).mod(p**K)
        one = ring.one()
        out = TruncSeries([one], t_order, "1/t")
        for j, k, dig in _digit_factors(red, point, m):
            z = teichmuller_lift(dig, K)
            coeffs = [ring.zero()] * t_order
            s = 0
            lam_pow, z_pow = one, ring.base.one()
            while s * k < t_order and s * p**j < cap:
                coeffs[s * k] = lam_pow * z_pow * E[s]
                s += 1
                lam_pow, z_pow = lam_pow * lam[j], z_pow * z
            out = out * TruncSeries(coeffs, t_order, "1/t")
        return out
    # equicharacteristic: coefficients in F_p[[T]]
    if red.params.a != 1:
        raise ValueError(f"equicharacteristic splitting series needs q = p (point {point_label(point)})")
    M = char.M
    E = artin_hasse(M + 1, p).mod(p)
    taus = []
    j = 0
    while p**j < M:
        t = tau(j, M + 1, p).mod(p)
        taus.append(EqCharSeries(p, M, t.coeffs))
        j += 1
    one = EqCharSeries.one(p, M)
    out = TruncSeries([one], t_order, "1/t")
    for j, k, dig in _digit_factors(red, point, len(taus)):
        c = dig.c[0]
        coeffs = [EqCharSeries.zero(p, M)] * t_order
        s = 0
        power = one
        while s * k < t_order and s * p**j < M:
            coeffs[s * k] = power * (E[s] * pow(c, s, p))
            s += 1
            power = power * taus[j]
        out = out * TruncSeries(coeffs, t_order, "1/t")
    return out


def splitting_norm(red, x, m, cap=None):
    """N_{k(x)/F_p} Ẽ(π)(x̂) in ℤ_p[π] modulo π^cap, for S ⊆ {0, ∞}."""
    from .tower import INFINITY, is_zero_point

    p = red.p
    e = p ** (m - 1) * (p - 1)
    cap = e + 2 if cap is None else cap
    K = work_precision(p, m, cap)
    if red.precision < m:
        raise ValueError(f"tower precision {red.precision} is short of {m}")
    n = x.ring.n
    ring = PiRing(p, m, n, K)
    lam = [ring.from_series(tau(j, cap + 1, p)) for j in range(m)]
    E = artin_hasse(cap + 1, p).mod(p**K)
    xh = teichmuller_lift(x, K)
    factors = list(_constant_digits(red, m))
    ys = {0: ring.base.one()}
    for P in red.points:
        if P == INFINITY:
            y = xh
        elif is_zero_point(P):
            if x.is_zero():
                raise ValueError("x lies in S at 0")
            y = xh.inverse()
        else:
            raise ValueError("the Teichmüller point of u_P is only available at 0 and ∞")
        for j, k, dig in _digit_factors(red, P, m):
            factors.append((j, k, dig, y))
    value = ring.one()
    for item in factors:
        if len(item) == 3:
            j, k, dig = item
            y = ys[0]
        else:
            j, k, dig, y = item
        z = embed(teichmuller_lift(dig, K), n) * y**k
        term = ring.zero()
        s = 0
        lam_pow, z_pow = ring.one(), ring.base.one()
        while s * p**j < cap:
            term = term + lam_pow * z_pow * E[s]
            s += 1
            lam_pow, z_pow = lam_pow * lam[j], z_pow * z
        value = value * term
    norm = value
    conj = value
    for _ in range(n - 1):
        conj = conj.frobenius()
        norm = norm * conj
    return norm, cap


def path_c_value(red, x, m, cap=None):
    """Exponent a mod p^m with N Ẽ(x̂) ≡ (1+π)^a mod π^cap."""
    norm, cap = splitting_norm(red, x, m, cap)
    rows = norm.int_rows()
    K = norm.ring.K
    mod = red.p**K
    cyc = CycloRing(red.p, m)
    e = cyc.e
    for a in range(red.p**m):
        target = cyc.char_value(a).rows[0]
        diff = [(u - v) % mod for u, v in zip(rows, target)]
        v = min((e * vp(d, red.p) + i for i, d in enumerate(diff) if d), default=INF)
        if v >= cap:
            return a
    raise ArithmeticError("splitting norm is not a power of 1 + π at this precision")

