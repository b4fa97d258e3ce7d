"""Truncated p-typical Witt vectors over a generic coefficient ring.

Addition, multiplication and negation use universal integer polynomials
obtained once per (p, m) by solving the ghost equations over ℤ. The
coefficient ring only needs +, *, integer scaling and integer powers.
"""

from functools import lru_cache

from .arith import (
    FFElem,
    LaurentPoly,
    finite_field,
    nullspace_mod_p,
    solve_mod_p,
    teichmuller_lift,
)

MAX_LENGTH = 4


# ---------------------------------------------------------------- integer polynomials
# dict: exponent tuple -> int coefficient

def _padd(a, b, sign=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def _pmul(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _ppow(a, e, nvars):
    result = {(0,) * nvars: 1}
    base = a
    while e:
        if e & 1:
            result = _pmul(result, base)
        e >>= 1
        if e:
            base = _pmul(base, base)
    return result


def _pscale(a, c):
    return {k: v * c for k, v in a.items()} if c else {}


def _var(i, nvars):
    exps = [0] * nvars
    exps[i] = 1
    return {tuple(exps): 1}


def _ghost_poly(vars_, i, p, nvars):
    out = {}
    for j in range(i + 1):
        out = _padd(out, _pscale(_ppow(vars_[j], p ** (i - j), nvars), p**j))
    return out


def _solve(p, m, nvars, target):
    """Solve w_i(S) = target(i) for S_0..S_{m-1} over ℤ."""
    sols = []
    for i in range(m):
        rhs = target(i)
        for j in range(i):
            rhs = _padd(rhs, _pscale(_ppow(sols[j], p ** (i - j), nvars), p**j), -1)
        div = p**i
        for k, v in rhs.items():
            if v % div:
                raise ArithmeticError("ghost equations are not integral")
        sols.append({k: v // div for k, v in rhs.items()})
    return sols


def _check_length(m):
    if not 1 <= m <= MAX_LENGTH:
        raise ValueError(f"Witt length must lie in 1..{MAX_LENGTH}, got {m}")


@lru_cache(maxsize=None)
def universal_polys(p, m, op):
    """Universal polynomials for ``op`` in 'add', 'mul' (2m variables) or 'neg' (m variables)."""
    _check_length(m)
    if op == "neg":
        nv = m
        a = [_var(i, nv) for i in range(m)]
        polys = _solve(p, m, nv, lambda i: _pscale(_ghost_poly(a, i, p, nv), -1))
    else:
        nv = 2 * m
        a = [_var(i, nv) for i in range(m)]
        b = [_var(m + i, nv) for i in range(m)]
        if op == "add":
            polys = _solve(p, m, nv, lambda i: _padd(_ghost_poly(a, i, p, nv), _ghost_poly(b, i, p, nv)))
        elif op == "mul":
            polys = _solve(p, m, nv, lambda i: _pmul(_ghost_poly(a, i, p, nv), _ghost_poly(b, i, p, nv)))
        else:
            raise ValueError(f"unknown operation {op!r}")
    return tuple(tuple(sorted(poly.items())) for poly in polys)


def eval_poly(poly, values, zero, one):
    """Evaluate a universal polynomial at ring elements."""
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = values[i] ** e if e > 1 else values[i]
        return cache[key]

    acc = zero
    for exps, coeff in poly:
        term = one
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        acc = acc + term * coeff
    return acc


# ---------------------------------------------------------------- Witt vectors

class WittVec:
    """(a_0, ..., a_{m-1}) over a coefficient ring, for the prime p."""

    __slots__ = ("p", "comps")

    def __init__(self, p, comps):
        comps = tuple(comps)
        _check_length(len(comps))
        self.p = p
        self.comps = comps

    @property
    def m(self):
        return len(self.comps)

    def _zero_one(self):
        z = self.comps[0] * 0
        return z, z + 1

    @classmethod
    def teichmuller(cls, p, c, m):
        z = c * 0
        return cls(p, (c,) + (z,) * (m - 1))

    def _check(self, other):
        if not isinstance(other, WittVec) or other.p != self.p or other.m != self.m:
            raise ValueError("Witt vectors differ in prime or length")

    def _binary(self, other, op):
        self._check(other)
        zero, one = self._zero_one()
        values = self.comps + other.comps
        polys = universal_polys(self.p, self.m, op)
        return WittVec(self.p, [eval_poly(poly, values, zero, one) for poly in polys])

    def __add__(self, other):
        return self._binary(other, "add")

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __neg__(self):
        zero, one = self._zero_one()
        polys = universal_polys(self.p, self.m, "neg")
        return WittVec(self.p, [eval_poly(poly, self.comps, zero, one) for poly in polys])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, WittVec) and self.p == other.p and self.comps == other.comps

    def __hash__(self):
        return hash((self.p, self.comps))

    def __repr__(self):
        return f"WittVec(p={self.p}, {list(self.comps)})"

    def is_zero(self):
        return all(c == 0 for c in self.comps)

    def frobenius(self):
        """F(x): componentwise p-th power, for perfect coefficient fields of characteristic p."""
        for c in self.comps:
            if not isinstance(c, FFElem):
                raise TypeError("coefficient ring lacks a designated Frobenius")
        return WittVec(self.p, [c ** self.p for c in self.comps])

    def verschiebung(self):
        zero, _ = self._zero_one()
        return WittVec(self.p, (zero,) + self.comps[:-1])

    def conjugate(self, k=1):
        """Componentwise Frobenius conjugate (p^k-th powers)."""
        return WittVec(self.p, [c ** (self.p**k) for c in self.comps])


def ghost(x, i):
    """w_i(x) = Σ_{j ≤ i} p^j a_j^{p^{i-j}}."""
    if not 0 <= i < x.m:
        raise IndexError(f"ghost index {i} out of range for length {x.m}")
    p = x.p
    acc = x.comps[0] * 0
    for j in range(i + 1):
        acc = acc + x.comps[j] ** (p ** (i - j)) * p**j
    return acc


def witt_add(x, y):
    return x + y


def witt_mul(x, y):
    return x * y


def wp(x):
    """℘(x) = F(x) ⊖ x."""
    return x.frobenius() - x


def witt_trace(x):
    """Witt sum of the Frobenius conjugates of x over F_{p^n}, as an integer mod p^m."""
    field = x.comps[0].ring
    n = field.n
    acc = x
    cur = x
    for _ in range(n - 1):
        cur = cur.conjugate()
        acc = acc + cur
    return witt_to_int(acc)


def witt_to_int(x):
    """W_m(F_p) ≅ ℤ/p^m via (a_i) ↦ Σ p^i [a_i]."""
    p, m = x.p, x.m
    mod = p**m
    total = 0
    for i, a in enumerate(x.comps):
        if any(a.c[1:]):
            raise ValueError("components do not lie in the prime field")
        ai = a.c[0] % p
        if ai:
            fp = finite_field(p, 1)
            total += p**i * teichmuller_lift(fp(ai), m).c[0]
    return total % mod


def int_to_witt(value, p, m):
    """Inverse of witt_to_int, components in F_p."""
    fp = finite_field(p, 1)
    comps = []
    rest = value % p**m
    for i in range(m):
        digit = (rest // p**i) % p
        comps.append(fp(digit))
        if digit:
            rest = (rest - p**i * teichmuller_lift(fp(digit), m).c[0]) % p**m
    return WittVec(p, comps)


# ---------------------------------------------------------------- D_σ

def d_sigma(f, m):
    """Ghost-solving map D_σ for a Laurent polynomial over ℤ_{p^n}/p^N.

    The Frobenius lift is σ(t) = t^p with Frobenius on coefficients.
    Returns a WittVec whose components are Laurent polynomials at the
    trustworthy precision N' = N - m + 1.
    """
    if isinstance(f, int):
        raise TypeError("pass a LaurentPoly")
    ring = f.ring
    p, N = ring.p, ring.N
    _check_length(m)
    if N < m:
        raise ValueError(f"precision {N} is too small for Witt length {m}")
    comps = []
    for i in range(m):
        rhs = f.sigma(i)
        for j in range(i):
            rhs = rhs - comps[j] ** (p ** (i - j)) * p**j
        div = p**i
        terms = {}
        for k, v in rhs.terms.items():
            if any(c % div for c in v.c):
                raise ArithmeticError("D_σ divisibility failed; the input is not flat")
            terms[k] = ring.elem(tuple(c // div for c in v.c))
        comps.append(LaurentPoly(ring, terms))
    target = N - m + 1
    return WittVec(p, [c.reduce_precision(target) for c in comps])


# ---------------------------------------------------------------- ℘ preimages

def artin_schreier_solutions(y, field):
    """All x in ``field`` with x^p - x = y (an F_p-affine space, possibly empty)."""
    p, n = field.p, field.n
    mat = field.frob_matrix(1)
    rows = [[(mat[j][i] - (1 if i == j else 0)) % p for j in range(n)] for i in range(n)]
    sol = solve_mod_p(rows, list(y.c), p)
    if sol is None:
        return []
    kernel = nullspace_mod_p(rows, p)
    base = field(sol)
    out = []
    for t in range(p ** len(kernel)):
        z = base
        for idx, vec in enumerate(kernel):
            coef = (t // p**idx) % p
            if coef:
                z = z + field(vec) * coef
        out.append(z)
    return out


def wp_preimage(y, field):
    """Some x ∈ W_m(field) with ℘(x) = y (m ≤ 2), or None.

    Solved componentwise: x_0^p - x_0 = y_0, then the second component is
    x_1^p - x_1 + R(x_0) = y_1 with R read off from ℘((x_0, 0)).
    """
    from .arith import embed

    p, m = y.p, y.m
    if m > 2:
        raise ValueError("componentwise solver supports m ≤ 2")
    ys = [embed(c, field.n) for c in y.comps]
    for x0 in artin_schreier_solutions(ys[0], field):
        if m == 1:
            return WittVec(p, [x0])
        r = wp(WittVec(p, [x0, field.zero()])).comps[1]
        sols = artin_schreier_solutions(ys[1] - r, field)
        if sols:
            return WittVec(p, [x0, sols[0]])
    return None


def wp_kernel(field, m):
    """Exhaustive kernel of ℘ on W_m(field)."""
    import itertools

    elems = list(field.elements())
    out = []
    for comps in itertools.product(elems, repeat=m):
        x = WittVec(field.p, comps)
        if wp(x).is_zero():
            out.append(x)
    return out


def witt_vectors(field, m):
    import itertools

    for comps in itertools.product(list(field.elements()), repeat=m):
        yield WittVec(field.p, comps)

