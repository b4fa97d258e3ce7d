"""Exact arithmetic in the base rings.

Finite fields F_{p^n}, unramified quotient rings ℤ/p^N[u]/(h_n), cyclotomic
integers in the basis 1, π, ..., π^{e-1} with π = ζ_{p^m} - 1 (optionally
with an adjoined tame root of unity), and truncated series over F_p in T.

Conventions
-----------
* ``h̄_n`` is the monic irreducible of degree n over F_p with the smallest
  integer code Σ c_i p^i (constant term least significant).
* The unramified lift ``h_n`` is the polynomial whose roots are the
  Teichmüller lifts of the roots of ``h̄_n``. Hence ``u`` is itself a
  Teichmüller element and the Frobenius lift is ``u ↦ u^p``.
* Embeddings ℤ_{p^d} → ℤ_{p^k} send ``u`` to the Teichmüller lift of the
  least root of ``h̄_d`` in F_{p^k}.
"""

import math
from fractions import Fraction
from functools import lru_cache, reduce

INF = math.inf


# ---------------------------------------------------------------- integers

def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def vp(n, p):
    """p-adic valuation of a nonzero integer or Fraction; INF for zero."""
    if n == 0:
        return INF
    if isinstance(n, Fraction):
        return vp(n.numerator, p) - vp(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_mod(x, mod):
    """Image of a p-integral rational in ℤ/mod."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, mod) % mod


def digits(a, p, r):
    return [(a // p**i) % p for i in range(r)]


# ---------------------------------------------------------------- polynomials mod an integer
# Lists of ints, lowest degree first.

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, mod):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % mod for c in out])


def poly_rem(a, h, mod):
    """Remainder of a by a polynomial h whose leading coefficient is a unit mod ``mod``."""
    a = [c % mod for c in a]
    n = len(h) - 1
    inv = pow(h[-1], -1, mod)
    for d in range(len(a) - 1, n - 1, -1):
        top = a[d] * inv % mod
        if top:
            for i in range(n + 1):
                a[d - n + i] = (a[d - n + i] - top * h[i]) % mod
    return _trim(a[:n])


def poly_divmod(a, h, mod):
    a = [c % mod for c in a]
    n = len(h) - 1
    if len(a) <= n:
        return [], _trim(a)
    inv = pow(h[-1], -1, mod)
    quo = [0] * (len(a) - n)
    for d in range(len(a) - 1, n - 1, -1):
        top = a[d] * inv % mod
        quo[d - n] = top
        if top:
            for i in range(n + 1):
                a[d - n + i] = (a[d - n + i] - top * h[i]) % mod
    return _trim(quo), _trim(a[:n])


def poly_gcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base, e, h, mod):
    result = [1 % mod]
    base = poly_rem(base, h, mod)
    while e:
        if e & 1:
            result = poly_rem(poly_mul(result, base, mod), h, mod)
        e >>= 1
        if e:
            base = poly_rem(poly_mul(base, base, mod), h, mod)
    return result


def is_irreducible(f, p):
    """Ben-Or test for a monic f over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = poly_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(f, diff, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_poly(p, n):
    """Least monic irreducible of degree n over F_p, as a tuple (low first)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("degree must be positive")
    for code in range(p**n):
        f = digits(code, p, n) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def teich_modulus(p, n, N):
    """Monic lift of h̄_n to ℤ/p^N whose roots are Teichmüller elements."""
    hbar = list(irreducible_poly(p, n))
    mod = p**N
    if N == 1 or n == 1:
        # degree one: h̄_1 = X has the Teichmüller root 0
        return tuple(c % mod for c in hbar)
    w = poly_powmod([0, 1], p ** (n * (N - 1)), hbar, mod)
    # ∏_{i<n} (Y - w^{p^i}) with coefficients in ℤ/p^N[X]/(h̄)
    prod = [[1]]
    conj = w
    for _ in range(n):
        nxt = [[] for _ in range(len(prod) + 1)]
        for j, cj in enumerate(prod):
            nxt[j + 1] = _padd(nxt[j + 1], cj, mod)
            nxt[j] = _padd(nxt[j], [(-c) % mod for c in poly_rem(poly_mul(cj, conj, mod), hbar, mod)], mod)
        prod = nxt
        conj = poly_powmod(conj, p, hbar, mod)
    out = []
    for coeff in prod:
        coeff = _trim(coeff)
        if len(coeff) > 1:
            raise AssertionError("Teichmüller modulus has non-constant coefficients")
        out.append(coeff[0] if coeff else 0)
    return tuple(out)


def _padd(a, b, mod):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x + y) % mod for x, y in zip(a, b)])


# ---------------------------------------------------------------- linear algebra mod p

def rref_mod_p(rows, p):
    """Row-reduce a matrix over F_p; returns (reduced rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] % p:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_mod_p(matrix, p):
    """Basis of {x : matrix @ x = 0} over F_p."""
    ncols = len(matrix[0])
    red, pivots = rref_mod_p(matrix, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def solve_mod_p(matrix, rhs, p):
    """One solution x of matrix @ x = rhs over F_p, or None."""
    aug = [list(r) + [b % p] for r, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    red, pivots = rref_mod_p(aug, p)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    return x


# ---------------------------------------------------------------- quotient rings

class QElem:
    """Element of ℤ/p^N[u]/(h). Immutable; coefficients low degree first."""

    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = tuple(coeffs)

    # construction helpers
    def _make(self, coeffs):
        return self.ring.elem(coeffs)

    def _coerce(self, other):
        if isinstance(other, QElem):
            if other.ring is not self.ring:
                raise ValueError("elements live in different rings")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        mod = self.ring.mod
        return self._make(tuple((a + b) % mod for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.mod
        return self._make(tuple((-a) % mod for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            mod = self.ring.mod
            return self._make(tuple(a * other % mod for a in self.c))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._make(self.ring.mul_coeffs(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, QElem):
            return NotImplemented
        return self.ring.key == other.ring.key and self.c == other.c

    def __hash__(self):
        return hash((self.ring.key, self.c))

    def __repr__(self):
        return f"{type(self).__name__}({list(self.c)} mod {self.ring.p}^{self.ring.N}, n={self.ring.n})"

    def is_zero(self):
        return not any(self.c)

    def is_unit(self):
        return any(a % self.ring.p for a in self.reduce().c)

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("element is not a unit")
        r = self.ring
        return self ** (r.Q ** (r.N - 1) * (r.Q - 1) - 1)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def frobenius(self, k=1):
        """σ^k with σ(u) = u^p and the identity on ℤ/p^N."""
        k %= self.ring.n
        if k == 0:
            return self
        mat = self.ring.frob_matrix(k)
        mod = self.ring.mod
        n = self.ring.n
        out = [0] * n
        for j, a in enumerate(self.c):
            if a:
                col = mat[j]
                for i in range(n):
                    out[i] += a * col[i]
        return self._make(tuple(x % mod for x in out))

    def conjugates(self):
        out = [self]
        for _ in range(self.ring.n - 1):
            out.append(out[-1].frobenius())
        return out

    def reduce(self):
        """Reduction mod p as an FFElem."""
        return finite_field(self.ring.p, self.ring.n)(tuple(a % self.ring.p for a in self.c))

    def code(self):
        """Integer code Σ c_i (p^N)^i, used for deterministic ordering."""
        mod = self.ring.mod
        return sum(a * mod**i for i, a in enumerate(self.c))

    def valuation(self):
        """p-adic valuation (minimum over the unit basis)."""
        return min(vp(a, self.ring.p) for a in self.c) if not self.is_zero() else INF


class FFElem(QElem):
    """Element of F_{p^n} = F_p[u]/(h̄_n)."""

    __slots__ = ()

    def trace(self):
        return sum(a * t for a, t in zip(self.c, self.ring.trace_vector())) % self.ring.p

    def norm(self):
        r = self.ring
        z = self ** ((r.Q - 1) // (r.p - 1))
        return z.c[0]


class UnramElem(QElem):
    """Element of ℤ/p^N[u]/(h_n), an unramified extension ring."""

    __slots__ = ()


class QuotRing:
    """ℤ/p^N[u]/(h_n). Construct through ``finite_field`` or ``unram_ring``."""

    def __init__(self, p, n, N, elem_cls):
        self.p, self.n, self.N = p, n, N
        self.mod = p**N
        self.Q = p**n
        self.modulus = teich_modulus(p, n, N)
        self.key = (p, n, N)
        self._elem_cls = elem_cls
        self._frob = {}
        self._trace = None

    def __repr__(self):
        return f"QuotRing(p={self.p}, n={self.n}, N={self.N})"

    def elem(self, coeffs):
        return self._elem_cls(self, coeffs)

    def __call__(self, x):
        if isinstance(x, int):
            return self.elem((x % self.mod,) + (0,) * (self.n - 1))
        x = list(x)
        if len(x) > self.n:
            x = poly_rem(x, self.modulus, self.mod)
        x = [c % self.mod for c in x] + [0] * (self.n - len(x))
        return self.elem(tuple(x))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        """The class of u (zero when n = 1)."""
        return self([0, 1])

    def mul_coeffs(self, a, b):
        prod = poly_mul(a, b, self.mod)
        if len(prod) > self.n:
            prod = poly_rem(prod, self.modulus, self.mod)
        return tuple(prod) + (0,) * (self.n - len(prod))

    def frob_matrix(self, k):
        """mat[j] = σ^k(u^j) as a coefficient tuple."""
        if k not in self._frob:
            uk = self.gen() ** (self.p**k)
            cols = [self.one()]
            for _ in range(1, self.n):
                cols.append(cols[-1] * uk)
            self._frob[k] = [c.c for c in cols]
        return self._frob[k]

    def trace_vector(self):
        """Tr(u^i) for i < n, from Newton's identities on the modulus."""
        if self._trace is None:
            h = self.modulus
            n, mod = self.n, self.mod
            pw = [n % mod]
            for k in range(1, n):
                s = k * h[n - k]
                for i in range(1, k):
                    s += h[n - i] * pw[k - i]
                pw.append((-s) % mod)
            self._trace = tuple(pw)
        return self._trace

    def trace(self, x):
        return sum(a * t for a, t in zip(x.c, self.trace_vector())) % self.mod

    def elements(self):
        """All elements, in increasing code order (finite fields only)."""
        if self.N != 1:
            raise ValueError("enumeration is only offered for finite fields")
        for code in range(self.Q):
            yield self(digits(code, self.p, self.n))

    def from_code(self, code):
        return self(digits(code, self.mod, self.n))


@lru_cache(maxsize=None)
def finite_field(p, n):
    return QuotRing(p, n, 1, FFElem)


@lru_cache(maxsize=None)
def unram_ring(p, n, N):
    if N < 1:
        raise ValueError("precision N must be at least 1")
    return QuotRing(p, n, N, UnramElem)


def ff_elem(p, n, coeffs):
    return finite_field(p, n)(coeffs)


# ---------------------------------------------------------------- global parameters

class GlobalParams:
    """p, q = p^a, and access to the cached extension fields and rings."""

    def __init__(self, p, a=1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if a < 1:
            raise ValueError("a must be positive")
        self.p, self.a = p, a
        self.q = p**a

    def __repr__(self):
        return f"GlobalParams(p={self.p}, a={self.a})"

    def __eq__(self, other):
        return isinstance(other, GlobalParams) and (self.p, self.a) == (other.p, other.a)

    def __hash__(self):
        return hash((self.p, self.a))

    def defining_poly(self, n):
        return irreducible_poly(self.p, n)

    def field(self, k=1):
        """F_{q^k}."""
        return finite_field(self.p, self.a * k)

    def unram(self, k, N):
        """ℤ_{q^k}/p^N."""
        return unram_ring(self.p, self.a * k, N)

    def base_field(self):
        return self.field(1)


@lru_cache(maxsize=None)
def primitive_element(p, n):
    """Least-code generator of F_{p^n}^×."""
    F = finite_field(p, n)
    order = F.Q - 1
    primes = prime_factors(order)
    for code in range(1, F.Q):
        g = F(digits(code, p, n))
        if all(g ** (order // l) != 1 for l in primes):
            return g
    raise AssertionError("no primitive element")


@lru_cache(maxsize=None)
def subfield_basis(p, d, k):
    """F_p-basis of F_{p^d} inside F_{p^k}: kernel of Frob^d - id."""
    if k % d:
        raise ValueError(f"{d} does not divide {k}")
    F = finite_field(p, k)
    mat = F.frob_matrix(d)
    # column j is Frob^d(u^j); build rows of (M - I)
    rows = [[(mat[j][i] - (1 if i == j else 0)) % p for j in range(k)] for i in range(k)]
    basis = nullspace_mod_p(rows, p)
    if len(basis) != d:
        raise AssertionError("subfield has the wrong dimension")
    return tuple(tuple(b) for b in basis)


@lru_cache(maxsize=None)
def embedding_root(p, d, k):
    """Least-code root of h̄_d in F_{p^k}, the image of u under F_{p^d} → F_{p^k}."""
    F = finite_field(p, k)
    h = irreducible_poly(p, d)
    basis = [F(b) for b in subfield_basis(p, d, k)]
    roots = []
    for code in range(p**d):
        ds = digits(code, p, d)
        z = sum((b * c for b, c in zip(basis, ds)), F.zero())
        val = F.zero()
        for coeff in reversed(h):
            val = val * z + coeff
        if val.is_zero():
            roots.append(z)
    if len(roots) != d:
        raise AssertionError("defining polynomial does not split in the extension")
    return min(roots, key=lambda r: r.code())


@lru_cache(maxsize=None)
def _embedding_image(p, d, k, N):
    root = embedding_root(p, d, k)
    return teichmuller_lift(root, N) if N > 1 else root


def embed(x, k):
    """Image of x ∈ ℤ/p^N[u]/(h_d) in the degree-k ring (d | k)."""
    d = x.ring.n
    if d == k:
        return x
    p, N = x.ring.p, x.ring.N
    target = finite_field(p, k) if N == 1 and isinstance(x, FFElem) else unram_ring(p, k, N)
    if d == 1:
        return target(x.c[0])
    rho = _embedding_image(p, d, k, N)
    if rho.ring is not target:
        rho = target(rho.c)
    out = target.zero()
    for coeff in reversed(x.c):
        out = out * rho + coeff
    return out


# ---------------------------------------------------------------- Teichmüller lifts and traces

def lift(x, N):
    """Naive coefficientwise lift of an FFElem to precision N."""
    return unram_ring(x.ring.p, x.ring.n, N)(x.c)


def teichmuller_lift(x, N):
    """The Teichmüller representative [x] in ℤ/p^N[u]/(h_n)."""
    if N < 1:
        raise ValueError("precision N must be at least 1")
    if isinstance(x, UnramElem):
        x = x.reduce()
    y = lift(x, N)
    if x.is_zero():
        return y
    return y ** (x.ring.Q ** (N - 1))


def trace_to_prime(x):
    """Sum of the n Frobenius conjugates of x, as an integer mod p^N."""
    return x.ring.trace(x)


def teichmuller_digits(c, count=None):
    """Digits c_j ∈ F_{p^n} with c = Σ [c_j] p^j at the precision of c."""
    N = c.ring.N
    count = N if count is None else count
    p = c.ring.p
    out = []
    rest = c
    for j in range(count):
        if j >= N:
            out.append(finite_field(p, c.ring.n).zero())
            continue
        d = rest.reduce()
        out.append(d)
        diff = rest - teichmuller_lift(d, N)
        # diff is divisible by p^(j+1) in the original scale
        rest = diff.ring.elem(tuple((a // p) for a in diff.c))
    return out


# ---------------------------------------------------------------- cyclotomic integers

@lru_cache(maxsize=None)
def cyclotomic_poly(c):
    """Φ_c over ℤ, low degree first."""
    num = [-1] + [0] * (c - 1) + [1]
    for d in range(1, c):
        if c % d == 0:
            num = _exact_div_poly(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div_poly(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for d in range(len(a) - 1, len(b) - 2, -1):
        q, r = divmod(a[d], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[d - len(b) + 1] = q
        for i, bc in enumerate(b):
            a[d - len(b) + 1 + i] -= q * bc
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def pi_minpoly(p, m):
    """Φ_{p^m}(1 + x), monic of degree e = p^{m-1}(p-1)."""
    phi = cyclotomic_poly(p**m)
    out = [0] * len(phi)
    # substitute y = 1 + x
    for i, c in enumerate(phi):
        if c:
            for j in range(i + 1):
                out[j] += c * math.comb(i, j)
    return tuple(out)


def _int_polymulmod(a, b, h):
    """Product of integer polynomials modulo a monic integer polynomial h."""
    n = len(h) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, n - 1, -1):
        top = prod[d]
        if top:
            for i in range(n):
                prod[d - n + i] -= top * h[i]
            prod[d] = 0
    prod = prod[:n] + [0] * max(0, n - len(prod))
    return prod


def bareiss_det(mat):
    """Exact integer determinant."""
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class CycloRing:
    """ℤ[ζ_c][π]/(Φ_{p^m}(1+π)), with ζ_c specialised p-adically for valuations.

    For c ≤ 2 there is a single row (ζ_2 = -1 is an integer). Otherwise rows
    index powers of ζ_c modulo Φ_c. The p-adic embedding sends ζ_c to the
    Teichmüller lift of ``tame_root`` ∈ F_{p^a}, an element of order c.
    """

    def __init__(self, p, m, c=1, tame_root=None):
        if m < 1:
            raise ValueError("level m must be at least 1")
        self.p, self.m, self.c = p, m, c
        self.e = p ** (m - 1) * (p - 1)
        self.minpoly = pi_minpoly(p, m)
        self.rows = 1 if c <= 2 else len(cyclotomic_poly(c)) - 1
        self.tame_root = tame_root
        if self.rows > 1 and tame_root is None:
            raise ValueError("a tame root of unity is required for c > 2")
        self.key = (p, m, c, None if tame_root is None else (tame_root.ring.key, tame_root.c))
        self._char_cache = {}

    def __repr__(self):
        return f"CycloRing(p={self.p}, m={self.m}, c={self.c})"

    def __eq__(self, other):
        return isinstance(other, CycloRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def elem(self, rows):
        return CycloInt(self, rows)

    def __call__(self, x):
        if isinstance(x, int):
            rows = [[0] * self.e for _ in range(self.rows)]
            rows[0][0] = x
            return self.elem(rows)
        x = list(x)
        if x and isinstance(x[0], int):
            x = [x]
        return self.elem(x)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def pi(self):
        rows = [[0] * self.e for _ in range(self.rows)]
        if self.e == 1:
            # Φ_p(1+x) = x + 2 when p = 2 and m = 1: π = -2
            rows[0][0] = -self.minpoly[0]
        else:
            rows[0][1] = 1
        return self.elem(rows)

    def zeta(self):
        """ζ_{p^m} = 1 + π."""
        return self.one() + self.pi()

    def zeta_c(self, j=1):
        j %= max(self.c, 1)
        if self.c <= 2:
            return self(-1 if j else 1)
        poly = [0] * j + [1]
        if j >= self.rows:
            poly = _int_polyrem_monic(poly, cyclotomic_poly(self.c))
        rows = [[0] * self.e for _ in range(self.rows)]
        for r, v in enumerate(poly):
            rows[r][0] = v
        return self.elem(rows)

    def char_value(self, a):
        """(1 + π)^a for a taken mod p^m."""
        a %= self.p**self.m
        if a not in self._char_cache:
            self._char_cache[a] = self.zeta() ** a
        return self._char_cache[a]

    def mul_rows(self, x, y):
        e, R = self.e, self.rows
        # multiply in π for every pair of rows, then reduce the ζ_c degree
        out = [[0] * e for _ in range(2 * R - 1)]
        for i in range(R):
            if not any(x[i]):
                continue
            for j in range(R):
                if not any(y[j]):
                    continue
                prod = _int_polymulmod(x[i], y[j], self.minpoly)
                row = out[i + j]
                for k in range(e):
                    row[k] += prod[k]
        if R > 1:
            phi = cyclotomic_poly(self.c)
            for d in range(2 * R - 2, R - 1, -1):
                top = out[d]
                if any(top):
                    for i in range(R):
                        if phi[i]:
                            out[d - R + i] = [a - phi[i] * t for a, t in zip(out[d - R + i], top)]
        return out[:R]


def _int_polyrem_monic(a, h):
    a = list(a)
    n = len(h) - 1
    for d in range(len(a) - 1, n - 1, -1):
        top = a[d]
        if top:
            for i in range(n + 1):
                a[d - n + i] -= top * h[i]
    return a[:n] + [0] * max(0, n - len(a))


class CycloInt:
    """Exact element of ℤ[ζ_c, ζ_{p^m}] in the π-basis."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        rows = [list(r) + [0] * (ring.e - len(r)) for r in rows]
        rows = rows + [[0] * ring.e for _ in range(ring.rows - len(rows))]
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def coeffs(self):
        """π-basis coefficients of the ζ_c^0 row (all rows for c ≤ 2)."""
        return self.rows[0]

    def _coerce(self, other):
        if isinstance(other, CycloInt):
            if other.ring != self.ring:
                raise ValueError("cyclotomic rings differ")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloInt(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    __radd__ = __add__

    def __neg__(self):
        return CycloInt(self.ring, [[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloInt(self.ring, [[a * other for a in r] for r in self.rows])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloInt(self.ring, self.ring.mul_rows(self.rows, other.rows))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, n):
        """Division by a nonzero integer that must be exact."""
        out = []
        for r in self.rows:
            row = []
            for a in r:
                q, rem = divmod(a, n)
                if rem:
                    raise ArithmeticError(f"{a} is not divisible by {n}")
                row.append(q)
            out.append(row)
        return CycloInt(self.ring, out)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring.key, self.rows))

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def __repr__(self):
        if self.ring.rows == 1:
            return f"CycloInt({list(self.rows[0])}, p={self.ring.p}, m={self.ring.m})"
        return f"CycloInt({[list(r) for r in self.rows]}, p={self.ring.p}, m={self.ring.m}, c={self.ring.c})"

    def to_json(self):
        if self.ring.rows == 1:
            return list(self.rows[0])
        return [list(r) for r in self.rows]

    def valuation(self):
        return cyclo_valuation(self)


def norm_to_q(z):
    """Norm from ℚ(ζ_{p^m}) to ℚ (single-row elements): det of multiplication by z."""
    ring = z.ring
    if ring.rows != 1:
        raise ValueError("norm is only used for single-row elements")
    e = ring.e
    basis = []
    for i in range(e):
        v = [0] * e
        v[i] = 1
        basis.append(_int_polymulmod(list(z.rows[0]), v, ring.minpoly))
    return bareiss_det(basis)


def _pi_adic_valuation(coeffs, p, e):
    best = INF
    for i, b in enumerate(coeffs):
        v = vp(b, p) if not isinstance(b, QElem) else b.valuation()
        if v != INF:
            best = min(best, e * v + i)
    return best


def cyclo_valuation(z):
    """v_π(z) with v_π(π) = 1; INF for zero.

    Single-row elements use v_p of the norm. With an adjoined tame root the
    element is mapped into ℤ_{p^a}[π] through the Teichmüller image of ζ_c.
    """
    if z.is_zero():
        return INF
    ring = z.ring
    if ring.rows == 1:
        return vp(norm_to_q(z), ring.p)
    return _tame_valuation(z)


def pi_adic_valuation(z):
    """Cross-check route: min(e·v_p(b_i) + i) over π-basis coefficients."""
    if z.ring.rows != 1:
        return _tame_valuation(z)
    return _pi_adic_valuation(z.rows[0], z.ring.p, z.ring.e)


def _tame_valuation(z):
    ring = z.ring
    p, e = ring.p, ring.e
    root = ring.tame_root
    K = 4
    while K <= 1024:
        R = unram_ring(p, root.ring.n, K)
        xi = teichmuller_lift(root, K)
        powers = [R.one()]
        for _ in range(1, ring.rows):
            powers.append(powers[-1] * xi)
        coeffs = []
        for i in range(e):
            acc = R.zero()
            for r in range(ring.rows):
                if z.rows[r][i]:
                    acc = acc + powers[r] * z.rows[r][i]
            coeffs.append(acc)
        v = _pi_adic_valuation(coeffs, p, e)
        if v != INF and v < e * K:
            return v
        K *= 2
    raise ArithmeticError("valuation exceeds the working precision")


# ---------------------------------------------------------------- equicharacteristic series

class EqCharSeries:
    """Truncated series over F_p in T, precision T^M."""

    __slots__ = ("p", "M", "c")

    def __init__(self, p, M, coeffs):
        self.p, self.M = p, M
        coeffs = [int(a) % p for a in list(coeffs)[:M]]
        self.c = tuple(coeffs + [0] * (M - len(coeffs)))

    @classmethod
    def one(cls, p, M):
        return cls(p, M, [1])

    @classmethod
    def zero(cls, p, M):
        return cls(p, M, [])

    def _coerce(self, other):
        if isinstance(other, EqCharSeries):
            if (other.p, other.M) != (self.p, self.M):
                raise ValueError("series precisions differ")
            return other
        if isinstance(other, int):
            return EqCharSeries(self.p, self.M, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EqCharSeries(self.p, self.M, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return EqCharSeries(self.p, self.M, [-a for a in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return EqCharSeries(self.p, self.M, [a * other for a in self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        M, p = self.M, self.p
        out = [0] * M
        for i, a in enumerate(self.c):
            if a:
                for j in range(M - i):
                    b = other.c[j]
                    if b:
                        out[i + j] += a * b
        return EqCharSeries(p, M, [x % p for x in out])

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = EqCharSeries.one(self.p, self.M)
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
            other = EqCharSeries(self.p, self.M, [other])
        if not isinstance(other, EqCharSeries):
            return NotImplemented
        return (self.p, self.M, self.c) == (other.p, other.M, other.c)

    def __hash__(self):
        return hash((self.p, self.M, self.c))

    def __repr__(self):
        return f"EqCharSeries({list(self.c)}, p={self.p}, M={self.M})"

    def is_zero(self):
        return not any(self.c)

    def is_unit(self):
        return self.c[0] != 0

    def valuation(self):
        """T-adic order; INF when zero at this precision."""
        for i, a in enumerate(self.c):
            if a:
                return i
        return INF

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("series with zero constant term is not a unit")
        p, M = self.p, self.M
        inv0 = pow(self.c[0], -1, p)
        out = [0] * M
        out[0] = inv0
        for k in range(1, M):
            s = sum(self.c[i] * out[k - i] for i in range(1, k + 1))
            out[k] = (-s * inv0) % p
        return EqCharSeries(p, M, out)

    def to_json(self):
        return list(self.c)


def eqchar_char_value(a, M, p, r):
    """(1+T)^a = ∏ (1 + T^{p^i})^{a_i} mod T^M, for a known mod p^r."""
    if M < 1:
        raise ValueError("T-precision M must be positive")
    if p**r < M:
        raise ValueError(f"{r} p-adic digits do not determine (1+T)^a mod T^{M}")
    a %= p**r
    out = EqCharSeries.one(p, M)
    for i, ai in enumerate(digits(a, p, r)):
        if ai and p**i < M:
            out = out * EqCharSeries(p, M, _binomial_row(ai, p, i, M))
    return out


def _binomial_row(k, p, i, M):
    row = [0] * M
    step = p**i
    for j in range(k + 1):
        if j * step < M:
            row[j * step] = math.comb(k, j) % p
    return row


def product(items, start):
    return reduce(lambda x, y: x * y, items, start)


# ---------------------------------------------------------------- Laurent polynomials

class LaurentPoly:
    """Finite Σ c_k t^k with coefficients in one QuotRing; immutable."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        clean = {}
        for k, v in (terms or {}).items():
            if isinstance(v, int):
                v = ring(v)
            if not v.is_zero():
                clean[k] = v
        self.terms = clean

    @classmethod
    def monomial(cls, ring, coeff, k):
        return cls(ring, {k: coeff})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, QElem)):
            return LaurentPoly(self.ring, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, QElem)):
            return LaurentPoly(self.ring, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                prod = a * b
                out[i + j] = out[i + j] + prod if i + j in out else prod
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = LaurentPoly(self.ring, {0: self.ring.one()})
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((k, v.c) for k, v in self.terms.items())))

    def __repr__(self):
        parts = [f"{list(v.c)}*t^{k}" for k, v in sorted(self.terms.items())]
        return "LaurentPoly(" + (" + ".join(parts) or "0") + ")"

    def is_zero(self):
        return not self.terms

    def sigma(self, k=1):
        """t ↦ t^{p^k}, Frobenius on coefficients."""
        p = self.ring.p
        return LaurentPoly(self.ring, {e * p**k: v.frobenius(k) for e, v in self.terms.items()})

    def map_coeffs(self, fn, ring):
        return LaurentPoly(ring, {k: fn(v) for k, v in self.terms.items()})

    def reduce_precision(self, N):
        ring = unram_ring(self.ring.p, self.ring.n, N) if N > 1 else finite_field(self.ring.p, self.ring.n)
        return self.map_coeffs(lambda v: ring(v.c), ring)

    def evaluate(self, x):
        """Value at x (x and the coefficients must share a ring after embedding)."""
        out = x.ring.zero()
        inv = None
        for k, v in self.terms.items():
            coeff = embed(v, x.ring.n) if v.ring.n != x.ring.n else v
            if coeff.ring is not x.ring:
                coeff = x.ring(coeff.c)
            if k >= 0:
                out = out + coeff * x**k
            else:
                if inv is None:
                    inv = x.inverse()
                out = out + coeff * inv ** (-k)
        return out
