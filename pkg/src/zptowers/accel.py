"""Hot kernels for point enumeration over ℤ/p^N[u]/(h).

Every kernel has two implementations: a numba ``@njit`` version and a pure
numpy version. The numba path is used when numba imports and the environment
variable ``ZPTOWERS_PURE_NUMPY`` is unset (or ``0``). Both paths return
identical int64 arrays; ``benchmarks/bench_kernels.py`` compares them.

Ring elements are rows of length ``n`` (coefficients of 1, u, ..., u^{n-1});
``modulus`` is the monic defining polynomial, low degree first, length n+1.
All entries stay in ``[0, mod)``; callers guarantee ``n * mod**2 < 2**62``.
"""

import os

import numpy as np

PURE_NUMPY = os.environ.get("ZPTOWERS_PURE_NUMPY", "0") not in ("", "0")

try:
    if PURE_NUMPY:
        raise ImportError("numba disabled by ZPTOWERS_PURE_NUMPY")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

_INT64_SAFE = 2**62


def check_modulus_size(n, mod):
    if n * mod * mod >= _INT64_SAFE:
        raise OverflowError(f"modulus {mod} too large for int64 kernels at degree {n}")


# ---------------------------------------------------------------- numpy path

def _mult_matrix_np(elem, modulus, mod):
    """Matrix of multiplication by ``elem``: column j is elem * u^j."""
    n = len(elem)
    out = np.zeros((n, n), dtype=np.int64)
    col = np.array(elem, dtype=np.int64) % mod
    for j in range(n):
        out[:, j] = col
        # col <- col * u
        top = col[n - 1]
        col = np.concatenate(([0], col[:-1]))
        col = (col - top * modulus[:n]) % mod
    return out


def power_table_numpy(gen, modulus, mod, count):
    n = len(gen)
    modulus = np.asarray(modulus, dtype=np.int64)
    table = np.zeros((count, n), dtype=np.int64)
    if count == 0:
        return table
    table[0, 0] = 1 % mod
    filled = 1
    step = _mult_matrix_np(np.asarray(gen, dtype=np.int64), modulus, mod)
    while filled < count:
        take = min(filled, count - filled)
        table[filled:filled + take] = (table[:take] @ step.T) % mod
        filled += take
        if filled < count:
            step = (step @ step) % mod
    return table


def _reduce_rows_np(prod, modulus, mod, n):
    for d in range(prod.shape[1] - 1, n - 1, -1):
        top = prod[:, d].copy()
        if not top.any():
            continue
        prod[:, d - n:d] = (prod[:, d - n:d] - top[:, None] * modulus[None, :n]) % mod
        prod[:, d] = 0
    return prod[:, :n] % mod


def batch_mulmod_numpy(a, b, modulus, mod):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    modulus = np.asarray(modulus, dtype=np.int64)
    rows, n = a.shape
    prod = np.zeros((rows, 2 * n - 1), dtype=np.int64)
    for i in range(n):
        prod[:, i:i + n] = (prod[:, i:i + n] + a[:, i:i + 1] * b) % mod
    return _reduce_rows_np(prod, modulus, mod, n)


def exact_degrees_numpy(exponents, order, q, kmax):
    """Smallest d <= kmax with e*q^d = e (mod order); 0 where none exists."""
    exponents = np.asarray(exponents, dtype=np.int64)
    deg = np.zeros(exponents.shape, dtype=np.int64)
    cur = exponents.copy()
    for d in range(1, kmax + 1):
        cur = (cur * q) % order
        hit = (deg == 0) & (cur == exponents)
        deg[hit] = d
    return deg


def residue_histogram_numpy(values, tame, mod, c):
    values = np.asarray(values, dtype=np.int64)
    tame = np.asarray(tame, dtype=np.int64)
    idx = (tame % c) * mod + (values % mod)
    return np.bincount(idx, minlength=c * mod).reshape(c, mod).astype(np.int64)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _mulmod_row(a, b, modulus, mod, out):
        n = a.shape[0]
        prod = np.zeros(2 * n - 1, dtype=np.int64)
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n):
                prod[i + j] += ai * b[j]
        for d in range(2 * n - 1):
            prod[d] %= mod
        for d in range(2 * n - 2, n - 1, -1):
            top = prod[d]
            if top == 0:
                continue
            for i in range(n):
                prod[d - n + i] = (prod[d - n + i] - top * modulus[i]) % mod
            prod[d] = 0
        for i in range(n):
            out[i] = prod[i] % mod

    @njit(cache=True)
    def _power_table_nb(gen, modulus, mod, count):
        n = gen.shape[0]
        table = np.zeros((count, n), dtype=np.int64)
        if count == 0:
            return table
        table[0, 0] = 1 % mod
        for r in range(1, count):
            _mulmod_row(table[r - 1], gen, modulus, mod, table[r])
        return table

    @njit(cache=True)
    def _batch_mulmod_nb(a, b, modulus, mod):
        rows, n = a.shape
        out = np.zeros((rows, n), dtype=np.int64)
        for r in range(rows):
            _mulmod_row(a[r], b[r], modulus, mod, out[r])
        return out

    @njit(cache=True)
    def _exact_degrees_nb(exponents, order, q, kmax):
        out = np.zeros(exponents.shape[0], dtype=np.int64)
        for i in range(exponents.shape[0]):
            e = exponents[i]
            cur = e
            for d in range(1, kmax + 1):
                cur = (cur * q) % order
                if cur == e:
                    out[i] = d
                    break
        return out

    @njit(cache=True)
    def _residue_histogram_nb(values, tame, mod, c):
        out = np.zeros((c, mod), dtype=np.int64)
        for i in range(values.shape[0]):
            out[tame[i] % c, values[i] % mod] += 1
        return out

    def power_table_numba(gen, modulus, mod, count):
        return _power_table_nb(np.asarray(gen, dtype=np.int64),
                               np.asarray(modulus, dtype=np.int64), mod, count)

    def batch_mulmod_numba(a, b, modulus, mod):
        return _batch_mulmod_nb(np.ascontiguousarray(a, dtype=np.int64),
                                np.ascontiguousarray(b, dtype=np.int64),
                                np.asarray(modulus, dtype=np.int64), mod)

    def exact_degrees_numba(exponents, order, q, kmax):
        return _exact_degrees_nb(np.asarray(exponents, dtype=np.int64), order, q, kmax)

    def residue_histogram_numba(values, tame, mod, c):
        return _residue_histogram_nb(np.asarray(values, dtype=np.int64),
                                     np.asarray(tame, dtype=np.int64), mod, c)


# ---------------------------------------------------------------- dispatch

def power_table(gen, modulus, mod, count):
    """Rows gen^0, gen^1, ..., gen^(count-1) in ℤ/mod[u]/(modulus)."""
    check_modulus_size(len(gen), mod)
    if HAVE_NUMBA:
        return power_table_numba(gen, modulus, mod, count)
    return power_table_numpy(gen, modulus, mod, count)


def batch_mulmod(a, b, modulus, mod):
    """Row-wise products a[r] * b[r]."""
    a = np.asarray(a, dtype=np.int64)
    check_modulus_size(a.shape[1], mod)
    if HAVE_NUMBA:
        return batch_mulmod_numba(a, b, modulus, mod)
    return batch_mulmod_numpy(a, b, modulus, mod)


def batch_mul_fixed(a, matrix, mod):
    """Multiply every row by one fixed element given by its multiplication matrix."""
    a = np.asarray(a, dtype=np.int64)
    return (a @ np.asarray(matrix, dtype=np.int64).T) % mod


def mult_matrix(elem, modulus, mod):
    return _mult_matrix_np(np.asarray(elem, dtype=np.int64),
                           np.asarray(modulus, dtype=np.int64), mod)


def batch_pow(a, exponent, modulus, mod):
    """Row-wise a[r] ** exponent by square-and-multiply."""
    a = np.asarray(a, dtype=np.int64) % mod
    rows, n = a.shape
    result = np.zeros((rows, n), dtype=np.int64)
    result[:, 0] = 1 % mod
    base = a.copy()
    e = exponent
    while e:
        if e & 1:
            result = batch_mulmod(result, base, modulus, mod)
        e >>= 1
        if e:
            base = batch_mulmod(base, base, modulus, mod)
    return result


def exact_degrees(exponents, order, q, kmax):
    if HAVE_NUMBA:
        return exact_degrees_numba(exponents, order, q, kmax)
    return exact_degrees_numpy(exponents, order, q, kmax)


def residue_histogram(values, tame, mod, c=1):
    """counts[j, r] = #{i : tame[i] = j mod c, values[i] = r mod mod}."""
    if HAVE_NUMBA:
        return residue_histogram_numba(values, tame, mod, c)
    return residue_histogram_numpy(values, tame, mod, c)
