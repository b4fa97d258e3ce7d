"""Seeded random towers for property tests and the ``corpus`` command."""

import random

from .arith import GlobalParams
from .tower import INFINITY, TowerSpec, asw_reduce


def random_coeff(rng, R, zero_ok=True):
    """Random element of ℤ_q/p^N, biased towards varied p-adic valuations."""
    p, n, N = R.p, R.n, R.N
    v = rng.randrange(N) if rng.random() < 0.5 else 0
    coeffs = [rng.randrange(p ** (N - v)) * p**v for _ in range(n)]
    if v < N and all(c % p ** (v + 1) == 0 for c in coeffs):
        coeffs[0] += p**v
    c = R(coeffs)
    if not zero_ok and c.is_zero():
        c = R.one()
    return c


def random_spec(rng, p, a=1, points=None, max_pole=5, precision=3, constant=True):
    """Polar data at the given points (default: ∞, optionally 0) with random coefficients."""
    params = GlobalParams(p, a)
    R = params.unram(1, precision)
    if points is None:
        points = [INFINITY] if rng.random() < 0.5 else [params.field(1).zero(), INFINITY]
    local = {}
    for P in points:
        ks = rng.sample(range(1, max_pole + 1), rng.randint(1, min(3, max_pole)))
        data = {}
        for k in ks:
            data[k] = random_coeff(rng, R)
        top = max(ks)
        if data[top].valuation() > 0:
            data[top] = data[top] + 1
        local[P] = data
    const = random_coeff(rng, R) if constant and rng.random() < 0.5 else None
    return TowerSpec(params, tuple(points), local, precision, const)


def random_reduced_form(rng, p, a=1, **kw):
    return asw_reduce(random_spec(rng, p, a, **kw))


def tower_corpus(seed, count, fields=((2, 1), (3, 1), (2, 2), (3, 2)), max_pole=4, precision=4):
    """``count`` reduced towers with S ⊆ {0, ∞}, cycling through the given (p, a)."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        p, a = fields[i % len(fields)]
        out.append(random_reduced_form(rng, p, a, max_pole=max_pole, precision=precision))
    return out
