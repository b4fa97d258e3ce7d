"""Exact convex polygons: Newton hulls, slope progressions, comparisons.

Polygons start at (0, 0) and are stored by their vertices with ``Fraction``
coordinates. Collinear interior points are dropped, so two polygons with the
same graph compare equal.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import INF


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _canonical(vertices):
    """Remove collinear interior vertices."""
    out = []
    for v in vertices:
        while len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (v[0] - x1) == (v[1] - y1) * (x1 - x0):
                out.pop()
            else:
                break
        out.append(v)
    return tuple(out)


class Polygon:
    """Finite convex polygon given by its vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        verts = [(_frac(x), _frac(y)) for x, y in vertices]
        if not verts:
            verts = [(Fraction(0), Fraction(0))]
        for (x0, _), (x1, _) in zip(verts, verts[1:]):
            if x1 <= x0:
                raise ValueError("vertex x-coordinates must increase")
        slopes = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(verts, verts[1:])]
        if any(b < a for a, b in zip(slopes, slopes[1:])):
            raise ValueError("slopes must be non-decreasing")
        self.vertices = _canonical(verts)

    @classmethod
    def from_slopes(cls, slopes):
        slopes = sorted(_frac(s) for s in slopes)
        verts = [(Fraction(0), Fraction(0))]
        y = Fraction(0)
        for i, s in enumerate(slopes):
            y += s
            verts.append((Fraction(i + 1), y))
        return cls(verts)

    def __eq__(self, other):
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Polygon(slopes={[str(s) for s in self.slopes()]})"

    @property
    def length(self):
        return self.vertices[-1][0] - self.vertices[0][0]

    def is_empty(self):
        return len(self.vertices) == 1

    def slopes(self):
        """Slope multiset, one entry per unit of horizontal length."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            width = x1 - x0
            if width.denominator != 1:
                raise ValueError("slope multiset needs integral vertex abscissae")
            out.extend([(y1 - y0) / width] * int(width))
        return out

    def value_at(self, x):
        x = _frac(x)
        verts = self.vertices
        if x < verts[0][0] or x > verts[-1][0]:
            raise ValueError(f"{x} lies outside the polygon")
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return verts[0][1]

    def breakpoints(self):
        return [v[0] for v in self.vertices]

    def truncate_below(self, r):
        return truncate_below(self, r)

    def to_json(self):
        return [[str(x), str(y)] for x, y in self.vertices]


@dataclass(frozen=True)
class ProgressionPolygon:
    """Infinite polygon: ``zeros`` zero slopes plus progressions start + k·step (k ≥ 0)."""

    zeros: int
    progressions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.zeros < 0:
            raise ValueError("negative zero-slope count")
        for start, step in self.progressions:
            if step <= 0:
                raise ValueError("progression steps must be positive")

    def slopes_below(self, r):
        r = _frac(r)
        out = [Fraction(0)] * self.zeros if r > 0 else []
        for start, step in self.progressions:
            s = _frac(start)
            while s < r:
                out.append(s)
                s += step
        return sorted(out)

    def first(self, n):
        """Polygon of the n smallest slopes."""
        out = [Fraction(0)] * min(self.zeros, n)
        heads = [(_frac(s), _frac(d)) for s, d in self.progressions]
        while len(out) < n:
            if not heads:
                raise ValueError("polygon has fewer slopes than requested")
            i = min(range(len(heads)), key=lambda j: heads[j][0])
            out.append(heads[i][0])
            heads[i] = (heads[i][0] + heads[i][1], heads[i][1])
        return Polygon.from_slopes(sorted(out)[:n])

    def truncate_below(self, r):
        return Polygon.from_slopes(self.slopes_below(r))

    def union(self, other):
        """Slope-multiset union."""
        return ProgressionPolygon(self.zeros + other.zeros, self.progressions + other.progressions)

    def to_json(self):
        return {"zeros": self.zeros, "progressions": [[str(a), str(b)] for a, b in self.progressions]}


def truncate_below(poly, r):
    """Keep exactly the slopes < r."""
    r = _frac(r)
    if r <= 0:
        raise ValueError("truncation bound must be positive")
    if isinstance(poly, ProgressionPolygon):
        return poly.truncate_below(r)
    return Polygon.from_slopes([s for s in poly.slopes() if s < r])


def slope_union(*polys):
    slopes = []
    for poly in polys:
        slopes.extend(poly.slopes())
    return Polygon.from_slopes(slopes)


# ---------------------------------------------------------------- hulls

def lower_hull(points):
    """Lower convex hull of (x, y) points with distinct x; INF ordinates are skipped."""
    pts = sorted((_frac(x), _frac(y)) for x, y in points if y != INF)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # pop when the middle point is on or above the chord
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return Polygon(hull)


def reference_hull_values(points):
    """Quadratic reference: hull value at every point abscissa, by all chords."""
    pts = [(_frac(x), _frac(y)) for x, y in points if y != INF]
    out = {}
    for x, _ in pts:
        best = min(y for xx, y in pts if xx == x)
        for xa, ya in pts:
            for xb, yb in pts:
                if xa < x < xb:
                    best = min(best, ya + (yb - ya) * (x - xa) / (xb - xa))
        out[x] = best
    return out


class PrecisionError(ArithmeticError):
    """A coefficient vanished at working precision where the hull needs it."""


def newton_polygon(ls):
    """Normalized Newton polygon of an LSeries: hull of (j, v(a_j)/a)."""
    a = ls.a
    vals = ls.valuations()
    if ls.kind == "finite":
        upto = ls.degree
        if upto < len(vals) and vals[upto] == INF:
            raise PrecisionError(f"coefficient of s^{upto} vanishes although the degree is {upto}")
        pts = [(j, Fraction(v) / a) for j, v in enumerate(vals[: upto + 1]) if v != INF]
        return lower_hull(pts)
    # truncated series: missing coefficients are only known to have valuation ≥ M
    pts = [(j, Fraction(v) / a) for j, v in enumerate(vals) if v != INF]
    hull = lower_hull(pts)
    cap = Fraction(ls.M, a)
    last = hull.vertices[-1][0]
    for j, v in enumerate(vals):
        if v == INF and j < last and hull.value_at(j) >= cap:
            raise PrecisionError(f"coefficient of s^{j} is below T-precision {ls.M}")
    return hull


# ---------------------------------------------------------------- comparisons

def _common_breaks(a, b):
    end = min(a.vertices[-1][0], b.vertices[-1][0])
    xs = sorted({x for x in a.breakpoints() + b.breakpoints() if x <= end} | {end})
    return xs


def dominates(np_, hp):
    """True iff np_ ≥ hp pointwise on the common x-range."""
    return all(np_.value_at(x) >= hp.value_at(x) for x in _common_breaks(np_, hp))


def agreement_intervals(a, b):
    """Maximal closed intervals (lo, hi) of the common range where a = b."""
    xs = _common_breaks(a, b)
    diffs = [a.value_at(x) - b.value_at(x) for x in xs]
    pieces = []
    for i, x in enumerate(xs):
        if diffs[i] == 0:
            pieces.append((x, x))
        if i + 1 < len(xs):
            d0, d1 = diffs[i], diffs[i + 1]
            if d0 == 0 and d1 == 0:
                pieces.append((x, xs[i + 1]))
            elif d0 * d1 < 0:
                root = x + (xs[i + 1] - x) * d0 / (d0 - d1)
                pieces.append((root, root))
    pieces.sort()
    merged = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def contains_interval(intervals, lo, hi):
    return any(a <= lo and hi <= b for a, b in intervals)


def shared_vertices(a, b):
    bv = dict(b.vertices)
    return [x for x, y in a.vertices if x in bv and bv[x] == y]


# ---------------------------------------------------------------- distribution of slopes

def uniformity_discrepancy(poly, e):
    """Star discrepancy of {slope / e} against the uniform law on [0, 1]."""
    xs = sorted(s / _frac(e) for s in poly.slopes())
    n = len(xs)
    if n == 0:
        raise ValueError("empty polygon has no discrepancy")
    best = Fraction(0)
    for i, x in enumerate(xs, start=1):
        best = max(best, Fraction(i, n) - x, x - Fraction(i - 1, n))
    return best


@dataclass
class StabilityVerdict:
    positive: bool
    alphas: list
    K: list
    witness: object = None
    detail: str = ""

    def to_json(self):
        return {
            "positive": self.positive,
            "alphas": [str(a) for a in self.alphas],
            "K_size": len(self.K),
            "witness": None if self.witness is None else str(self.witness),
            "detail": self.detail,
        }


def split_progressions(slopes, P):
    """Split normalized slopes into blocks {(α + j)/P : 0 ≤ j < P} inside (0, 1).

    For α = 0 the block is {1/P, ..., (P-1)/P}. Slopes that fit no full block
    (including 0 and 1) are returned as the leftover set K.
    """
    pool = Counter(slopes)
    alphas, K = [], []
    for x in sorted(slopes):
        if pool[x] == 0:
            continue
        if x <= 0 or x >= 1:
            pool[x] -= 1
            K.append(x)
            continue
        alpha = x * P - (x * P).numerator // (x * P).denominator
        block = [(alpha + j) / P for j in range(P)]
        if alpha == 0:
            block = block[1:]
        need = Counter(block)
        if all(pool[b] >= c for b, c in need.items()):
            for b, c in need.items():
                pool[b] -= c
            alphas.append(alpha)
        else:
            pool[x] -= 1
            K.append(x)
    return sorted(alphas), sorted(K)


def stability_pattern(polys, g, k, p, levels):
    """Fit the periodic slope pattern across levels n > k.

    ``polys`` are Newton polygons in v_π/a units at the given levels; slopes
    are normalized by e_n = p^{n-1}(p-1).
    """
    if len(polys) < 2:
        raise ValueError("insufficient data: need at least two levels")
    if any(n <= k for n in levels):
        raise ValueError("every level must exceed k")
    fits = []
    for poly, n in zip(polys, levels):
        e = p ** (n - 1) * (p - 1)
        slopes = [s / e for s in poly.slopes()]
        fits.append(split_progressions(slopes, p ** (n - k)))
    alphas0, K0 = fits[0]
    for (alphas, K), n in zip(fits[1:], levels[1:]):
        if Counter(alphas) != Counter(alphas0):
            missing = (Counter(alphas0) - Counter(alphas)) or (Counter(alphas) - Counter(alphas0))
            return StabilityVerdict(False, alphas0, K0, next(iter(missing)),
                                    f"offsets differ at level {n}")
        if len(K) != len(K0):
            extra = K[0] if K else (K0[0] if K0 else None)
            return StabilityVerdict(False, alphas0, K0, extra, f"leftover count differs at level {n}")
    return StabilityVerdict(True, alphas0, K0, None, f"|K| = {len(K0)}, 2g = {2 * g}")
