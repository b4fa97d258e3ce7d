"""ASCII and SVG renderings of Newton/Hodge polygons, and CSV slope tables."""

import csv
import io
from fractions import Fraction


def _series(poly, xmax):
    return [(float(x), float(y)) for x, y in poly.vertices if x <= xmax]


def ascii_plot(np_, hp, intervals=(), width=64, height=20):
    """NP drawn with '*', HP with '.', agreement stretches with '#'."""
    xmax = min(np_.length, hp.length) if not np_.is_empty() and not hp.is_empty() else max(np_.length, hp.length)
    xmax = max(xmax, Fraction(1))
    ymax = max(np_.value_at(min(xmax, np_.length)), hp.value_at(min(xmax, hp.length)), Fraction(1))
    grid = [[" "] * (width + 1) for _ in range(height + 1)]

    def draw(poly, mark):
        end = min(xmax, poly.length)
        for col in range(width + 1):
            x = xmax * Fraction(col, width)
            if x > end:
                break
            y = poly.value_at(x)
            row = height - int(round(float(y / ymax) * height))
            if mark == "*" and any(lo <= x <= hi for lo, hi in intervals):
                mark_here = "#"
            else:
                mark_here = mark
            if grid[row][col] in (" ", "."):
                grid[row][col] = mark_here

    draw(hp, ".")
    draw(np_, "*")
    lines = [f"{float(ymax):>8.3f} |" + "".join(grid[0])]
    for r in range(1, height + 1):
        label = f"{0.0:>8.3f} |" if r == height else " " * 9 + "|"
        lines.append(label + "".join(grid[r]))
    lines.append(" " * 9 + "+" + "-" * (width + 1))
    lines.append(" " * 10 + "0" + " " * (width - len(str(xmax))) + str(xmax))
    lines.append("legend: * NP   . HP   # NP on an agreement interval")
    return "\n".join(lines)


def svg_plot(np_, hp, intervals=(), width=480, height=320, pad=32):
    """Overlay of NP (solid) and HP (dashed) with agreement intervals shaded."""
    xmax = float(max(np_.length, hp.length, 1))
    ends = [p.value_at(p.length) for p in (np_, hp) if not p.is_empty()]
    ymax = float(max(ends + [Fraction(1)]))

    def sx(x):
        return pad + (width - 2 * pad) * float(x) / xmax

    def sy(y):
        return height - pad - (height - 2 * pad) * float(y) / ymax

    def path(poly):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in poly.vertices)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    for lo, hi in intervals:
        out.append(f'<rect x="{sx(lo):.2f}" y="{pad}" width="{max(sx(hi) - sx(lo), 1.0):.2f}" '
                   f'height="{height - 2 * pad}" fill="#dde8ff"/>')
    out.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
    out.append(f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>')
    out.append(f'<polyline points="{path(hp)}" fill="none" stroke="#888" stroke-dasharray="4 3"/>')
    out.append(f'<polyline points="{path(np_)}" fill="none" stroke="#c00" stroke-width="2"/>')
    out.append(f'<text x="{pad}" y="{pad - 8}" font-size="12">NP (red) over HP (grey, dashed)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def slope_csv(np_, hp):
    """One row per slope index: index, NP slope, HP slope (exact rationals)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "np_slope", "hp_slope"])
    a, b = np_.slopes(), hp.slopes()
    for i in range(max(len(a), len(b))):
        writer.writerow([i + 1, str(a[i]) if i < len(a) else "", str(b[i]) if i < len(b) else ""])
    return buf.getvalue()
