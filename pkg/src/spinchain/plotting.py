"""Static SVG line charts from the CSV files this package writes.

Hand-assembled SVG: no plotting dependency, and the output is
byte-deterministic for identical input (fixed palette, fixed float
formatting, no timestamps or generated ids).
"""

from __future__ import annotations

from pathlib import Path

_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#e377c2",
]

_WIDTH, _HEIGHT = 860, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 72, 24, 24, 52


class UnknownColumn(KeyError):
    """Requested column name is not in the CSV header."""


class EmptyData(ValueError):
    """CSV has a header but no data rows."""


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    """Read one of our CSV files: header names plus float rows."""
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise EmptyData(f"{path}: no header")
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(header):
            raise ValueError(f"{path}: row with {len(parts)} fields, header has {len(header)}")
        rows.append([float(x) for x in parts])
    return header, rows


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _fmt(x: float) -> str:
    return format(x, ".4g")


def emit_plot(csv_path, columns, out_path) -> None:
    """Render the named columns of a CSV file as an SVG line chart.

    The first CSV column is the x axis; each requested column becomes one
    polyline. Raises UnknownColumn for a missing name and EmptyData for a
    CSV without rows (no file is written in either case).
    """
    header, rows = read_csv(csv_path)
    if not rows:
        raise EmptyData(f"{csv_path}: no data rows")
    if not columns:
        raise UnknownColumn("no columns requested")
    index = {name: i for i, name in enumerate(header)}
    for name in columns:
        if name not in index:
            raise UnknownColumn(f"column {name!r} not in header {header}")

    xs = [row[0] for row in rows]
    series = {name: [row[index[name]] for row in rows] for name in columns}

    x_lo, x_hi = min(xs), max(xs)
    y_values = [v for vals in series.values() for v in vals if v == v]  # drop NaN
    if not y_values:
        raise EmptyData(f"{csv_path}: requested columns hold no finite values")
    y_lo, y_hi = min(y_values), max(y_values)
    if y_hi == y_lo:
        pad = abs(y_hi) * 0.1 or 1.0
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">')
    parts.append(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>')

    for xv in _ticks(x_lo, x_hi):
        gx = px(xv)
        parts.append(
            f'<line x1="{gx:.2f}" y1="{_MARGIN_T + plot_h}" x2="{gx:.2f}" '
            f'y2="{_MARGIN_T + plot_h + 6}" stroke="#333333" stroke-width="1"/>')
        parts.append(
            f'<text x="{gx:.2f}" y="{_MARGIN_T + plot_h + 20}" font-family="sans-serif" '
            f'font-size="12" fill="#333333" text-anchor="middle">{_fmt(xv)}</text>')
    for yv in _ticks(y_lo, y_hi):
        gy = py(yv)
        parts.append(
            f'<line x1="{_MARGIN_L - 6}" y1="{gy:.2f}" x2="{_MARGIN_L}" y2="{gy:.2f}" '
            f'stroke="#333333" stroke-width="1"/>')
        parts.append(
            f'<text x="{_MARGIN_L - 10}" y="{gy + 4:.2f}" font-family="sans-serif" '
            f'font-size="12" fill="#333333" text-anchor="end">{_fmt(yv)}</text>')
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.2f}" y="{_HEIGHT - 12}" font-family="sans-serif" '
        f'font-size="13" fill="#333333" text-anchor="middle">{header[0]}</text>')

    for k, name in enumerate(columns):
        color = _PALETTE[k % len(_PALETTE)]
        points = " ".join(
            f"{px(x):.2f},{py(y):.2f}"
            for x, y in zip(xs, series[name])
            if y == y and abs(y) != float("inf"))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MARGIN_T + 16 + 18 * k
        lx = _MARGIN_L + plot_w - 150
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>')
        parts.append(
            f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" font-size="12" '
            f'fill="#333333">{name}</text>')

    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n", encoding="ascii")
