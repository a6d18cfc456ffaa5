"""Minimal native SVG charts.

Every chart is drawn from a table that the report also writes to CSV, so
the plots never carry numbers of their own. Data values appear in <title>
tooltips exactly as they are written in those tables.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666")
STANCE_COLORS = {"side_a": "#2166ac", "side_b": "#b2182b", "unknown": "#777777"}
# viridis-like stops for values in [0, 1]
_RAMP = ((0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)), (0.75, (94, 201, 98)), (1.0, (253, 231, 37)))


def ramp(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_RAMP, _RAMP[1:]):
        if t <= t1:
            f = (t - t0) / (t1 - t0)
            rgb = [round(a + f * (b - a)) for a, b in zip(c0, c1)]
            return "#%02x%02x%02x" % tuple(rgb)
    return "#fde725"


def _f(x: float) -> str:
    return f"{x:.2f}"


class Canvas:
    def __init__(self, width: int, height: int, title: str):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
        ]

    def add(self, s: str) -> None:
        self.parts.append(s)

    def text(self, x, y, s, anchor="middle", size=11, rotate=None):
        tr = f' transform="rotate({rotate} {_f(x)} {_f(y)})"' if rotate is not None else ""
        self.add(f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" font-size="{size}"{tr}>{escape(str(s))}</text>')

    def rect(self, x, y, w, h, fill, tip=None, stroke=None):
        st = f' stroke="{stroke}"' if stroke else ""
        body = f"<title>{escape(tip)}</title>" if tip else ""
        self.add(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(max(w, 0))}" height="{_f(max(h, 0))}" fill="{fill}"{st}>{body}</rect>')

    def line(self, x1, y1, x2, y2, stroke="#000", width=1.0):
        self.add(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, pts, stroke, width=1.5, tip=None):
        body = f"<title>{escape(tip)}</title>" if tip else ""
        pts_s = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.add(f'<polyline points="{pts_s}" fill="none" stroke="{stroke}" stroke-width="{width}">{body}</polyline>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>", ""])


class Axis:
    """Linear map from data interval to pixel interval."""

    def __init__(self, lo: float, hi: float, p0: float, p1: float):
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi, self.p0, self.p1 = lo, hi, p0, p1

    def __call__(self, v: float) -> float:
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)


def _decade_ticks(c: Canvas, ax: Axis, y: float, vertical=False, x: float = 0.0):
    for k in range(math.ceil(ax.lo), math.floor(ax.hi) + 1):
        pos = ax(k)
        if vertical:
            c.line(x - 4, pos, x, pos)
            c.text(x - 6, pos + 4, f"1e{k}", anchor="end", size=9)
        else:
            c.line(pos, y, pos, y + 4)
            c.text(pos, y + 15, f"1e{k}", size=9)


def step_histograms(title: str, series: Sequence[tuple[str, Sequence[float], Sequence[int]]], xlabel: str = "p-score") -> str:
    """Overlaid log-x step histograms, one line per (label, edges, counts)."""
    W, H, L, R, T, B = 720, 420, 60, 150, 40, 50
    c = Canvas(W, H, title)
    lo = min(math.log10(s[1][0]) for s in series)
    hi = max(math.log10(s[1][-1]) for s in series)
    ymax = max(max(s[2]) for s in series) or 1
    ax = Axis(lo, hi, L, W - R)
    ay = Axis(0, ymax, H - B, T)
    c.line(L, H - B, W - R, H - B)
    c.line(L, H - B, L, T)
    _decade_ticks(c, ax, H - B)
    c.text((L + W - R) / 2, H - 12, xlabel)
    c.text(14, (T + H - B) / 2, "posts", rotate=-90)
    c.text(L - 6, T + 4, str(int(ymax)), anchor="end", size=9)
    for i, (label, edges, counts) in enumerate(series):
        col = PALETTE[i % len(PALETTE)]
        pts = []
        for j, n in enumerate(counts):
            x0, x1 = ax(math.log10(edges[j])), ax(math.log10(edges[j + 1]))
            pts += [(x0, ay(n)), (x1, ay(n))]
        c.polyline(pts, col, tip=label)
        c.rect(W - R + 12, T + 16 * i, 10, 10, col)
        c.text(W - R + 26, T + 16 * i + 9, label, anchor="start")
    return c.render()


def gini_panels(title: str, panels: Sequence[tuple[str, Sequence[float], Sequence[int], Sequence[float | None]]]) -> str:
    """One bar histogram per panel, bars coloured by their author Gini."""
    W, L, R, PH, T = 720, 60, 90, 110, 40
    H = T + PH * len(panels) + 40
    c = Canvas(W, H, title)
    lo = min(math.log10(p[1][0]) for p in panels)
    hi = max(math.log10(p[1][-1]) for p in panels)
    ax = Axis(lo, hi, L, W - R)
    for i, (label, edges, counts, ginis) in enumerate(panels):
        top = T + i * PH
        ymax = max(counts) or 1
        ay = Axis(0, ymax, top + PH - 20, top + 8)
        c.line(L, top + PH - 20, W - R, top + PH - 20)
        c.text(L - 6, top + 18, label, anchor="end", size=9)
        for j, n in enumerate(counts):
            if n == 0:
                continue
            g = ginis[j]
            x0, x1 = ax(math.log10(edges[j])), ax(math.log10(edges[j + 1]))
            col = ramp(g if g is not None else 0.0)
            c.rect(x0, ay(n), x1 - x0, ay(0) - ay(n), col, tip=f"{label}: count={n} gini={g!r}")
    _decade_ticks(c, ax, T + PH * len(panels) - 20)
    # colour bar
    for k in range(20):
        c.rect(W - R + 30, T + 8 * (19 - k), 14, 8, ramp((k + 0.5) / 20))
    c.text(W - R + 50, T + 8, "1", anchor="start", size=9)
    c.text(W - R + 50, T + 160, "0", anchor="start", size=9)
    c.text(W - R + 37, T + 176, "Gini", size=9)
    return c.render()


def tier_boxes(title: str, rows: Sequence[dict], tiers: Sequence[str]) -> str:
    """Per-influencer interquartile boxes of p-score, grouped by follower tier."""
    W, H, L, R, T, B = 820, 420, 60, 20, 40, 50
    c = Canvas(W, H, title)
    vals = [r[k] for r in rows for k in ("q1_pscore", "q3_pscore") if r[k] > 0]
    lo = math.floor(math.log10(min(vals))) if vals else -3
    hi = math.ceil(math.log10(max(vals))) if vals else 0
    ay = Axis(lo, hi, H - B, T)
    c.line(L, H - B, W - R, H - B)
    c.line(L, H - B, L, T)
    _decade_ticks(c, ay, 0, vertical=True, x=L)
    slot = (W - L - R) / max(len(tiers), 1)
    for ti, tier in enumerate(tiers):
        members = sorted((r for r in rows if r["tier"] == tier), key=lambda r: (r["stance"], r["median_pscore"], r["account_id"]))
        x0 = L + ti * slot
        c.text(x0 + slot / 2, H - B + 18, tier)
        if not members:
            continue
        w = (slot - 10) / len(members)
        for k, r in enumerate(members):
            if r["q1_pscore"] <= 0 or r["q3_pscore"] <= 0:
                continue
            x = x0 + 5 + k * w
            col = STANCE_COLORS.get(r["stance"], "#777777")
            y1, y3 = ay(math.log10(r["q3_pscore"])), ay(math.log10(r["q1_pscore"]))
            tip = f"{r['account_id']} ({r['stance']}): median={r['median_pscore']!r}"
            c.rect(x, y1, max(w - 1, 0.5), y3 - y1, col, tip=tip)
            if r["median_pscore"] > 0:
                ym = ay(math.log10(r["median_pscore"]))
                c.line(x, ym, x + max(w - 1, 0.5), ym, stroke="#000", width=1)
    c.text(14, (T + H - B) / 2, "p-score (IQR per influencer)", rotate=-90)
    return c.render()


def density_panels(title: str, panels: Sequence[dict], xlabel: str, ylabel: str) -> str:
    """Side-by-side 2-D count grids.

    Each panel is ``{"label", "x_edges", "y_edges", "counts"}`` with counts
    indexed [x][y] and edges in log10 units.
    """
    n = max(len(panels), 1)
    PW, PH, L, T, B = 260, 260, 50, 40, 50
    W = L + n * (PW + 30)
    H = T + PH + B
    c = Canvas(W, H, title)
    for i, p in enumerate(panels):
        x0 = L + i * (PW + 30)
        xe, ye, cnt = p["x_edges"], p["y_edges"], p["counts"]
        ax = Axis(xe[0], xe[-1], x0, x0 + PW)
        ay = Axis(ye[0], ye[-1], T + PH, T)
        cmax = max((v for col in cnt for v in col), default=0) or 1
        for a in range(len(xe) - 1):
            for b in range(len(ye) - 1):
                v = cnt[a][b]
                if v == 0:
                    continue
                t = math.log1p(v) / math.log1p(cmax)
                c.rect(ax(xe[a]), ay(ye[b + 1]), ax(xe[a + 1]) - ax(xe[a]), ay(ye[b]) - ay(ye[b + 1]), ramp(t), tip=f"count={v}")
        c.rect(x0, T, PW, PH, "none", stroke="#000")
        _decade_ticks(c, ax, T + PH)
        _decade_ticks(c, ay, 0, vertical=True, x=x0)
        c.text(x0 + PW / 2, T - 6, p["label"], size=10)
        c.text(x0 + PW / 2, H - 14, xlabel, size=10)
    c.text(12, T + PH / 2, ylabel, rotate=-90, size=10)
    return c.render()


def grid_counts(x, y, bins: int = 30) -> tuple[list[float], list[float], list[list[int]]]:
    """Counts of (log10 x, log10 y) on a regular grid; non-positive pairs are dropped."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = (x > 0) & (y > 0)
    lx, ly = np.log10(x[keep]), np.log10(y[keep])
    if lx.size == 0:
        return [0.0, 1.0], [0.0, 1.0], [[0]]

    def edges(v):
        lo, hi = math.floor(v.min() * 4) / 4, math.ceil(v.max() * 4) / 4
        if hi <= lo:
            hi = lo + 0.25
        return np.linspace(lo, hi, bins + 1)

    xe, ye = edges(lx), edges(ly)
    h, _, _ = np.histogram2d(lx, ly, bins=[xe, ye])
    return xe.tolist(), ye.tolist(), h.astype(np.int64).tolist()
