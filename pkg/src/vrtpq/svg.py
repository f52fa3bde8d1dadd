"""Self-contained SVG figures for the circle diagram and the S-vs-|Vs| curve.

Fixed 800x800 canvas, inline styles only. Coordinates are written with two
decimals so that files are byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import CircleLocus, SCurvePoint

SIZE = 800
MARGIN = 70

_PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22")


@dataclass(frozen=True)
class Frame:
    """Affine map from data coordinates to canvas pixels (y grows downwards)."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def px(self, x) -> np.ndarray:
        return MARGIN + (np.asarray(x, dtype=float) - self.x_lo) / (self.x_hi - self.x_lo) * (SIZE - 2 * MARGIN)

    def py(self, y) -> np.ndarray:
        return SIZE - MARGIN - (np.asarray(y, dtype=float) - self.y_lo) / (self.y_hi - self.y_lo) * (SIZE - 2 * MARGIN)


def _c(v: float) -> str:
    text = f"{v:.2f}"
    return "0.00" if text == "-0.00" else text


def path_data(frame: Frame, xs, ys) -> str:
    px, py = frame.px(xs), frame.py(ys)
    parts = [f"M{_c(px[0])},{_c(py[0])}"]
    parts.extend(f"L{_c(a)},{_c(b)}" for a, b in zip(px[1:].tolist(), py[1:].tolist()))
    return " ".join(parts)


def _nice_ticks(lo: float, hi: float, target: int = 8) -> list[float]:
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = first
    while v <= hi + 1e-9:
        ticks.append(round(v, 10))
        v += step
    return ticks


def _axes(frame: Frame, x_label: str, y_label: str) -> list[str]:
    out = ['<g class="axes" stroke="#444" stroke-width="1" fill="none">']
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" height="{SIZE - 2 * MARGIN}"/>')
    if frame.y_lo < 0 < frame.y_hi:
        y0 = _c(float(frame.py(0.0)))
        out.append(f'<line x1="{MARGIN}" y1="{y0}" x2="{SIZE - MARGIN}" y2="{y0}" stroke="#999"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-family="sans-serif" font-size="11" fill="#333">')
    for v in _nice_ticks(frame.x_lo, frame.x_hi):
        x = _c(float(frame.px(v)))
        out.append(f'<text x="{x}" y="{SIZE - MARGIN + 16}" text-anchor="middle">{v:g}</text>')
    for v in _nice_ticks(frame.y_lo, frame.y_hi):
        y = _c(float(frame.py(v)))
        out.append(f'<text x="{MARGIN - 6}" y="{y}" text-anchor="end" dominant-baseline="middle">{v:g}</text>')
    out.append("</g>")
    out.append(
        f'<text x="{SIZE / 2:g}" y="{SIZE - 20}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{x_label}</text>'
    )
    out.append(
        f'<text x="20" y="{SIZE / 2:g}" text-anchor="middle" font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {SIZE / 2:g})">{y_label}</text>'
    )
    return out


def _document(body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">'
    )
    return "\n".join([head, f"<title>{title}</title>",
                      f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>', *body, "</svg>"]) + "\n"


def circles_svg(family: Sequence[CircleLocus], s_circle: CircleLocus, p_load: float,
                center_q: float) -> str:
    """Power-circle arcs, S_max circle, δ = 90° line and the load line."""
    p_hi = max([float(l.p.max()) for l in family] + [float(s_circle.p.max()), p_load])
    q_hi = max([float(l.q.max()) for l in family] + [float(s_circle.q.max())])
    q_lo = min([float(l.q.min()) for l in family] + [float(s_circle.q.min()), center_q])
    pad_p = 0.05 * p_hi
    pad_q = 0.05 * (q_hi - q_lo)
    frame = Frame(0.0, p_hi + pad_p, q_lo - pad_q, q_hi + pad_q)

    body = _axes(frame, "P (pu)", "Q (pu)")
    body.append('<g class="power-circles" fill="none" stroke-width="1.5">')
    for i, locus in enumerate(family):
        color = _PALETTE[i % len(_PALETTE)]
        body.append(f'<path data-vs="{locus.vs:g}" stroke="{color}" d="{path_data(frame, locus.p, locus.q)}"/>')
    body.append("</g>")

    body.append(
        f'<path class="s-max" fill="none" stroke="#d62728" stroke-width="2" '
        f'd="{path_data(frame, s_circle.p, s_circle.q)}"/>'
    )
    # every δ = 90° end point sits at Q = -V_L²/X
    ends_p = np.array([0.0] + [float(l.p[-1]) for l in family])
    ends_q = np.full(ends_p.shape, center_q)
    body.append(
        f'<path class="delta-90" fill="none" stroke="#555" stroke-dasharray="6 4" '
        f'd="{path_data(frame, [ends_p.min(), ends_p.max()], ends_q[:2])}"/>'
    )
    body.append(
        f'<path class="load-line" fill="none" stroke="#ff7f0e" stroke-width="1.5" stroke-dasharray="3 3" '
        f'd="{path_data(frame, [p_load, p_load], [frame.y_lo, frame.y_hi])}"/>'
    )
    for locus in family:
        x, y = float(frame.px(locus.p[-1])), float(frame.py(locus.q[-1]))
        body.append(
            f'<text x="{_c(x + 4)}" y="{_c(y - 4)}" font-family="sans-serif" font-size="10" '
            f'fill="#333">{locus.vs:g}</text>'
        )
    return _document(body, "Load-side power circles at constant load voltage")


def scurve_svg(points: Sequence[SCurvePoint], vs_theory: float, vs_range: tuple[float, float]) -> str:
    vs = np.array([pt.vs for pt in points])
    s = np.array([pt.s for pt in points])
    s_hi = float(s.max())
    frame = Frame(vs_range[0], vs_range[1], 0.0, 1.05 * s_hi)

    body = _axes(frame, "|Vs| (pu)", "S (pu)")
    body.append(f'<path class="s-curve" fill="none" stroke="#1f77b4" stroke-width="2" d="{path_data(frame, vs, s)}"/>')
    body.append(
        f'<path class="cutoff" fill="none" stroke="#d62728" stroke-dasharray="6 4" '
        f'd="{path_data(frame, [vs_theory, vs_theory], [frame.y_lo, frame.y_hi])}"/>'
    )
    x = _c(float(frame.px(vs_theory)) + 6)
    body.append(
        f'<text x="{x}" y="{MARGIN + 16}" font-family="sans-serif" font-size="12" fill="#d62728">'
        f"cutoff |Vs| = {vs_theory:.4g}</text>"
    )
    i = int(np.argmin(s))
    body.append(
        f'<circle class="minimum" cx="{_c(float(frame.px(vs[i])))}" cy="{_c(float(frame.py(s[i])))}" '
        f'r="4" fill="#2ca02c"/>'
    )
    return _document(body, "Apparent power versus source voltage at constant P and V_L")
