"""Write-only SVG figures: comb domains, ray traces, decay charts."""

from __future__ import annotations

import math

from .dynamics import PolyParams, julia_cover
from .poincare import comb_height


class Canvas:
    """Minimal SVG document builder (static output, no interactivity)."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="black", width=1.0, cls=None):
        c = f' class="{cls}"' if cls else ""
        self._parts.append(
            f'<line{c} x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, pts, stroke="crimson", width=1.2, cls=None):
        c = f' class="{cls}"' if cls else ""
        body = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
        self._parts.append(
            f'<polyline{c} points="{body}" fill="none" '
            f'stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, cx, cy, r, fill="black", stroke="none", cls=None):
        c = f' class="{cls}"' if cls else ""
        self._parts.append(
            f'<circle{c} cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" '
            f'fill="{fill}" stroke="{stroke}"/>')

    def text(self, x, y, s, size=11, fill="#444"):
        self._parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" '
            f'font-family="monospace" fill="{fill}">{s}</text>')

    def tostring(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        return head + "\n" + "\n".join(self._parts) + "\n</svg>\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.tostring())


def _affine(lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return lambda v: out_lo + (v - lo) / span * (out_hi - out_lo)


def ray_figure(p: PolyParams, rays, cover_level: int = 6, size: int = 640) -> Canvas:
    """Dynamical-plane picture: Julia-set cover, traced rays, slit tips."""
    pts = [s.z for ray in rays for s in ray.samples]
    xs = [z.real for z in pts] + [-p.xi, p.xi]
    ys = [z.imag for z in pts] + [0.0]
    pad = 0.08 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    fx = _affine(min(xs) - pad, max(xs) + pad, 40, size - 15)
    fy = _affine(min(ys) - pad, max(ys) + pad, size - 40, 15)  # y up

    cv = Canvas(size, size)
    cv.line(fx(min(xs) - pad), fy(0), fx(max(xs) + pad), fy(0), stroke="#bbb", width=0.6)
    for lo, hi in julia_cover(p, cover_level).intervals:
        cv.line(fx(lo), fy(0), fx(hi), fy(0), stroke="black", width=3.0, cls="julia")
    for ray in rays:
        cv.polyline([(fx(s.z.real), fy(s.z.imag)) for s in ray.samples], cls="ray")
        if ray.tip is not None:
            cv.circle(fx(ray.tip.point.real), fy(ray.tip.point.imag), 3.0,
                      fill="royalblue", cls="tip")
    cv.text(8, 14, f"lambda={p.lam:g}  rays={','.join(str(r.angle) for r in rays)}")
    return cv


def comb_figure(p: PolyParams, l_max: int = 12, dyadic_depth: int = 6,
                size: int = 720) -> Canvas:
    """Three panels: the ray comb, its disc picture, the linearizer comb."""
    cv = Canvas(size, size)
    third = size // 3

    # panel 1: half-strip comb with dyadic slits of height a/2^m
    top = max(1.25 * p.a, 0.5)
    fx = _affine(-1.0, 0.0, 50, size - 20)
    fy = _affine(0.0, top, third - 25, 20)
    cv.line(fx(-1), fy(0), fx(0), fy(0), stroke="black", width=1.2)
    for m in range(0, dyadic_depth + 1):
        for k in range(1, 2 ** m, 2):
            psi = k / 2 ** m
            cv.line(fx(-psi), fy(0), fx(-psi), fy(p.a / 2 ** m),
                    stroke="black", width=1.0, cls="slit")
    cv.text(8, 14, f"ray comb, a={p.a:.4f}")

    # panel 2: hedgehog disc (radial slits at dyadic angles)
    cy, r0 = third + third // 2, third // 2 - 18
    cx = size // 2
    steps = 72
    circle_pts = [(cx + r0 * math.cos(2 * math.pi * t / steps),
                   cy + r0 * math.sin(2 * math.pi * t / steps))
                  for t in range(steps + 1)]
    cv.polyline(circle_pts, stroke="black", width=0.8, cls="disc")
    for m in range(0, dyadic_depth + 1):
        for k in range(1, 2 ** m, 2):
            ang = -math.pi * k / 2 ** m
            r_in = r0 * math.exp(-math.pi * p.a / 2 ** m)
            cv.line(cx + r_in * math.cos(ang), cy - r_in * math.sin(ang),
                    cx + r0 * math.cos(ang), cy - r0 * math.sin(ang),
                    stroke="black", width=1.0, cls="spine")
    cv.text(8, third + 14, "slit disc")

    # panel 3: linearizer comb with growing integer slits
    heights = [comb_height(p, l).height for l in range(1, l_max + 1)]
    fy3 = _affine(0.0, max(heights) * 1.2 + 1e-9, size - 25, 2 * third + 20)
    fx3 = _affine(-(l_max + 1), 0.0, 50, size - 20)
    cv.line(fx3(-(l_max + 1)), fy3(0), fx3(0), fy3(0), stroke="black", width=1.2)
    for l, h in enumerate(heights, start=1):
        cv.line(fx3(-l), fy3(0), fx3(-l), fy3(h), stroke="black", width=1.0,
                cls="fslit")
    cv.text(8, 2 * third + 14, "linearizer comb")
    return cv


def decay_figure(report, size: int = 640) -> Canvas:
    """log2 of the per-scale contributions against the scale index."""
    scales = [s for s in report.scales if s.s_n > 0]
    cv = Canvas(size, size // 2)
    if not scales:
        cv.text(10, 20, "no positive scales")
        return cv
    logs = [math.log2(s.s_n) for s in scales]
    fx = _affine(scales[0].n, scales[-1].n + 1e-9, 45, size - 15)
    fy = _affine(min(logs), max(logs) + 1e-9, size // 2 - 30, 15)
    cv.polyline([(fx(s.n), fy(v)) for s, v in zip(scales, logs)], cls="decay")
    eta = report.params.eta
    if eta > 1.0:
        slope = -math.log2(eta)
        ref = [logs[0] + slope * (s.n - scales[0].n) for s in scales]
        cv.polyline([(fx(s.n), fy(v)) for s, v in zip(scales, ref)],
                    stroke="#999", width=0.8, cls="reference")
    cv.text(8, 12, f"psi={report.angle} tail_ratio={report.tail_ratio:.4f} "
                   f"converged={report.converged}")
    return cv
