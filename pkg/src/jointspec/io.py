"""Spectrum CSV and polytope JSON readers and writers, plus a hand-written SVG scatter plot.

All writers are deterministic: floats in CSV use 17 significant digits (an
exact round trip for 64-bit floats) and JSON keys are sorted.
"""
from __future__ import annotations

import json
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .errors import SpectrumFormatError
from .geometry import ConvexPolygon, Hull, Interval
from .inverse import Polytope, RecoveryReport
from .operators import SemiclassicalParam
from .spectra import JointSpectrum


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def spectrum_header(d: int) -> str:
    return ",".join(["hbar"] + [f"lambda{i + 1}" for i in range(d)] + ["multiplicity"])


def format_spectrum_csv(js: JointSpectrum) -> str:
    lines = [spectrum_header(js.d)]
    h = fmt(js.param.hbar)
    for pt, m in zip(js.points, js.multiplicities):
        lines.append(",".join([h] + [fmt(c) for c in pt] + [str(int(m))]))
    return "\n".join(lines) + "\n"


def write_spectrum_csv(js: JointSpectrum, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_spectrum_csv(js))


def _param_for(hbar: float) -> SemiclassicalParam:
    k = round(1.0 / hbar)
    if k >= 1 and 1.0 / k == hbar:
        return SemiclassicalParam(hbar, k)
    return SemiclassicalParam(hbar)


def parse_spectrum_rows(lines: Iterable[str], source: str = "<csv>"):
    """Parse spectrum CSV text into ``(hbar or None, points (m, d), multiplicities)``.

    Repeated points are merged by adding their multiplicities.
    """
    it = iter(lines)
    try:
        header = next(it).strip()
    except StopIteration:
        raise SpectrumFormatError(f"{source}: empty file") from None
    cols = header.split(",")
    if (len(cols) < 3 or cols[0] != "hbar" or cols[-1] != "multiplicity"
            or cols[1:-1] != [f"lambda{i + 1}" for i in range(len(cols) - 2)]):
        raise SpectrumFormatError(f"{source}:1: bad header {header!r}")
    d = len(cols) - 2
    hbar: Optional[float] = None
    merged = {}
    order: List[tuple] = []
    for lineno, line in enumerate(it, start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != d + 2:
            raise SpectrumFormatError(
                f"{source}:{lineno}: expected {d + 2} columns, got {len(parts)}")
        try:
            h = float(parts[0])
            pt = tuple(float(c) for c in parts[1:-1])
            m = int(parts[-1])
        except ValueError as exc:
            raise SpectrumFormatError(f"{source}:{lineno}: {exc}") from None
        if m < 1:
            raise SpectrumFormatError(f"{source}:{lineno}: multiplicity must be >= 1")
        if hbar is None:
            hbar = h
        elif h != hbar:
            raise SpectrumFormatError(f"{source}:{lineno}: hbar {h!r} differs from {hbar!r}")
        if pt not in merged:
            order.append(pt)
            merged[pt] = 0
        merged[pt] += m
    pts = np.array(order, dtype=float).reshape(-1, d)
    mult = np.array([merged[p] for p in order], dtype=int)
    return hbar, pts, mult


def parse_spectrum_csv(lines: Iterable[str], source: str = "<csv>") -> JointSpectrum:
    hbar, pts, mult = parse_spectrum_rows(lines, source)
    if hbar is None:
        raise SpectrumFormatError(f"{source}: no data rows; hbar unknown")
    return JointSpectrum(_param_for(hbar), pts, mult)


def read_spectrum_csv(path: str) -> JointSpectrum:
    with open(path) as fh:
        return parse_spectrum_csv(fh, source=path)


def _num(x) -> object:
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2 ** 53 else x


def hull_to_dict(hull: Hull) -> dict:
    if isinstance(hull, Interval):
        return {"dim": 1, "vertices": [[_num(hull.lo)], [_num(hull.hi)]], "degenerate": hull.degenerate}
    return {"dim": 2, "vertices": [[_num(c) for c in v] for v in hull.vertices],
            "degenerate": bool(hull.degenerate)}


def polytope_to_dict(p: Polytope, residuals: Optional[dict] = None) -> dict:
    return {
        "dim": p.dim,
        "vertices": [[_num(c) for c in v] for v in p.vertices],
        "edge_normals": [list(n) for n in p.edge_normals],
        "delzant": bool(p.delzant),
        "residuals": {k: float(v) for k, v in sorted((residuals or {}).items())},
    }


def report_to_dict(report: RecoveryReport) -> dict:
    return polytope_to_dict(report.recovered, report.residuals())


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def polytope_from_dict(obj: dict) -> Polytope:
    from fractions import Fraction

    verts = [[Fraction(c).limit_denominator(10 ** 12) if isinstance(c, float) else c for c in v]
             for v in obj["vertices"]]
    return Polytope.from_vertices(verts)


# --------------------------------------------------------------------------
# SVG

_W, _H, _M = 640, 480, 56


def _ticks(lo: float, hi: float) -> List[float]:
    return [lo + (hi - lo) * i / 4.0 for i in range(5)]


def svg_scatter(points: np.ndarray, multiplicities: Sequence[int], title: str = "",
                labels: Sequence[str] = ("lambda1", "lambda2")) -> str:
    """Self-contained SVG scatter (d = 2) or strip plot (d = 1)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    d = pts.shape[1]
    mult = np.asarray(multiplicities, dtype=int)
    if len(pts):
        xlo, xhi = float(pts[:, 0].min()), float(pts[:, 0].max())
        ylo, yhi = (float(pts[:, 1].min()), float(pts[:, 1].max())) if d == 2 else (0.0, 0.0)
    else:
        xlo, xhi, ylo, yhi = 0.0, 1.0, 0.0, 1.0
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pw, ph = _W - 2 * _M, _H - 2 * _M

    def sx(x):
        return _M + (x - xlo) / (xhi - xlo) * pw

    def sy(y):
        return _H - _M - (y - ylo) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="14">{title}</text>')
    x0, y0 = _M, _H - _M
    out.append(f'<g id="axes" stroke="black" stroke-width="1">'
               f'<line x1="{x0}" y1="{y0}" x2="{_W - _M}" y2="{y0}"/>'
               f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{_M}"/></g>')
    out.append('<g id="ticks" font-family="sans-serif" font-size="10">')
    for t in _ticks(xlo, xhi):
        out.append(f'<text x="{sx(t):.3f}" y="{y0 + 16}" text-anchor="middle">{t:.4g}</text>')
    if d == 2:
        for t in _ticks(ylo, yhi):
            out.append(f'<text x="{x0 - 6}" y="{sy(t) + 3:.3f}" text-anchor="end">{t:.4g}</text>')
    out.append("</g>")
    out.append(f'<text x="{_W / 2:.1f}" y="{_H - 14}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{labels[0]}</text>')
    if d == 2:
        out.append(f'<text x="16" y="{_H / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12" transform="rotate(-90 16 {_H / 2:.1f})">{labels[1]}</text>')
    out.append('<g id="points" fill="steelblue" fill-opacity="0.8">')
    ymid = _H - _M - ph / 2.0
    for pt, m in zip(pts, mult):
        cy = sy(pt[1]) if d == 2 else ymid
        out.append(f'<circle cx="{sx(pt[0]):.3f}" cy="{cy:.3f}" r="{2.0 + 1.5 * (m - 1):.1f}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_for_spectrum(js: JointSpectrum, title: str = "") -> str:
    return svg_scatter(js.points, js.multiplicities, title=title,
                       labels=[f"lambda{i + 1}" for i in range(max(js.d, 2))])


def write_text(path: str, text: str, stdout: Optional[TextIO] = None) -> None:
    if path == "-":
        import sys

        (stdout or sys.stdout).write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
