"""Inverse spectral pipeline for toric joint spectra.

Joint spectra at several values of hbar are turned into convex hulls, the
hull support functions are extrapolated to hbar = 0, and the limit polygon is
snapped to a rational polytope whose vertices are then tested for the Delzant
(smoothness) condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    ExtrapolationError,
    InsufficientDataError,
    NonRationalError,
    NotALatticeError,
    RoundingError,
    SimplicityError,
)
from .geometry import ConvexPolygon, Hull, Interval, convex_hull, halfplane_intersection, unit_directions
from .spectra import JointSpectrum, _clusters

Rational = Union[int, Fraction]


# --------------------------------------------------------------------------
# lattice structure


@dataclass(frozen=True)
class LatticeFit:
    origin: np.ndarray
    spacing: np.ndarray
    residual: float
    k: Optional[int]
    isolated: bool

    @property
    def spacing_ratio(self) -> Optional[np.ndarray]:
        """Fitted spacing divided by ``2 pi / k`` (None without an integer k)."""
        if self.k is None:
            return None
        return self.spacing / (2.0 * math.pi / self.k)


def require_simple(js: JointSpectrum) -> None:
    bad = np.nonzero(js.multiplicities > 1)[0]
    if len(bad):
        pt = tuple(float(c) for c in js.points[bad[0]])
        raise SimplicityError(
            f"joint eigenvalue {pt} has multiplicity {int(js.multiplicities[bad[0]])}; "
            "toric joint spectra are simple", point=pt)


def isolated(points: np.ndarray, radius: float) -> bool:
    """True when every closed ball of ``radius`` around a point holds only that point."""
    tree = cKDTree(np.asarray(points, dtype=float))
    return len(tree.query_pairs(radius)) == 0


def fit_lattice(js: JointSpectrum, tol: Optional[float] = None) -> LatticeFit:
    """Fit an axis-aligned affine lattice ``origin + spacing * Z^d`` to a spectrum.

    Per axis the distinct values are sorted, the spacing is their median gap
    and the origin their minimum. Nothing about the expected spacing is
    assumed.
    """
    require_simple(js)
    pts = js.points
    span = float(np.ptp(pts, axis=0).max()) if len(pts) else 0.0
    if tol is None:
        tol = 1e-9 * max(span, 1.0)
    origin, spacing = [], []
    for axis in range(js.d):
        vals = pts[:, axis]
        distinct = np.array([vals[g].min() for g in _clusters(vals, tol)])
        if len(distinct) < 2:
            raise InsufficientDataError(
                f"axis {axis} has {len(distinct)} distinct value(s); spacing undefined")
        origin.append(distinct[0])
        spacing.append(float(np.median(np.diff(distinct))))
    origin = np.array(origin)
    spacing = np.array(spacing)
    nodes = origin + np.round((pts - origin) / spacing) * spacing
    residual = float(np.linalg.norm(pts - nodes, axis=1).max())
    if residual > 0.1 * spacing.min():
        raise NotALatticeError(
            f"lattice residual {residual:.3e} exceeds 0.1 x spacing {spacing.min():.3e}")
    return LatticeFit(origin, spacing, residual, js.param.k,
                      isolated(pts, spacing.min() / 4.0))


# --------------------------------------------------------------------------
# hull extrapolation


@dataclass(frozen=True)
class HullExtrapolation:
    hull: Hull
    residual: float
    directions: np.ndarray
    support: np.ndarray


def _fit_support(hbars: np.ndarray, values: np.ndarray, order: int):
    A = np.vander(hbars, order + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    resid = values - A @ coef
    return coef[0], np.abs(resid).max(axis=0)


def _edge_normals(poly: ConvexPolygon) -> np.ndarray:
    if poly.degenerate:
        return np.empty((0, 2))
    e = np.roll(poly.vertices, -1, axis=0) - poly.vertices
    n = np.column_stack([e[:, 1], -e[:, 0]])
    return n / np.linalg.norm(n, axis=1, keepdims=True)


def extrapolate_support(hulls: Sequence[Tuple[float, Hull]], m: int = 32,
                        order: int = 1) -> HullExtrapolation:
    """Fit ``h(theta; hbar) = h0(theta) + c1 hbar (+ c2 hbar^2)`` per direction.

    Directions are ``m`` equally spaced unit vectors plus every edge normal
    of the input polygons, so polygons that do not depend on hbar are
    reproduced exactly.
    """
    hbars = np.array([float(h) for h, _ in hulls])
    if len(np.unique(hbars)) < 3:
        raise InsufficientDataError("need hulls at >= 3 distinct values of hbar")
    if len(np.unique(hbars)) <= order:
        raise InsufficientDataError("fit order must be below the number of hbar values")
    shapes = [hull for _, hull in hulls]
    if all(isinstance(h, Interval) for h in shapes):
        vals = np.array([[h.hi, -h.lo] for h in shapes])
        h0, resid = _fit_support(hbars, vals, order)
        hi, lo = float(h0[0]), float(-h0[1])
        if hi < lo:
            raise ExtrapolationError(f"negative fitted diameter {hi - lo:.3e}")
        return HullExtrapolation(Interval(lo, hi), float(resid.max()),
                                 np.array([[1.0], [-1.0]]), h0)
    if not all(isinstance(h, ConvexPolygon) for h in shapes):
        raise TypeError("hulls must be all intervals or all polygons")
    if m < 16:
        raise ValueError("need at least 16 directions")
    dirs = [unit_directions(m)] + [_edge_normals(h) for h in shapes]
    dirs = np.unique(np.round(np.concatenate(dirs), 14), axis=0)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    vals = np.array([h.support(dirs) for h in shapes])
    h0, resid = _fit_support(hbars, vals, order)
    # opposite directions: width h0(theta) + h0(-theta) must be nonnegative
    for i, th in enumerate(unit_directions(m)[: m // 2]):
        a = np.argmin(np.linalg.norm(dirs - th, axis=1))
        b = np.argmin(np.linalg.norm(dirs + th, axis=1))
        if h0[a] + h0[b] < -1e-12:
            raise ExtrapolationError(f"negative fitted diameter along {th}")
    try:
        poly = halfplane_intersection(dirs, h0)
    except ValueError as exc:
        raise ExtrapolationError(str(exc)) from None
    return HullExtrapolation(poly, float(resid.max()), dirs, h0)


def extrapolate_hull(hulls: Sequence[Tuple[float, Hull]], m: int = 32,
                     order: int = 1) -> Hull:
    """Limit hull as hbar -> 0 from hulls at >= 3 values of hbar."""
    return extrapolate_support(hulls, m, order).hull


# --------------------------------------------------------------------------
# rational polytopes


def _primitive(vec: Sequence[Rational]) -> Tuple[int, ...]:
    fr = [Fraction(c) for c in vec]
    lcm = 1
    for f in fr:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fr]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(i // g for i in ints)


def _require_rational(vertices) -> List[Tuple[Fraction, ...]]:
    out = []
    for v in vertices:
        row = []
        for c in v:
            if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
                raise NonRationalError(f"vertex coordinate {c!r} is not an int or Fraction")
            row.append(Fraction(c))
        out.append(tuple(row))
    return out


@dataclass(frozen=True)
class DelzantResult:
    delzant: bool
    determinants: Tuple[int, ...]
    edge_vectors: Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...] = ()

    def __bool__(self):
        return self.delzant


def delzant_check(p: "Polytope") -> DelzantResult:
    """Smoothness test: at each vertex the primitive edge vectors have det +-1.

    Intervals pass by convention.
    """
    verts = _require_rational(p.vertices)
    if p.dim == 1:
        return DelzantResult(True, ())
    dets, edges = [], []
    n = len(verts)
    for i in range(n):
        v = verts[i]
        nxt, prv = verts[(i + 1) % n], verts[i - 1]
        a = _primitive([nxt[0] - v[0], nxt[1] - v[1]])
        b = _primitive([prv[0] - v[0], prv[1] - v[1]])
        dets.append(a[0] * b[1] - a[1] * b[0])
        edges.append((b, a))
    return DelzantResult(all(abs(d) == 1 for d in dets), tuple(dets), tuple(edges))


@dataclass(frozen=True)
class Polytope:
    """Rational convex polytope: an interval (dim 1) or a ccw polygon (dim 2)."""

    dim: int
    vertices: Tuple[Tuple[Fraction, ...], ...]
    edge_normals: Tuple[Tuple[int, ...], ...]
    delzant: bool

    @classmethod
    def from_vertices(cls, vertices) -> "Polytope":
        verts = tuple(_require_rational(vertices))
        dim = len(verts[0])
        if dim == 1:
            lo, hi = min(v[0] for v in verts), max(v[0] for v in verts)
            return cls(1, ((lo,), (hi,)), ((-1,), (1,)), True)
        # start at the lowest, then leftmost vertex
        start = min(range(len(verts)), key=lambda i: (verts[i][1], verts[i][0]))
        verts = verts[start:] + verts[:start]
        normals = []
        n = len(verts)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            normals.append(_primitive([b[1] - a[1], a[0] - b[0]]))
        poly = cls(2, verts, tuple(normals), False)
        return cls(2, verts, tuple(normals), delzant_check(poly).delzant)

    def as_float(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.vertices])


@dataclass(frozen=True)
class RoundingDeltas:
    normal: Tuple[float, ...]
    offset: Tuple[float, ...]
    vertex: Tuple[float, ...]

    @property
    def max(self) -> float:
        return max(self.normal + self.offset + self.vertex, default=0.0)


def _snap_direction(dx: float, dy: float, cap: int) -> Tuple[int, int]:
    if abs(dy) <= abs(dx):
        r = Fraction(dy / dx).limit_denominator(cap)
        s = 1 if dx > 0 else -1
        return s * r.denominator, s * r.numerator
    r = Fraction(dx / dy).limit_denominator(cap)
    s = 1 if dy > 0 else -1
    return s * r.numerator, s * r.denominator


def _angle(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    # atan2 stays accurate for nearly parallel vectors, unlike acos
    return abs(math.atan2(float(a[0] * b[1] - a[1] * b[0]), float(a @ b)))


def round_to_rational_polytope(p: Hull, denominator_cap: int = 20,
                               tol: float = 1e-2) -> Tuple[Polytope, RoundingDeltas]:
    """Snap a polygon to integer edge directions and rational edge offsets.

    Each edge direction becomes the nearest primitive integer vector with
    entries <= ``denominator_cap`` (continued-fraction best approximation of
    its slope); each edge line offset is rounded to a rational with
    denominator <= ``denominator_cap``; vertices are the exact intersections
    of consecutive rounded edge lines. Any delta above ``tol`` raises
    :class:`RoundingError`.
    """
    if isinstance(p, Interval):
        lo = Fraction(p.lo).limit_denominator(denominator_cap)
        hi = Fraction(p.hi).limit_denominator(denominator_cap)
        d = (abs(float(lo) - p.lo), abs(float(hi) - p.hi))
        deltas = RoundingDeltas((0.0, 0.0), d, d)
        if max(d) > tol:
            raise RoundingError(f"interval endpoint moved by {max(d):.3e} > {tol:.3e}")
        if hi <= lo:
            raise RoundingError("rounded interval is empty")
        return Polytope.from_vertices([(lo,), (hi,)]), deltas
    if p.degenerate:
        raise ValueError("cannot round a degenerate polygon")
    V = p.vertices
    n = len(V)
    lines, ndelta, odelta = [], [], []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        dx, dy = b - a
        qx, qy = _snap_direction(dx, dy, denominator_cap)
        normal = (qy, -qx)
        ndelta.append(_angle((dx, dy), (qx, qy)))
        mid = 0.5 * (a + b)
        c_float = normal[0] * mid[0] + normal[1] * mid[1]
        c = Fraction(c_float).limit_denominator(denominator_cap)
        odelta.append(float(abs(float(c) - c_float) / math.hypot(*normal)))
        lines.append((normal, c, i))
    # merge consecutive edges that snapped to the same direction
    merged = []
    for ln in lines:
        if merged and merged[-1][0] == ln[0]:
            if merged[-1][1] != ln[1]:
                raise RoundingError("adjacent edges snapped to parallel distinct lines")
            continue
        merged.append(ln)
    if len(merged) > 1 and merged[0][0] == merged[-1][0]:
        merged.pop()
    if len(merged) < 3:
        raise RoundingError("rounded polygon has fewer than 3 edges")
    verts, vdelta = [], []
    m = len(merged)
    for i in range(m):
        (n1, c1, i1), (n2, c2, _) = merged[i - 1], merged[i]
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det == 0:
            raise RoundingError("consecutive rounded edges are parallel")
        x = (c1 * n2[1] - c2 * n1[1]) / det
        y = (n1[0] * c2 - n2[0] * c1) / det
        verts.append((x, y))
        # the original vertex shared by these two edges starts edge i
        orig = V[merged[i][2]]
        vdelta.append(math.hypot(float(x) - orig[0], float(y) - orig[1]))
    deltas = RoundingDeltas(tuple(ndelta), tuple(odelta), tuple(vdelta))
    if deltas.max > tol:
        raise RoundingError(f"rounding delta {deltas.max:.3e} exceeds tolerance {tol:.3e}")
    for i in range(m):
        a, b, c = verts[i - 1], verts[i], verts[(i + 1) % m]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross <= 0:
            raise RoundingError("rounded polygon is not strictly convex")
    return Polytope.from_vertices(verts), deltas


# --------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class RecoveryReport:
    recovered: Polytope
    delzant: DelzantResult
    hulls: Tuple[Tuple[float, Hull], ...]
    limit_hull: Hull
    extrapolation_residual: float
    rounding: RoundingDeltas
    rounding_tol: float
    lattice_fits: Tuple[LatticeFit, ...] = field(default=())

    def residuals(self) -> dict:
        return {
            "extrapolation": self.extrapolation_residual,
            "rounding_tolerance": self.rounding_tol,
            "max_normal_delta": max(self.rounding.normal, default=0.0),
            "max_offset_delta": max(self.rounding.offset, default=0.0),
            "max_vertex_delta": max(self.rounding.vertex, default=0.0),
            "max_lattice_residual": max((f.residual for f in self.lattice_fits), default=0.0),
        }


def recover(spectra: Sequence[Union[JointSpectrum, Tuple[float, JointSpectrum]]],
            m: int = 32, order: int = 1, denominator_cap: int = 20) -> RecoveryReport:
    """Recover the moment polytope from toric joint spectra at several hbar."""
    items = [(s.param.hbar, s) if isinstance(s, JointSpectrum) else (float(s[0]), s[1])
             for s in spectra]
    if len({h for h, _ in items}) < 3:
        raise InsufficientDataError("need joint spectra at >= 3 distinct values of hbar")
    dims = {js.d for _, js in items}
    if len(dims) != 1 or dims.pop() not in (1, 2):
        raise ValueError("spectra must share a dimension d in {1, 2}")
    fits = tuple(fit_lattice(js) for _, js in items)
    hulls = tuple((h, convex_hull(js.points)) for h, js in items)
    ext = extrapolate_support(hulls, m, order)
    tol = max(10.0 * ext.residual, 1e-9)
    poly, deltas = round_to_rational_polytope(ext.hull, denominator_cap, tol)
    return RecoveryReport(poly, delzant_check(poly), hulls, ext.hull, ext.residual,
                          deltas, tol, fits)
