"""Convex hulls, support functions, half-plane intersection and Hausdorff distance."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels

HULL_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; the one-dimensional convex hull."""

    lo: float
    hi: float

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def vertices(self) -> np.ndarray:
        return np.array([[self.lo], [self.hi]])

    def support(self, direction: float) -> float:
        return self.hi * direction if direction >= 0 else self.lo * direction


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Counterclockwise vertex list; ``degenerate`` for points and segments."""

    vertices: np.ndarray
    degenerate: bool

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, ConvexPolygon)
                and self.degenerate == other.degenerate
                and self.vertices.shape == other.vertices.shape
                and bool(np.all(self.vertices == other.vertices)))

    def support(self, directions) -> np.ndarray:
        """Support values ``max_v <v, theta>`` for each row of ``directions``."""
        return (np.asarray(directions, dtype=float) @ self.vertices.T).max(axis=1)

    def contains(self, pts, tol: float = 1e-12) -> np.ndarray:
        return kernels.polygon_distances(np.atleast_2d(pts), self.vertices, tol) <= tol

    def area(self) -> float:
        if self.degenerate:
            return 0.0
        x, y = self.vertices.T
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


Hull = Union[Interval, ConvexPolygon]


def convex_hull(points, tol: float = HULL_TOL) -> Hull:
    """Monotone-chain hull of a cloud in R^2, or the spanning interval in R^1."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) == 0:
        raise ValueError("convex_hull needs at least one point")
    if pts.shape[1] == 1:
        return Interval(float(pts.min()), float(pts.max()))
    if pts.shape[1] != 2:
        raise ValueError(f"convex_hull supports d <= 2, got d={pts.shape[1]}")
    pts = np.unique(pts, axis=0)  # lexicographic sort, exact duplicates removed
    idx = kernels.monotone_chain(pts, tol)
    verts = pts[idx]
    if len(verts) < 3:
        return ConvexPolygon(verts, True)
    start = np.lexsort((verts[:, 0], verts[:, 1]))[0]  # lowest, then leftmost
    return ConvexPolygon(np.roll(verts, -start, axis=0), False)


def _as_points(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a[:, None] if a.ndim == 1 else a


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance.

    Two point clouds: exact pointwise distance. Two convex sets (polygons or
    intervals): maximum over the vertices of each of the distance to the
    other set, which suffices because distance to a convex set is convex.
    """
    if isinstance(a, Interval) and isinstance(b, Interval):
        return float(max(abs(a.lo - b.lo), abs(a.hi - b.hi)))
    if isinstance(a, ConvexPolygon) and isinstance(b, ConvexPolygon):
        dab = kernels.polygon_distances(a.vertices, b.vertices).max()
        dba = kernels.polygon_distances(b.vertices, a.vertices).max()
        return float(max(dab, dba))
    if isinstance(a, (Interval, ConvexPolygon)) or isinstance(b, (Interval, ConvexPolygon)):
        raise TypeError("hausdorff compares two point sets or two convex sets of the same kind")
    pa, pb = _as_points(a), _as_points(b)
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("hausdorff needs nonempty sets")
    return max(kernels.directed_hausdorff(pa, pb), kernels.directed_hausdorff(pb, pa))


def distance_to_hull(points, hull: Hull) -> np.ndarray:
    """Distance from each point to a convex set (0 inside)."""
    pts = _as_points(points)
    if isinstance(hull, Interval):
        x = pts[:, 0]
        return np.maximum(np.maximum(hull.lo - x, x - hull.hi), 0.0)
    return kernels.polygon_distances(pts, hull.vertices)


def unit_directions(m: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(m) / m
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _clip(poly: np.ndarray, normal, offset) -> np.ndarray:
    # Sutherland-Hodgman against {x : normal . x <= offset}
    if len(poly) == 0:
        return poly
    s = poly @ normal - offset
    out = []
    for i in range(len(poly)):
        j = (i + 1) % len(poly)
        if s[i] <= 0:
            out.append(poly[i])
        if (s[i] < 0 < s[j]) or (s[j] < 0 < s[i]):
            t = s[i] / (s[i] - s[j])
            out.append(poly[i] + t * (poly[j] - poly[i]))
    return np.array(out).reshape(-1, 2)


def halfplane_intersection(normals, offsets, tol: float = 1e-9) -> ConvexPolygon:
    """Polygon ``{x : normals @ x <= offsets}``; empty input region raises ValueError.

    The normals must positively span the plane so the region is bounded.
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    big = 4.0 * (np.abs(offsets).max() + 1.0) / max(np.linalg.norm(normals, axis=1).min(), 1e-300)
    poly = np.array([[-big, -big], [big, -big], [big, big], [-big, big]])
    for nrm, off in zip(normals, offsets):
        poly = _clip(poly, nrm, off)
        if len(poly) == 0:
            raise ValueError("half-plane intersection is empty")
    if np.abs(poly).max() >= big * (1 - 1e-12):
        raise ValueError("half-plane intersection is unbounded")
    scale = max(1.0, float(np.abs(poly).max()))
    return convex_hull(_merge_close(poly, tol * scale), tol=tol * scale * scale)


def _merge_close(poly: np.ndarray, tol: float) -> np.ndarray:
    keep = [poly[0]]
    for p in poly[1:]:
        if np.linalg.norm(p - keep[-1]) > tol:
            keep.append(p)
    if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol:
        keep.pop()
    return np.array(keep)
