# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels. Signatures mirror ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()


cdef inline double _cross(double ox, double oy, double ax, double ay,
                          double bx, double by) nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def monotone_chain(const double[:, ::1] pts, double tol):
    """Indices of the counterclockwise hull of lexicographically sorted points.

    Points with cross product <= tol against the current chain are dropped,
    so collinear and duplicate points never appear as vertices.
    """
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, t, top
    cdef cnp.ndarray[cnp.intp_t, ndim=1] hull = np.empty(2 * n + 1, dtype=np.intp)
    if n == 0:
        return hull[:0]
    if n == 1:
        hull[0] = 0
        return hull[:1]
    top = 0
    for i in range(n):
        while top >= 2 and _cross(pts[hull[top - 2], 0], pts[hull[top - 2], 1],
                                  pts[hull[top - 1], 0], pts[hull[top - 1], 1],
                                  pts[i, 0], pts[i, 1]) <= tol:
            top -= 1
        hull[top] = i
        top += 1
    t = top + 1
    for i in range(n - 2, -1, -1):
        while top >= t and _cross(pts[hull[top - 2], 0], pts[hull[top - 2], 1],
                                  pts[hull[top - 1], 0], pts[hull[top - 1], 1],
                                  pts[i, 0], pts[i, 1]) <= tol:
            top -= 1
        hull[top] = i
        top += 1
    # last point repeats the first
    return hull[:top - 1].copy()


def directed_hausdorff(const double[:, ::1] a, const double[:, ::1] b):
    """max over rows of ``a`` of the distance to the nearest row of ``b``."""
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j, c
    cdef double cmax = 0.0, cmin, dist, diff
    with nogil:
        for i in range(na):
            cmin = INFINITY
            for j in range(nb):
                dist = 0.0
                for c in range(d):
                    diff = a[i, c] - b[j, c]
                    dist = dist + diff * diff
                if dist < cmin:
                    cmin = dist
                    if cmin <= cmax:
                        break
            if cmin > cmax:
                cmax = cmin
    return sqrt(cmax)


cdef inline double _seg_dist2(double px, double py, double ax, double ay,
                              double bx, double by) nogil:
    cdef double dx = bx - ax, dy = by - ay
    cdef double L = dx * dx + dy * dy
    cdef double t = 0.0
    if L > 0.0:
        t = ((px - ax) * dx + (py - ay) * dy) / L
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    dx = ax + t * dx - px
    dy = ay + t * dy - py
    return dx * dx + dy * dy


def polygon_distances(const double[:, ::1] pts, const double[:, ::1] verts, double tol):
    """Distance from each point to a convex polygon (0 inside).

    ``verts`` is counterclockwise; one or two vertices mean a point or a
    segment.
    """
    cdef Py_ssize_t n = pts.shape[0], m = verts.shape[0]
    cdef Py_ssize_t i, e, f
    cdef double best, dd
    cdef bint inside
    cdef cnp.ndarray[cnp.double_t, ndim=1] out = np.empty(n, dtype=np.double)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            inside = m >= 3
            if inside:
                for e in range(m):
                    f = e + 1 if e + 1 < m else 0
                    if _cross(verts[e, 0], verts[e, 1], verts[f, 0], verts[f, 1],
                              pts[i, 0], pts[i, 1]) < -tol:
                        inside = False
                        break
            if inside:
                ov[i] = 0.0
                continue
            best = INFINITY
            if m == 1:
                best = _seg_dist2(pts[i, 0], pts[i, 1], verts[0, 0], verts[0, 1],
                                  verts[0, 0], verts[0, 1])
            else:
                for e in range(m):
                    f = e + 1 if e + 1 < m else 0
                    dd = _seg_dist2(pts[i, 0], pts[i, 1], verts[e, 0], verts[e, 1],
                                    verts[f, 0], verts[f, 1])
                    if dd < best:
                        best = dd
            ov[i] = sqrt(best)
    return out
