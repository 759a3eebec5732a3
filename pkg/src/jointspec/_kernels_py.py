"""Pure-Python/numpy versions of the compiled geometry kernels."""
import numpy as np


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(pts, tol):
    n = len(pts)
    if n == 0:
        return np.empty(0, dtype=np.intp)
    if n == 1:
        return np.zeros(1, dtype=np.intp)
    p = [tuple(row) for row in np.asarray(pts).tolist()]
    hull = []
    for i in range(n):
        while len(hull) >= 2 and _cross(p[hull[-2]], p[hull[-1]], p[i]) <= tol:
            hull.pop()
        hull.append(i)
    t = len(hull) + 1
    for i in range(n - 2, -1, -1):
        while len(hull) >= t and _cross(p[hull[-2]], p[hull[-1]], p[i]) <= tol:
            hull.pop()
        hull.append(i)
    return np.array(hull[:-1], dtype=np.intp)


def directed_hausdorff(a, b, chunk=2048):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cmax = 0.0
    for s in range(0, len(a), chunk):
        blk = a[s:s + chunk]
        d2 = ((blk[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        cmax = max(cmax, float(d2.min(axis=1).max()))
    return float(np.sqrt(cmax))


def _segment_dist2(p, a, b):
    d = b - a
    L = float(d @ d)
    if L > 0.0:
        t = np.clip(((p - a) @ d) / L, 0.0, 1.0)
    else:
        t = np.zeros(len(p))
    q = a + t[:, None] * d
    return ((q - p) ** 2).sum(axis=1)


def polygon_distances(pts, verts, tol):
    pts = np.asarray(pts, dtype=float)
    verts = np.asarray(verts, dtype=float)
    m = len(verts)
    nxt = np.roll(verts, -1, axis=0)
    if m == 1:
        return np.sqrt(((pts - verts[0]) ** 2).sum(axis=1))
    best = np.full(len(pts), np.inf)
    for a, b in zip(verts, nxt):
        best = np.minimum(best, _segment_dist2(pts, a, b))
    out = np.sqrt(best)
    if m >= 3:
        e = nxt - verts
        rel = pts[:, None, :] - verts[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        out[(cross >= -tol).all(axis=1)] = 0.0
    return out
