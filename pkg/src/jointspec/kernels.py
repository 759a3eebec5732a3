"""Geometry kernels: compiled when the extension is built, numpy otherwise.

``BACKEND`` names the implementation chosen at import. Both implementations
stay importable as ``kernels.python`` and (when built) ``kernels.compiled``.
"""
import numpy as np

from . import _kernels_py as python

try:
    from . import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"


def monotone_chain(pts, tol=1e-12):
    return _impl.monotone_chain(np.ascontiguousarray(pts, dtype=float), float(tol))


def directed_hausdorff(a, b):
    return float(_impl.directed_hausdorff(np.ascontiguousarray(a, dtype=float),
                                          np.ascontiguousarray(b, dtype=float)))


def polygon_distances(pts, verts, tol=1e-12):
    return np.asarray(_impl.polygon_distances(np.ascontiguousarray(pts, dtype=float),
                                              np.ascontiguousarray(verts, dtype=float),
                                              float(tol)))
