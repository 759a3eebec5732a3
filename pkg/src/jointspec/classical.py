"""Catalog of classical integrable systems, their sampled spectra and flow checks.

Phase-space points are flat arrays: each sphere factor contributes ``(x, y, z)``
on the unit sphere, each plane factor ``(u, v)``. The Hamiltonian flow of a
function ``f`` moves a sphere factor by ``dX/dt = X x grad f`` and a plane
factor by ``(du/dt, dv/dt) = (df/dv, -df/du)``. With this orientation the
Jaynes-Cummings pair ``f1 = (u^2+v^2)/2 + z``, ``f2 = (ux + vy)/2`` Poisson
commutes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import EmptyWindowError, UnknownModelError, WindowExceededError
from .geometry import Hull, convex_hull

SPHERE, PLANE = "sphere", "plane"
_WIDTH = {SPHERE: 3, PLANE: 2}


@dataclass(frozen=True)
class ClassicalSystem:
    """Moment map ``F = (f_1, ..., f_d)`` on a product of spheres and planes.

    ``moment_map`` and ``grad_f1`` act on arrays of shape ``(..., phase_dim)``.
    ``window`` bounds ``f_1`` for noncompact systems.
    """

    name: str
    factors: Tuple[str, ...]
    d: int
    moment_map: Callable[[np.ndarray], np.ndarray]
    grad_f1: Callable[[np.ndarray], np.ndarray]
    window: Optional[float] = None
    offset: Tuple[float, ...] = field(default=())
    window_radius: Optional[Callable[[float], float]] = None

    @property
    def phase_dim(self) -> int:
        return sum(_WIDTH[f] for f in self.factors)

    @property
    def compact(self) -> bool:
        return PLANE not in self.factors

    def slices(self):
        out, start = [], 0
        for f in self.factors:
            out.append((f, slice(start, start + _WIDTH[f])))
            start += _WIDTH[f]
        return out

    def evaluate(self, states) -> np.ndarray:
        vals = self.moment_map(np.asarray(states, dtype=float))
        if self.offset:
            vals = vals + np.asarray(self.offset)
        return vals

    def plane_radius(self) -> Optional[float]:
        """Largest plane radius compatible with the f1 window, if any."""
        if self.window is None or self.window_radius is None:
            return None
        return float(self.window_radius(self.window - self.offset_f1))

    @property
    def offset_f1(self) -> float:
        return self.offset[0] if self.offset else 0.0


def _s2_map(s):
    return s[..., 2:3]


def _s2_grad(s):
    g = np.zeros_like(s)
    g[..., 2] = 1.0
    return g


def _s2xs2_map(s):
    return np.stack([s[..., 2], s[..., 5]], axis=-1)


def _s2xs2_grad(s):
    g = np.zeros_like(s)
    g[..., 2] = 1.0
    return g


def _jc_map(s):
    x, y, z, u, v = (s[..., i] for i in range(5))
    return np.stack([0.5 * (u * u + v * v) + z, 0.5 * (u * x + v * y)], axis=-1)


def _jc_grad(s):
    g = np.zeros_like(s)
    g[..., 2] = 1.0
    g[..., 3] = s[..., 3]
    g[..., 4] = s[..., 4]
    return g


_CATALOG = {
    "S2": ClassicalSystem("S2", (SPHERE,), 1, _s2_map, _s2_grad),
    "S2xS2": ClassicalSystem("S2xS2", (SPHERE, SPHERE), 2, _s2xs2_map, _s2xs2_grad),
    # f1 <= c forces (u^2 + v^2)/2 <= c - z <= c + 1
    "JC": ClassicalSystem("JC", (SPHERE, PLANE), 2, _jc_map, _jc_grad,
                          window_radius=lambda c: np.sqrt(2.0 * max(c + 1.0, 0.0))),
}


def catalog(name: str, window: Optional[float] = None) -> ClassicalSystem:
    try:
        sys = _CATALOG[name]
    except KeyError:
        raise UnknownModelError(f"unknown classical system {name!r}; "
                                f"known: {sorted(_CATALOG)}") from None
    return replace(sys, window=window) if window is not None else sys


def shifted(sys: ClassicalSystem, offset) -> ClassicalSystem:
    """Same system with the moment map translated by ``offset``."""
    off = tuple(float(c) for c in np.broadcast_to(offset, (sys.d,)))
    return replace(sys, name=f"{sys.name}+shift", offset=off)


@dataclass(frozen=True)
class ClassicalSpectrum:
    samples: np.ndarray
    hull: Hull
    window: Optional[float] = None


def _sphere_grid(res: int) -> np.ndarray:
    # uniform in z is equal-area; the poles are included so the hull is exact
    z = np.linspace(-1.0, 1.0, res)
    phi = 2.0 * np.pi * np.arange(res) / res
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    r = np.sqrt(np.clip(1.0 - zz * zz, 0.0, None))
    return np.stack([r * np.cos(pp), r * np.sin(pp), zz], axis=-1).reshape(-1, 3)


def _plane_grid(res: int, radius: float) -> np.ndarray:
    r = np.linspace(0.0, radius, res)
    psi = 2.0 * np.pi * np.arange(res) / res
    rr, pp = np.meshgrid(r, psi, indexing="ij")
    return np.stack([rr * np.cos(pp), rr * np.sin(pp)], axis=-1).reshape(-1, 2)


def phase_grid(sys: ClassicalSystem, resolution: int = 16) -> np.ndarray:
    """Deterministic product grid over the phase space (windowed planes)."""
    if resolution < 16:
        raise ValueError("resolution must be >= 16 per factor dimension")
    blocks = []
    for f in sys.factors:
        if f == SPHERE:
            blocks.append(_sphere_grid(resolution))
        else:
            R = sys.plane_radius()
            if R is None:
                raise EmptyWindowError(f"{sys.name}: noncompact system needs a window")
            blocks.append(_plane_grid(resolution, R))
    grid = blocks[0]
    for b in blocks[1:]:
        grid = np.concatenate([np.repeat(grid, len(b), axis=0),
                               np.tile(b, (len(grid), 1))], axis=1)
    return grid


def classical_spectrum(sys: ClassicalSystem, resolution: int = 16,
                       window: Optional[float] = None) -> ClassicalSpectrum:
    """Sample ``F(M)`` on a grid and return the samples with their convex hull."""
    if window is not None:
        sys = replace(sys, window=window)
    if not sys.compact and sys.window is None:
        raise EmptyWindowError(f"{sys.name} is noncompact; a window on f1 is required")
    if not sys.compact and sys.window - sys.offset_f1 < -1.0:
        raise EmptyWindowError(f"window f1 <= {sys.window} contains no phase-space point")
    samples = sys.evaluate(phase_grid(sys, resolution))
    if sys.window is not None:
        samples = samples[samples[:, 0] <= sys.window]
    if len(samples) == 0:
        raise EmptyWindowError(f"no samples with f1 <= {sys.window}")
    return ClassicalSpectrum(samples, convex_hull(samples), sys.window)


def hamiltonian_vector_field(sys: ClassicalSystem, states: np.ndarray) -> np.ndarray:
    g = sys.grad_f1(states)
    out = np.empty_like(states)
    for f, sl in sys.slices():
        X, G = states[..., sl], g[..., sl]
        if f == SPHERE:
            out[..., sl] = np.cross(X, G)
        else:
            out[..., sl.start] = G[..., 1]
            out[..., sl.start + 1] = -G[..., 0]
    return out


def poisson_check(sys: ClassicalSystem, point, t_end: float, dt: float = 1e-3,
                  observable: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> float:
    """Max drift of ``f_2`` (``f_1`` when d = 1) along the RK4 flow of ``f_1``.

    ``point`` may be a single phase-space point or a stack of them; the
    stack is integrated together and the largest drift is returned.
    """
    if dt > 1e-3:
        raise ValueError("dt must be <= 1e-3")
    x = np.array(point, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    for f, sl in sys.slices():
        if f == SPHERE and np.abs(np.linalg.norm(x[:, sl], axis=1) - 1.0).max() > 1e-9:
            raise ValueError("point is not on the unit sphere factor")
    if observable is None:
        col = 1 if sys.d > 1 else 0
        observable = lambda s: sys.evaluate(s)[..., col]
    R = sys.plane_radius()
    plane = [sl for f, sl in sys.slices() if f == PLANE]

    def check_window(s):
        if R is None:
            return
        for sl in plane:
            if np.linalg.norm(s[:, sl], axis=1).max() > R:
                raise WindowExceededError(f"trajectory left the plane window of radius {R:g}")

    check_window(x)
    f0 = observable(x)
    drift = np.zeros(len(x))
    steps = int(round(t_end / dt))
    vf = lambda s: hamiltonian_vector_field(sys, s)
    for _ in range(steps):
        k1 = vf(x)
        k2 = vf(x + 0.5 * dt * k1)
        k3 = vf(x + 0.5 * dt * k2)
        k4 = vf(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        check_window(x)
        np.maximum(drift, np.abs(observable(x) - f0), out=drift)
    return float(drift[0] if single else drift.max())


def random_phase_points(sys: ClassicalSystem, count: int, seed: int = 0,
                        plane_radius: float = 1.0) -> np.ndarray:
    """Seeded random points: uniform on sphere factors, uniform disk in planes."""
    rng = np.random.default_rng(seed)
    cols = []
    for f in sys.factors:
        if f == SPHERE:
            v = rng.normal(size=(count, 3))
            cols.append(v / np.linalg.norm(v, axis=1, keepdims=True))
        else:
            r = plane_radius * np.sqrt(rng.uniform(size=count))
            a = rng.uniform(0.0, 2.0 * np.pi, size=count)
            cols.append(np.column_stack([r * np.cos(a), r * np.sin(a)]))
    return np.concatenate(cols, axis=1)
