"""Joint spectra of commuting families and their semiclassical convergence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .classical import ClassicalSpectrum, classical_spectrum
from .errors import CollisionError, ConfigurationError, ExtrapolationError, NonCommutingError
from .geometry import Hull, convex_hull, distance_to_hull, hausdorff
from .operators import SemiclassicalParam
from .quantize import (
    CommutingFamily,
    ToricModel,
    build_jaynes_cummings,
    jc_hbar,
    shifted_family,
    toric_family,
)


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Distinct joint eigenvalues (rows of ``points``) with multiplicities."""

    param: SemiclassicalParam
    points: np.ndarray
    multiplicities: np.ndarray
    residual: float = 0.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        mult = np.array(self.multiplicities, dtype=int).ravel()
        if len(mult) != len(pts):
            raise ValueError("points and multiplicities differ in length")
        if (mult < 1).any():
            raise ValueError("multiplicities must be positive")
        order = np.lexsort(pts.T[::-1]) if len(pts) else np.arange(0)
        pts, mult = pts[order], mult[order]
        pts.flags.writeable = False
        mult.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def total_multiplicity(self) -> int:
        return int(self.multiplicities.sum())

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, JointSpectrum)
                and self.param.hbar == other.param.hbar
                and self.points.shape == other.points.shape
                and bool(np.all(self.points == other.points))
                and bool(np.all(self.multiplicities == other.multiplicities)))

    def hull(self) -> Hull:
        return convex_hull(self.points)

    def window(self, c: float) -> "JointSpectrum":
        keep = self.points[:, 0] <= c
        return JointSpectrum(self.param, self.points[keep], self.multiplicities[keep], self.residual)


def _clusters(values: np.ndarray, tol: float) -> List[np.ndarray]:
    """Index groups of maximal runs with consecutive gaps <= tol (sorted order)."""
    order = np.argsort(values, kind="stable")
    if len(order) == 0:
        return []
    breaks = np.nonzero(np.diff(values[order]) > tol)[0] + 1
    return np.split(order, breaks)


def default_cluster_tol(fam: CommutingFamily) -> float:
    diam = 0.0
    for op in fam.ops:
        if op.is_diagonal:
            w = op.diagonal
        else:
            w = np.linalg.eigvalsh(op.entries)
        diam = max(diam, float(w.max() - w.min()))
    return max(1e-9 * diam, 1e-11, 2.0 * fam.commute_tol)


def _diagonal_points(fam: CommutingFamily, tol: float):
    # same clusters as the recursion in joint_spectrum: each level splits the
    # groups of the previous level into gap-free runs of sorted values
    cols = np.column_stack([op.diagonal for op in fam.ops])
    labels = np.zeros(fam.dim, dtype=np.int64)
    for level in range(fam.d):
        v = cols[:, level]
        order = np.lexsort((v, labels))
        lab, vs = labels[order], v[order]
        brk = np.empty(len(order), dtype=bool)
        brk[0] = True
        brk[1:] = (lab[1:] != lab[:-1]) | (np.diff(vs) > tol)
        labels = np.empty_like(labels)
        labels[order] = np.cumsum(brk) - 1
    mult = np.bincount(labels)
    # anchor each mean at a member so identical values stay bit-exact
    anchor = np.zeros(len(mult), dtype=np.int64)
    anchor[labels] = np.arange(fam.dim)
    ref = cols[anchor]
    pts = np.column_stack([ref[:, j] + np.bincount(labels, weights=cols[:, j] - ref[labels, j]) / mult
                           for j in range(fam.d)])
    return pts, mult


def joint_spectrum(fam: CommutingFamily, cluster_tol: Optional[float] = None) -> JointSpectrum:
    """Joint eigenvalues by recursive simultaneous diagonalization.

    Diagonalize the first operator, group its eigenvalues into clusters
    (maximal runs with gaps <= ``cluster_tol``), compress the next operator
    to each cluster's eigenspace, and recurse. The reported residual is the
    largest ``||T_j v - lambda_j v||`` over the output eigenvectors.
    """
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(fam)
    if cluster_tol <= max(fam.commute_tol, 1e-12):
        raise ConfigurationError(
            f"cluster_tol={cluster_tol:g} must exceed max(commute_tol, 1e-12)")
    if all(op.is_diagonal for op in fam.ops):
        pts, mult = _diagonal_points(fam, cluster_tol)
        return JointSpectrum(fam.param, pts, mult, 0.0)

    mats = [op.entries for op in fam.ops]
    pts, mult, vecs, vals = [], [], [], []

    def rec(basis, level, prefix):
        sub = basis.conj().T @ mats[level] @ basis
        w, u = np.linalg.eigh(0.5 * (sub + sub.conj().T))
        for grp in _clusters(w, cluster_tol):
            b = basis @ u[:, grp]
            lam = prefix + [float(w[grp].mean())]
            if level + 1 == len(mats):
                pts.append(lam)
                mult.append(len(grp))
                vecs.append(b)
                vals.append(lam)
            else:
                rec(b, level + 1, lam)

    rec(np.eye(fam.dim, dtype=complex), 0, [])
    residual = 0.0
    for b, lam in zip(vecs, vals):
        for A, l in zip(mats, lam):
            r = np.linalg.norm(A @ b - l * b, axis=0).max()
            residual = max(residual, float(r))
    if residual > 100.0 * cluster_tol:
        raise NonCommutingError(
            f"joint eigenvector residual {residual:.3e} exceeds 100 x cluster_tol; "
            "the operators do not commute")
    return JointSpectrum(fam.param, np.array(pts), np.array(mult), residual)


def random_combination_check(fam: CommutingFamily, seed: int = 0,
                             collision_tol: float = 1e-10,
                             max_retries: int = 5) -> JointSpectrum:
    """Independent joint spectrum from one random combination ``sum c_j T_j``.

    Joint values are Rayleigh quotients on the combination's eigenvectors.
    Eigenvalues closer than ``collision_tol`` are accepted only when every
    operator is scalar on their span (a genuine joint degeneracy); an
    accidental collision triggers a retry with fresh coefficients.
    """
    rng = np.random.default_rng(seed)
    mats = [op.entries for op in fam.ops]
    for _ in range(max_retries + 1):
        c = rng.normal(size=fam.d)
        c /= np.linalg.norm(c)
        combo = sum(cj * A for cj, A in zip(c, mats))
        w, u = np.linalg.eigh(combo)
        pts, mult, residual, ok = [], [], 0.0, True
        for grp in _clusters(w, collision_tol):
            v = u[:, grp]
            lam = []
            for A in mats:
                sub = v.conj().T @ A @ v
                mean = float(np.trace(sub).real) / len(grp)
                if np.abs(sub - mean * np.eye(len(grp))).max() > collision_tol * 10:
                    ok = False
                    break
                lam.append(mean)
                residual = max(residual, float(np.linalg.norm(A @ v - mean * v, axis=0).max()))
            if not ok:
                break
            pts.append(lam)
            mult.append(len(grp))
        if ok:
            return JointSpectrum(fam.param, np.array(pts), np.array(mult), residual)
    raise CollisionError(f"eigenvalue collisions persisted after {max_retries} retries")


def jc_joint_spectrum(n: int, t_max: int) -> JointSpectrum:
    """JC joint spectrum for total excitations ``T <= t_max``, block by block."""
    pts = []
    for blk in build_jaynes_cummings(n, t_max):
        for lam in np.linalg.eigvalsh(blk.f2_block):
            pts.append((blk.f1_value, float(lam)))
    pts = np.array(pts)
    # rounding can produce -0.0 for the symmetric zero eigenvalue
    pts[pts == 0.0] = 0.0
    return JointSpectrum(SemiclassicalParam(jc_hbar(n)), pts, np.ones(len(pts), dtype=int))


def containment_margin(js: JointSpectrum, cs: ClassicalSpectrum) -> float:
    """Largest distance from a joint-spectrum point to the classical hull."""
    return float(distance_to_hull(js.points, cs.hull).max()) if len(js) else 0.0


@dataclass(frozen=True)
class ConvergenceResult:
    ks: Tuple[int, ...]
    hbars: np.ndarray
    distances: np.ndarray
    alpha: float
    intercept: float

    def rows(self):
        return list(zip(self.ks, self.hbars.tolist(), self.distances.tolist()))


def fit_power_law(hbars, distances) -> Tuple[float, float]:
    """Least squares for ``log d = alpha log hbar + intercept``."""
    x = np.log(np.asarray(hbars, dtype=float))
    y = np.log(np.asarray(distances, dtype=float))
    A = np.column_stack([x, np.ones_like(x)])
    (alpha, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(alpha), float(intercept)


def convergence_study(model: str, k_list: Sequence[int], shift=0.0,
                      resolution: int = 16) -> ConvergenceResult:
    """Hausdorff distance between quantum and classical hulls for each ``k``."""
    ks = [int(k) for k in k_list]
    if len(ks) < 4:
        raise ConfigurationError("convergence_study needs at least 4 values of k")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ConfigurationError("k values must be strictly increasing (hbar decreasing)")
    hbars, dists = [], []
    cl_hull = None
    for k in ks:
        fam = toric_family(ToricModel(model, k))
        if np.any(np.asarray(shift) != 0):
            fam = shifted_family(fam, shift)
        if cl_hull is None:
            cl_hull = classical_spectrum(fam.classical, resolution).hull
        js = joint_spectrum(fam)
        dist = hausdorff(js.hull(), cl_hull)
        if not np.isfinite(dist) or dist <= 0:
            raise ExtrapolationError(f"non-finite or zero distance at k={k}: {dist}")
        hbars.append(fam.param.hbar)
        dists.append(dist)
    alpha, intercept = fit_power_law(hbars, dists)
    return ConvergenceResult(tuple(ks), np.array(hbars), np.array(dists), alpha, intercept)
