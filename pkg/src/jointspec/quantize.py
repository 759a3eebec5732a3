"""Commuting operator families: Weyl, Jaynes-Cummings and Berezin-Toeplitz."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import classical
from .classical import ClassicalSystem
from .errors import (
    ConfigurationError,
    DegreeCapError,
    NonCommutingError,
    ParameterMismatchError,
    TruncationError,
    UnknownModelError,
)
from .operators import (
    HermitianOperator,
    OscillatorAlgebra,
    SemiclassicalParam,
    commutator_norm,
    identity,
    oscillator,
    spin_triple,
    tensor,
)

WEYL_DEGREE_CAP = 8
SPHERE_CORRECTION_DEGREE_CAP = 2


# --------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class CommutingFamily:
    """Pairwise commuting operators with a link to their principal symbols."""

    ops: Tuple[HermitianOperator, ...]
    classical: Optional[ClassicalSystem]
    commute_tol: float

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise ConfigurationError("a family needs at least one operator")
        p, dim = ops[0].param, ops[0].dim
        for op in ops[1:]:
            if op.param != p:
                raise ParameterMismatchError("family operators must share hbar")
            if op.dim != dim:
                raise ConfigurationError("family operators must share a dimension")
        if self.commute_tol < 0:
            raise ConfigurationError("commute_tol must be nonnegative")
        worst = self.max_commutator()
        if worst > self.commute_tol:
            raise NonCommutingError(
                f"commutator norm {worst:.3e} exceeds commute_tol {self.commute_tol:.3e}")

    @property
    def d(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].dim

    @property
    def param(self) -> SemiclassicalParam:
        return self.ops[0].param

    def max_commutator(self) -> float:
        worst = 0.0
        for a, b in itertools.combinations(self.ops, 2):
            worst = max(worst, commutator_norm(a, b))
        return worst


def _float_commute_tol(ops: Sequence[HermitianOperator]) -> float:
    # rounding-level bound for products of entries of this size
    scale = 1.0
    for op in ops:
        scale *= max(1.0, float(np.abs(op.entries).max()))
    return 64.0 * np.finfo(float).eps * scale * max(op.dim for op in ops) ** 0.5


# --------------------------------------------------------------------------
# Weyl quantization of polynomial symbols in one canonical pair (u, v)


@dataclass(frozen=True)
class PolynomialSymbol:
    """Real polynomial ``sum c[a, b] u^a v^b``, total degree at most 8."""

    terms: Mapping[Tuple[int, int], float]

    def __post_init__(self):
        clean = {}
        for (a, b), c in dict(self.terms).items():
            if a < 0 or b < 0 or int(a) != a or int(b) != b:
                raise ValueError(f"bad exponent pair {(a, b)}")
            c = float(c)
            if not np.isfinite(c):
                raise ValueError("coefficients must be finite reals")
            if c != 0.0:
                clean[(int(a), int(b))] = clean.get((int(a), int(b)), 0.0) + c
        object.__setattr__(self, "terms", clean)
        if self.degree > WEYL_DEGREE_CAP:
            raise DegreeCapError(f"degree {self.degree} exceeds cap {WEYL_DEGREE_CAP}")

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def __add__(self, other: "PolynomialSymbol") -> "PolynomialSymbol":
        t = dict(self.terms)
        for key, c in other.terms.items():
            t[key] = t.get(key, 0.0) + c
        return PolynomialSymbol(t)

    def __call__(self, u, v):
        return sum(c * np.power(u, a) * np.power(v, b) for (a, b), c in self.terms.items())


def _symmetrized_monomial(a: int, b: int, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    n = a + b
    dim = U.shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    count = 0
    for upos in itertools.combinations(range(n), a):
        upos = set(upos)
        prod = np.eye(dim, dtype=complex)
        for i in range(n):
            prod = prod @ (U if i in upos else V)
        total += prod
        count += 1
    return total / count


def weyl_quantize(p: PolynomialSymbol, osc: OscillatorAlgebra) -> HermitianOperator:
    """Weyl (fully symmetric) ordering of ``p`` in the truncated oscillator.

    Every monomial ``u^a v^b`` becomes the average over the distinct
    orderings of ``a`` position and ``b`` momentum factors. Products are
    taken between truncated matrices, so the top ``degree`` basis states
    carry truncation artifacts.
    """
    if p.degree > WEYL_DEGREE_CAP:
        raise DegreeCapError(f"degree {p.degree} exceeds cap {WEYL_DEGREE_CAP}")
    if osc.trunc <= p.degree:
        raise TruncationError(f"trunc={osc.trunc} must exceed the symbol degree {p.degree}")
    U, V = osc.position.entries, osc.momentum.entries
    out = np.zeros((osc.trunc, osc.trunc), dtype=complex)
    for (a, b), c in sorted(p.terms.items()):
        out += c * _symmetrized_monomial(a, b, U, V)
    return HermitianOperator(out, osc.param)


# --------------------------------------------------------------------------
# Jaynes-Cummings


def jc_hbar(n: int) -> float:
    """The semiclassical parameter fixed by ``2 = hbar (n + 1)``."""
    return 2.0 / (n + 1)


@dataclass(frozen=True)
class JCBlock:
    """Restriction of the JC pair to total excitation ``T`` (spin index + quanta)."""

    T: int
    f1_value: float
    f2_block: np.ndarray

    @property
    def dim(self) -> int:
        return self.f2_block.shape[0]


def build_jaynes_cummings(n: int, t_max: int) -> List[JCBlock]:
    """Exact invariant blocks of the quantum Jaynes-Cummings pair.

    In block ``T`` the basis is ``(j, m = T - j)`` for ``0 <= j <= min(n, T)``,
    with ``j`` the spin index and ``m`` the oscillator quantum number. The
    first operator is the scalar ``hbar (T + (1 - n)/2)``; the second only
    couples ``(j, m)`` to ``(j + 1, m - 1)``.
    """
    if n < 0 or t_max < 0:
        raise ValueError("n and t_max must be nonnegative")
    hbar = jc_hbar(n)
    pref = 0.5 * hbar * math.sqrt(0.5 * hbar)
    blocks = []
    for T in range(t_max + 1):
        size = min(T, n) + 1
        j = np.arange(size - 1, dtype=float)
        off = pref * np.sqrt((j + 1.0) * (n - j) * (T - j))
        f2 = np.diag(off, -1) + np.diag(off, 1)
        f2.flags.writeable = False
        blocks.append(JCBlock(T, hbar * (T + 0.5 * (1 - n)), f2))
    return blocks


def jc_block_family(n: int, t_max: int) -> CommutingFamily:
    """Direct sum of the JC blocks ``T <= t_max`` as one exact commuting pair."""
    blocks = build_jaynes_cummings(n, t_max)
    param = SemiclassicalParam(jc_hbar(n))
    dim = sum(b.dim for b in blocks)
    f1 = np.concatenate([np.full(b.dim, b.f1_value) for b in blocks])
    f2 = np.zeros((dim, dim))
    s = 0
    for b in blocks:
        f2[s:s + b.dim, s:s + b.dim] = b.f2_block
        s += b.dim
    ops = (HermitianOperator.from_diagonal(f1, param), HermitianOperator(f2, param))
    return CommutingFamily(ops, classical.catalog("JC"), _float_commute_tol(ops))


def jc_full_family(n: int, osc_trunc: int) -> CommutingFamily:
    """The JC pair assembled on spin (x) truncated oscillator.

    Both operators conserve the total excitation, and truncating the
    oscillator removes whole basis states without coupling the survivors to
    them, so the truncated pair still commutes up to rounding; blocks with
    ``T <= osc_trunc - 1`` are reproduced exactly. Basis order is
    ``(j, m) -> j * osc_trunc + m``.

    The spin factor enters with the two-mode ``y`` operator
    ``hbar/(2i) (a1 a2* - a2 a1*)``, which is ``-spin_triple(n).y_hat``;
    only this orientation makes the pair commute.
    """
    if osc_trunc < 1:
        raise ValueError("osc_trunc must be >= 1")
    hbar = jc_hbar(n)
    spin = spin_triple(n, hbar)
    osc = oscillator(osc_trunc, hbar)
    param = spin.z_hat.param
    h_osc = HermitianOperator.from_diagonal(hbar * (np.arange(osc_trunc) + 0.5), param)
    f1 = tensor(identity(n + 1, param), h_osc) + tensor(spin.z_hat, identity(osc_trunc, param))
    f2 = (tensor(spin.x_hat, osc.position) + tensor(spin.y_hat.scale(-1.0), osc.momentum)).scale(0.5)
    ops = (f1, f2)
    return CommutingFamily(ops, classical.catalog("JC"), _float_commute_tol(ops))


# --------------------------------------------------------------------------
# Berezin-Toeplitz operators on the sphere
#
# Sections of O(k) over CP^1 in the affine chart w, orthonormalized from the
# monomials w^j, j = 0..k. With t = |w|^2 the height function is
# z = (1 - t)/(1 + t) and x + iy = 2w/(1 + t). Every matrix element of a
# polynomial in (x, y, z) reduces to Beta integrals
#   int_0^inf t^a (1 + t)^(-b) dt = B(a + 1, b - a - 1).


@lru_cache(maxsize=None)
def _beta(a: int, b: int) -> Fraction:
    return Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))


def _radial(p: int, q: int, c: int, j: int, k: int) -> Fraction:
    """Radial integral of ``w^p wbar^q z^c`` between sections j+p-q and j."""
    # 2^(p+q) t^(j+p) (1 - t)^c / (1 + t)^(k + 2 + p + q + c)
    total = Fraction(0)
    for l in range(c + 1):
        a = j + p + l
        b = k + 2 + p + q + c
        total += (-1) ** l * math.comb(c, l) * _beta(a + 1, b - a - 1)
    return 2 ** (p + q) * total


def _norm(j: int, k: int) -> Fraction:
    return _beta(j + 1, k - j + 1)


SpherePoly = Dict[Tuple[int, int, int], float]
SphereSymbol = Union[str, float, int, Mapping[Tuple[int, int, int], float]]

_LINEAR = {"x": {(1, 0, 0): 1.0}, "y": {(0, 1, 0): 1.0}, "z": {(0, 0, 1): 1.0}}


def as_sphere_poly(sym: SphereSymbol) -> SpherePoly:
    """Normalize ``'x'``, a constant, or ``{(a, b, c): coef}`` for ``x^a y^b z^c``."""
    if isinstance(sym, str):
        try:
            return dict(_LINEAR[sym])
        except KeyError:
            raise ValueError(f"unknown sphere symbol {sym!r}") from None
    if isinstance(sym, (int, float)):
        return {(0, 0, 0): float(sym)} if sym else {}
    return {tuple(int(e) for e in key): float(c) for key, c in dict(sym).items() if c}


def _poly_degree(poly: SpherePoly) -> int:
    return max((sum(key) for key in poly), default=0)


def _expand_xy(a: int, b: int) -> Dict[Tuple[int, int], complex]:
    # x^a y^b = ((zeta + zetabar)/2)^a ((zeta - zetabar)/(2i))^b
    out: Dict[Tuple[int, int], complex] = {}
    for r in range(a + 1):
        for s in range(b + 1):
            p = r + s
            q = (a - r) + (b - s)
            coef = math.comb(a, r) * math.comb(b, s) * (-1) ** (b - s) / (2 ** a * (2j) ** b)
            out[(p, q)] = out.get((p, q), 0) + coef
    return out


def _toeplitz_matrix(poly: SpherePoly, k: int) -> np.ndarray:
    mat = np.zeros((k + 1, k + 1), dtype=complex)
    for (a, b, c), coef in poly.items():
        for (p, q), cz in _expand_xy(a, b).items():
            for j in range(k + 1):
                i = j + p - q
                if not 0 <= i <= k:
                    continue
                r = _radial(p, q, c, j, k)
                if r == 0:
                    continue
                if i == j:
                    val = float(r / _norm(j, k))
                else:
                    val = math.copysign(math.sqrt(r * r / (_norm(i, k) * _norm(j, k))), r)
                mat[i, j] += coef * cz * val
    return mat


def toeplitz_z_diagonal_exact(k: int) -> List[Fraction]:
    """Exact diagonal of the Toeplitz operator of ``z`` from the Beta integrals."""
    return [_radial(0, 0, 1, j, k) / _norm(j, k) for j in range(k + 1)]


def toeplitz_sphere(sym: SphereSymbol, k: int) -> HermitianOperator:
    """Berezin-Toeplitz operator of a polynomial in ``(x, y, z)`` at level ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    poly = as_sphere_poly(sym)
    param = SemiclassicalParam.from_k(k)
    if all(a == 0 and b == 0 for a, b, _ in poly):
        diag = np.zeros(k + 1)
        for (_, _, c), coef in poly.items():
            diag += coef * np.array([float(_radial(0, 0, c, j, k) / _norm(j, k))
                                     for j in range(k + 1)])
        return HermitianOperator.from_diagonal(diag, param)
    return HermitianOperator(_toeplitz_matrix(poly, k), param)


def toeplitz_s2(symbol: str, k: int) -> HermitianOperator:
    """Toeplitz operator of a coordinate function; ``z`` gives ``(k - 2j)/(k + 2)``."""
    if symbol not in _LINEAR:
        raise ValueError(f"symbol must be one of x, y, z; got {symbol!r}")
    return toeplitz_sphere(symbol, k)


def toeplitz_subprincipal(symbol: SphereSymbol, k: int,
                          correction: SphereSymbol = 0) -> HermitianOperator:
    """``T(f0) + T(f1)/k`` for a correction ``f1`` of degree at most 2."""
    corr = as_sphere_poly(correction)
    if _poly_degree(corr) > SPHERE_CORRECTION_DEGREE_CAP:
        raise DegreeCapError(f"correction degree {_poly_degree(corr)} exceeds "
                             f"{SPHERE_CORRECTION_DEGREE_CAP}")
    main = toeplitz_sphere(symbol, k)
    if not corr:
        return main
    return main + toeplitz_sphere(corr, k).scale(1.0 / k)


# --------------------------------------------------------------------------
# toric models

TORIC_MODELS = ("S2", "S2xS2")


@dataclass(frozen=True)
class ToricModel:
    name: str
    k: int

    def __post_init__(self):
        if self.name not in TORIC_MODELS:
            raise UnknownModelError(f"unknown toric model {self.name!r}; known: {TORIC_MODELS}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def moment_dim(self) -> int:
        return 1 if self.name == "S2" else 2


def toric_family(model: ToricModel) -> CommutingFamily:
    """Toeplitz quantization of the height functions; exactly commuting diagonals."""
    tz = toeplitz_s2("z", model.k)
    if model.name == "S2":
        return CommutingFamily((tz,), classical.catalog("S2"), 0.0)
    one = identity(model.k + 1, tz.param)
    ops = (tensor(tz, one), tensor(one, tz))
    return CommutingFamily(ops, classical.catalog("S2xS2"), 0.0)


def shifted_family(fam: CommutingFamily, offset) -> CommutingFamily:
    """Add ``offset[i] * Identity`` to each operator and shift the classical side."""
    off = np.broadcast_to(np.asarray(offset, dtype=float), (fam.d,))
    ops = tuple(op.shift(c) for op, c in zip(fam.ops, off))
    cl = classical.shifted(fam.classical, off) if fam.classical is not None else None
    return CommutingFamily(ops, cl, fam.commute_tol)
