"""Self-adjoint matrix algebra and elementary quantum building blocks.

Spin operators come from the two-mode (Schwinger) construction restricted to
fixed total occupation ``n``; the oscillator is truncated in its number basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, ParameterMismatchError


@dataclass(frozen=True)
class SemiclassicalParam:
    """Semiclassical parameter ``hbar`` with optional integer ``k = 1/hbar``."""

    hbar: float
    k: Optional[int] = None

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        if self.k is not None:
            if int(self.k) != self.k or self.k < 1:
                raise ValueError(f"k must be a positive integer, got {self.k!r}")
            if self.hbar != 1.0 / self.k:
                raise ValueError("hbar must equal 1/k when k is given")

    @classmethod
    def from_k(cls, k: int) -> "SemiclassicalParam":
        return cls(1.0 / k, int(k))


class HermitianOperator:
    """Dense self-adjoint matrix tagged with its semiclassical parameter.

    The stored matrix is ``(A + A^*)/2``, so Hermiticity holds exactly.
    Operators known to be diagonal may be built with :meth:`from_diagonal`;
    the dense matrix is then only materialized on first access to
    :attr:`entries`, which keeps large commuting diagonal families cheap.
    """

    __slots__ = ("_entries", "_diag", "param", "dim")

    def __init__(self, entries, param: SemiclassicalParam):
        a = np.asarray(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
        a = 0.5 * (a + a.conj().T)
        a.flags.writeable = False
        self._entries = a
        self._diag = None
        self.param = param
        self.dim = a.shape[0]

    @classmethod
    def from_diagonal(cls, diag, param: SemiclassicalParam) -> "HermitianOperator":
        d = np.array(diag, dtype=float).ravel()
        if d.size < 1:
            raise DimensionMismatchError("empty diagonal")
        d.flags.writeable = False
        op = cls.__new__(cls)
        op._entries = None
        op._diag = d
        op.param = param
        op.dim = d.size
        return op

    @property
    def entries(self) -> np.ndarray:
        if self._entries is None:
            a = np.diag(self._diag.astype(complex))
            a.flags.writeable = False
            self._entries = a
        return self._entries

    @property
    def is_diagonal(self) -> bool:
        return self._diag is not None

    @property
    def diagonal(self) -> np.ndarray:
        """Real diagonal (exact for diagonal-stored operators)."""
        if self._diag is not None:
            return self._diag
        return np.diag(self._entries).real.copy()

    def __repr__(self):
        kind = "diagonal" if self.is_diagonal else "dense"
        return f"HermitianOperator(dim={self.dim}, {kind}, hbar={self.param.hbar:g})"

    def _check(self, other):
        if other.param != self.param:
            raise ParameterMismatchError(f"{self.param} != {other.param}")
        if other.dim != self.dim:
            raise DimensionMismatchError(f"{self.dim} != {other.dim}")

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._check(other)
        if self.is_diagonal and other.is_diagonal:
            return HermitianOperator.from_diagonal(self._diag + other._diag, self.param)
        return HermitianOperator(self.entries + other.entries, self.param)

    def scale(self, c: float) -> "HermitianOperator":
        if self.is_diagonal:
            return HermitianOperator.from_diagonal(c * self._diag, self.param)
        return HermitianOperator(c * self.entries, self.param)

    def shift(self, c: float) -> "HermitianOperator":
        """Return ``self + c * Identity``."""
        if self.is_diagonal:
            return HermitianOperator.from_diagonal(self._diag + c, self.param)
        return HermitianOperator(self.entries + c * np.eye(self.dim), self.param)


def identity(dim: int, param: SemiclassicalParam) -> HermitianOperator:
    return HermitianOperator.from_diagonal(np.ones(dim), param)


@dataclass(frozen=True)
class SpinTriple:
    x_hat: HermitianOperator
    y_hat: HermitianOperator
    z_hat: HermitianOperator
    n: int


def spin_triple(n: int, hbar: float) -> SpinTriple:
    """Spin operators on the ``n + 1`` states of total two-mode occupation ``n``.

    Basis index ``j`` is the occupation of the first mode. ``z_hat`` is
    ``diag(hbar * (j - n/2))``; ``x_hat`` and ``y_hat`` are tridiagonal with
    ``x_hat[j+1, j] = (hbar/2) sqrt((j+1)(n-j))`` and satisfy
    ``[x_hat, y_hat] = i hbar z_hat``. Number operators are normal ordered;
    the constant from writing ``a a^*`` instead cancels in ``z_hat``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    param = SemiclassicalParam(float(hbar))
    j = np.arange(n + 1, dtype=float)
    z = hbar * (j - n / 2.0)
    off = 0.5 * hbar * np.sqrt((j[:-1] + 1.0) * (n - j[:-1]))
    x = np.diag(off, -1).astype(complex)
    x = x + x.T
    y = np.diag(-1j * off, -1)
    y = y + y.conj().T
    return SpinTriple(
        x_hat=HermitianOperator(x, param),
        y_hat=HermitianOperator(y, param),
        z_hat=HermitianOperator.from_diagonal(z, param),
        n=n,
    )


@dataclass(frozen=True)
class OscillatorAlgebra:
    """Truncated ladder algebra in the number (Hermite) basis."""

    trunc: int
    lower: np.ndarray
    raise_: np.ndarray
    number: HermitianOperator
    position: HermitianOperator
    momentum: HermitianOperator
    param: SemiclassicalParam


def oscillator(trunc: int, hbar: float) -> OscillatorAlgebra:
    """Ladder matrices truncated to ``trunc`` number states.

    ``position = sqrt(hbar/2) (lower + raise)`` and
    ``momentum = -i sqrt(hbar/2) (lower - raise)``, the matrix of
    ``(hbar/i) d/du`` for ``lower = (hbar d/du + u) / sqrt(2 hbar)``.
    """
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    param = SemiclassicalParam(float(hbar))
    lower = np.diag(np.sqrt(np.arange(1, trunc, dtype=float)), 1)
    raise_ = lower.T.copy()
    lower.flags.writeable = False
    raise_.flags.writeable = False
    s = np.sqrt(hbar / 2.0)
    return OscillatorAlgebra(
        trunc=trunc,
        lower=lower,
        raise_=raise_,
        number=HermitianOperator.from_diagonal(np.arange(trunc, dtype=float), param),
        position=HermitianOperator(s * (lower + raise_), param),
        momentum=HermitianOperator(-1j * s * (lower - raise_), param),
        param=param,
    )


def tensor(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product ``a (x) b``."""
    if a.param != b.param:
        raise ParameterMismatchError(f"cannot tensor operators with {a.param} and {b.param}")
    if a.is_diagonal and b.is_diagonal:
        return HermitianOperator.from_diagonal(np.kron(a.diagonal, b.diagonal), a.param)
    return HermitianOperator(np.kron(a.entries, b.entries), a.param)


def commutator(a: HermitianOperator, b: HermitianOperator) -> np.ndarray:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    if a.is_diagonal and b.is_diagonal:
        return np.zeros((a.dim, a.dim), dtype=complex)
    A, B = a.entries, b.entries
    return A @ B - B @ A


def commutator_norm(a: HermitianOperator, b: HermitianOperator) -> float:
    """Max-entry absolute value of ``ab - ba``."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    if a.is_diagonal and b.is_diagonal:
        return 0.0
    c = commutator(a, b)
    return float(np.abs(c).max()) if c.size else 0.0
