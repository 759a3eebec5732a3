import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from jointspec.errors import (
    ConfigurationError,
    DegreeCapError,
    NonCommutingError,
    ParameterMismatchError,
    TruncationError,
    UnknownModelError,
)
from jointspec.operators import HermitianOperator, SemiclassicalParam, commutator, oscillator, spin_triple
from jointspec.quantize import (
    CommutingFamily,
    PolynomialSymbol,
    ToricModel,
    build_jaynes_cummings,
    jc_block_family,
    jc_full_family,
    jc_hbar,
    shifted_family,
    toeplitz_s2,
    toeplitz_sphere,
    toeplitz_subprincipal,
    toeplitz_z_diagonal_exact,
    toric_family,
    weyl_quantize,
)
from jointspec.spectra import joint_spectrum


from oracles import quadrature_toeplitz


SYMBOLS = {
    "x": lambda x, y, z: x,
    "y": lambda x, y, z: y,
    "z": lambda x, y, z: z,
}


@pytest.mark.parametrize("k", range(1, 9))
@pytest.mark.parametrize("sym", ["x", "y", "z"])
def test_toeplitz_matches_quadrature(sym, k):
    ref = quadrature_toeplitz(SYMBOLS[sym], k)
    assert np.abs(toeplitz_s2(sym, k).entries - ref).max() <= 1e-8


@pytest.mark.parametrize("k", [1, 3, 6])
def test_toeplitz_quadratic_symbol_matches_quadrature(k):
    poly = {(1, 0, 1): 1.0, (0, 2, 0): -0.5, (0, 0, 0): 0.25}
    ref = quadrature_toeplitz(lambda x, y, z: x * z - 0.5 * y * y + 0.25, k)
    assert np.abs(toeplitz_sphere(poly, k).entries - ref).max() <= 1e-8


def test_quadrature_oracle_agrees_with_adaptive_dblquad():
    # independent adaptive check of the grid oracle on a few entries
    k = 2
    grid = quadrature_toeplitz(SYMBOLS["x"], k)

    def inner(i, j, f):
        def amp(th, ph, m):
            return np.sin(th / 2) ** m * np.cos(th / 2) ** (k - m)
        re = integrate.dblquad(
            lambda th, ph: f(th, ph) * amp(th, ph, i) * amp(th, ph, j)
            * math.cos((j - i) * ph) * math.sin(th), 0, 2 * math.pi, 0, math.pi)[0]
        return re

    fx = lambda th, ph: math.sin(th) * math.cos(ph)
    one = lambda th, ph: 1.0
    g10 = inner(1, 0, fx)
    n0, n1 = inner(0, 0, one), inner(1, 1, one)
    assert abs(g10 / math.sqrt(n0 * n1) - grid[1, 0].real) < 1e-8


# ---------------------------------------------------------------- exact diagonal

@pytest.mark.parametrize("k", range(1, 65))
def test_toeplitz_z_diagonal_exact(k):
    exact = toeplitz_z_diagonal_exact(k)
    assert exact == [Fraction(k - 2 * j, k + 2) for j in range(k + 1)]
    assert list(toeplitz_s2("z", k).diagonal) == [float(v) for v in exact]


def test_toeplitz_examples():
    assert np.array_equal(toeplitz_s2("z", 2).diagonal, [0.5, 0.0, -0.5])
    assert np.array_equal(toeplitz_s2("z", 1).diagonal, [1 / 3, -1 / 3])
    for k in (3, 10, 17):
        assert abs(np.trace(toeplitz_s2("z", k).entries)) < 1e-14
    assert toeplitz_s2("x", 3).entries[1, 0] == pytest.approx(math.sqrt(3) / 5, abs=1e-15)
    with pytest.raises(ValueError):
        toeplitz_s2("w", 3)


def test_toeplitz_of_sphere_constraint_is_identity():
    k = 7
    op = toeplitz_sphere({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}, k)
    assert np.abs(op.entries - np.eye(k + 1)).max() < 1e-13


def test_subprincipal_examples():
    k = 10
    assert np.array_equal(toeplitz_subprincipal("z", k).entries, toeplitz_s2("z", k).entries)
    op = toeplitz_subprincipal("z", k, 1)
    assert np.allclose(op.entries, toeplitz_s2("z", k).entries + 0.1 * np.eye(k + 1), atol=1e-15)
    op = toeplitz_subprincipal("z", 4, "z")
    expected = [(4 - 2 * j) / 6 * 1.25 for j in range(5)]
    assert np.allclose(op.diagonal, expected, atol=1e-15)
    with pytest.raises(DegreeCapError):
        toeplitz_subprincipal("z", 4, {(0, 0, 3): 1.0})


# ---------------------------------------------------------------- Weyl

def test_weyl_examples():
    o = oscillator(6, 1.0)
    assert np.allclose(weyl_quantize(PolynomialSymbol({(0, 0): 1.0}), o).entries, np.eye(6))
    U, V = o.position.entries, o.momentum.entries
    uv = weyl_quantize(PolynomialSymbol({(1, 1): 1.0}), o).entries
    assert np.allclose(uv, 0.5 * (U @ V + V @ U), atol=1e-15)
    h = weyl_quantize(PolynomialSymbol({(2, 0): 0.5, (0, 2): 0.5}), o).entries
    assert np.allclose(h[:5, :5], np.diag(np.arange(5) + 0.5), atol=1e-14)


def test_weyl_symmetrization_of_cubic():
    o = oscillator(8, 0.5)
    U, V = o.position.entries, o.momentum.entries
    got = weyl_quantize(PolynomialSymbol({(2, 1): 1.0}), o).entries
    assert np.allclose(got, (U @ U @ V + U @ V @ U + V @ U @ U) / 3.0, atol=1e-14)


def test_weyl_errors():
    with pytest.raises(DegreeCapError):
        PolynomialSymbol({(5, 4): 1.0})
    with pytest.raises(TruncationError):
        weyl_quantize(PolynomialSymbol({(2, 1): 1.0}), oscillator(3, 1.0))


coef = st.floats(-4, 4, allow_nan=False).map(lambda c: round(c * 8) / 8)
monos = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coef, max_size=4)


@given(monos, monos)
def test_weyl_is_linear(p, q):
    o = oscillator(9, 0.25)
    P, Q = PolynomialSymbol(p), PolynomialSymbol(q)
    lhs = weyl_quantize(P + Q, o).entries
    rhs = weyl_quantize(P, o).entries + weyl_quantize(Q, o).entries
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + np.abs(rhs).max())


@given(st.integers(0, 6))
def test_weyl_pure_powers(a):
    o = oscillator(10, 0.5)
    U = o.position.entries
    got = weyl_quantize(PolynomialSymbol({(a, 0): 1.0}), o).entries
    assert np.allclose(got, np.linalg.matrix_power(U, a), atol=1e-13)


# ---------------------------------------------------------------- Jaynes-Cummings

def test_jc_block_examples():
    blocks = build_jaynes_cummings(1, 2)
    assert jc_hbar(1) == 1.0
    assert blocks[0].f1_value == 0.0 and np.array_equal(blocks[0].f2_block, [[0.0]])
    assert blocks[1].f1_value == 1.0
    assert blocks[1].f2_block[1, 0] == pytest.approx(1 / (2 * math.sqrt(2)), abs=1e-16)
    ev = np.linalg.eigvalsh(blocks[1].f2_block)
    assert np.allclose(ev, [-1 / (2 * math.sqrt(2)), 1 / (2 * math.sqrt(2))], atol=1e-16)
    assert np.allclose(np.linalg.eigvalsh(blocks[2].f2_block), [-0.5, 0.5], atol=1e-15)


@given(st.integers(0, 12), st.integers(0, 40))
def test_jc_f1_progression(n, t):
    h = jc_hbar(n)
    for blk in build_jaynes_cummings(n, t):
        m = blk.f1_value / h - (1 - n) / 2
        assert abs(m - round(m)) * h <= 1e-12 and round(m) >= 0
        assert blk.dim == min(blk.T, n) + 1


def test_jc_full_n0():
    fam = jc_full_family(0, 6)
    h = jc_hbar(0)
    assert np.array_equal(fam.ops[1].entries, np.zeros((6, 6)))
    assert np.allclose(fam.ops[0].diagonal, h * (np.arange(6) + 0.5), atol=1e-15)


def test_jc_full_matches_blocks_n1():
    full = joint_spectrum(jc_full_family(1, 8))
    h = jc_hbar(1)
    pts = np.repeat(full.points, full.multiplicities, axis=0)
    pts = pts[pts[:, 0] <= h * 6 + 0.25 * h]
    pts = pts[np.lexsort(pts.T[::-1])]
    ref = joint_spectrum(jc_block_family(1, 6))
    assert pts.shape == ref.points.shape
    assert np.abs(pts - ref.points).max() <= 1e-12


def test_jc_full_commutes_below_truncation_edge():
    trunc = 10
    fam = jc_full_family(2, trunc)
    c = commutator(*fam.ops)
    keep = [j * trunc + m for j in range(3) for m in range(trunc - 1)]
    assert np.abs(c[np.ix_(keep, keep)]).max() <= 1e-12


# ---------------------------------------------------------------- families

def test_family_validation():
    s = spin_triple(2, 1.0)
    with pytest.raises(NonCommutingError):
        CommutingFamily((s.x_hat, s.y_hat), None, 0.0)
    other = HermitianOperator.from_diagonal([1.0, 2.0, 3.0], SemiclassicalParam(0.5))
    with pytest.raises(ParameterMismatchError):
        CommutingFamily((s.z_hat, other), None, 0.0)
    with pytest.raises(ConfigurationError):
        CommutingFamily((), None, 0.0)


def test_toric_examples():
    fam = toric_family(ToricModel("S2", 2))
    assert fam.d == 1 and np.array_equal(fam.ops[0].diagonal, [0.5, 0, -0.5])
    js = joint_spectrum(toric_family(ToricModel("S2xS2", 2)))
    grid = {(a, b) for a in (-0.5, 0.0, 0.5) for b in (-0.5, 0.0, 0.5)}
    assert {tuple(p) for p in js.points} == grid
    assert (js.multiplicities == 1).all()
    for k in (1, 5, 30):
        assert toric_family(ToricModel("S2xS2", k)).max_commutator() == 0.0
    with pytest.raises(UnknownModelError):
        ToricModel("CP2", 3)
    with pytest.raises(ValueError):
        ToricModel("S2", 0)


def test_shifted_family():
    fam = shifted_family(toric_family(ToricModel("S2", 4)), 1.0)
    assert np.allclose(fam.ops[0].diagonal, np.array([4, 2, 0, -2, -4]) / 6 + 1)
    assert fam.classical.offset == (1.0,)
