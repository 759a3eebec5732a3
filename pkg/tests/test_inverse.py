import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointspec.errors import (
    ExtrapolationError,
    InsufficientDataError,
    NonRationalError,
    NotALatticeError,
    RoundingError,
    SimplicityError,
)
from jointspec.geometry import ConvexPolygon, Interval, convex_hull, hausdorff
from jointspec.inverse import (
    Polytope,
    delzant_check,
    extrapolate_hull,
    extrapolate_support,
    fit_lattice,
    isolated,
    recover,
    round_to_rational_polytope,
)
from jointspec.operators import SemiclassicalParam
from jointspec.quantize import ToricModel, toric_family
from jointspec.spectra import JointSpectrum, joint_spectrum

SQUARE = [[-1, -1], [1, -1], [1, 1], [-1, 1]]


def toric(name, k):
    return joint_spectrum(toric_family(ToricModel(name, k)))


# ---------------------------------------------------------------- lattice fits

def test_fit_lattice_s2_k10():
    fit = fit_lattice(toric("S2", 10))
    assert fit.spacing[0] == pytest.approx(1 / 6, abs=1e-15)
    assert fit.origin[0] == pytest.approx(-10 / 12, abs=1e-15)
    assert fit.residual <= 1e-12 and fit.isolated and fit.k == 10
    assert fit.spacing_ratio[0] == pytest.approx((1 / 6) / (2 * math.pi / 10))


def test_fit_lattice_s2xs2_k4():
    fit = fit_lattice(toric("S2xS2", 4))
    assert np.allclose(fit.spacing, [1 / 3, 1 / 3], atol=1e-15)
    assert np.allclose(fit.origin, [-2 / 3, -2 / 3], atol=1e-15)


def test_fit_lattice_errors():
    one = JointSpectrum(SemiclassicalParam(1.0), [[0.0]], [1])
    with pytest.raises(InsufficientDataError):
        fit_lattice(one)
    dup = JointSpectrum(SemiclassicalParam(1.0), [[0.0], [0.5]], [1, 2])
    with pytest.raises(SimplicityError) as exc:
        fit_lattice(dup)
    assert exc.value.point == (0.5,)
    bad = JointSpectrum(SemiclassicalParam(1.0), [[0.0], [1.0], [2.0], [3.45]], [1] * 4)
    with pytest.raises(NotALatticeError):
        fit_lattice(bad)


def test_isolated():
    assert isolated(np.array([[0.0, 0.0], [1.0, 0.0]]), 0.25)
    assert not isolated(np.array([[0.0, 0.0], [0.2, 0.0]]), 0.25)


dyadic = st.integers(-64, 64).map(lambda i: i / 8)
pos_dyadic = st.integers(1, 32).map(lambda i: i / 4)


@given(dyadic, dyadic, pos_dyadic, pos_dyadic, dyadic, dyadic, pos_dyadic, pos_dyadic,
       st.integers(2, 6), st.integers(2, 6))
def test_fit_lattice_affine_equivariance(o1, o2, s1, s2, b1, b2, a1, a2, m1, m2):
    i, j = np.meshgrid(np.arange(m1), np.arange(m2), indexing="ij")
    pts = np.column_stack([o1 + s1 * i.ravel(), o2 + s2 * j.ravel()])
    js = JointSpectrum(SemiclassicalParam(1.0), pts, np.ones(len(pts), dtype=int))
    A, b = np.array([a1, a2]), np.array([b1, b2])
    js2 = JointSpectrum(SemiclassicalParam(1.0), pts * A + b, np.ones(len(pts), dtype=int))
    f, g = fit_lattice(js), fit_lattice(js2)
    assert np.array_equal(g.origin, A * f.origin + b)
    assert np.array_equal(g.spacing, A * f.spacing)


# ---------------------------------------------------------------- extrapolation

def test_extrapolate_constant_hulls_identity():
    sq = convex_hull(SQUARE)
    out = extrapolate_hull([(h, sq) for h in (0.1, 0.05, 0.025)])
    assert len(out) == 4 and hausdorff(out, sq) <= 1e-12
    tri = convex_hull([[0, 0], [2, 0], [0, 1]])
    out = extrapolate_hull([(h, tri) for h in (0.3, 0.2, 0.1)])
    assert hausdorff(out, tri) <= 1e-12
    iv = extrapolate_hull([(h, Interval(-1.0, 2.0)) for h in (0.3, 0.2, 0.1)])
    assert iv == Interval(-1.0, 2.0)


def _linear_limit(ks):
    # exact least-squares intercept of k/(k+2) against hbar = 1/k
    h = 1.0 / np.array(ks, dtype=float)
    return np.polyfit(h, 1.0 / (1.0 + 2.0 * h), 1)[1]


@pytest.mark.parametrize("name", ["S2", "S2xS2"])
def test_extrapolate_catalog_k8_16_32(name):
    ks = (8, 16, 32)
    hulls = [(1.0 / k, toric(name, k).hull()) for k in ks]
    lin = extrapolate_hull(hulls)
    target = np.array(SQUARE if name == "S2xS2" else [[-1], [1]], dtype=float)
    err_lin = np.abs(lin.vertices - np.sign(lin.vertices) * np.abs(target[0])).max()
    # linear fit: vertex error equals the exact least-squares intercept deficit
    assert err_lin == pytest.approx(1.0 - _linear_limit(ks), abs=1e-12)
    # the quadratic option reaches the 5e-3 target
    quad = extrapolate_hull(hulls, order=2)
    assert hausdorff(quad, convex_hull(target) if name == "S2xS2" else Interval(-1, 1)) <= 5e-3


def test_extrapolate_errors():
    with pytest.raises(InsufficientDataError):
        extrapolate_hull([(0.1, Interval(-1, 1)), (0.1, Interval(-1, 1)), (0.05, Interval(-1, 1))])
    shrinking = [(h, Interval(-(4 * h - 0.2), 4 * h - 0.2)) for h in (0.25, 0.15, 0.1)]
    with pytest.raises(ExtrapolationError):
        extrapolate_hull(shrinking)
    sq = [(h, convex_hull(np.array(SQUARE) * (4 * h - 0.2))) for h in (0.25, 0.15, 0.1)]
    with pytest.raises(ExtrapolationError):
        extrapolate_hull(sq)


def test_extrapolation_residual_reported():
    hulls = [(1.0 / k, toric("S2xS2", k).hull()) for k in (8, 16, 32, 64)]
    ext = extrapolate_support(hulls)
    assert 0 < ext.residual < 1e-2


# ---------------------------------------------------------------- rounding

def test_round_near_square():
    p = convex_hull([[-1.002, -0.998], [1.002, -0.998], [1.002, 0.998], [-1.002, 0.998]])
    poly, deltas = round_to_rational_polytope(p, 20, tol=1e-2)
    assert poly.vertices == tuple((Fraction(x), Fraction(y)) for x, y in SQUARE)
    assert set(poly.edge_normals) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert deltas.max <= 3e-3 and poly.delzant


def test_round_exact_triangle_unchanged():
    poly, deltas = round_to_rational_polytope(convex_hull([[0, 0], [1, 0], [0, 1]]))
    assert poly.vertices == ((0, 0), (1, 0), (0, 1))
    assert deltas.max == 0.0


def test_round_irrational_slope():
    r2 = math.sqrt(2)
    p = convex_hull([[0, 0], [1, r2], [-1, 1]])
    with pytest.raises(RoundingError):
        round_to_rational_polytope(p, denominator_cap=3, tol=1e-3)
    _, deltas = round_to_rational_polytope(p, denominator_cap=3, tol=1.0)
    # slope sqrt(2) snaps to 3/2
    assert deltas.normal[0] == pytest.approx(abs(math.atan(1.5) - math.atan(r2)), abs=1e-12)


def test_round_interval():
    poly, deltas = round_to_rational_polytope(Interval(-1.001, 0.999), 20, 1e-2)
    assert poly.vertices == ((-1,), (1,)) and poly.delzant


# ---------------------------------------------------------------- Delzant

def test_delzant_examples():
    assert delzant_check(Polytope.from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])).delzant
    assert delzant_check(Polytope.from_vertices([(0, 0), (1, 0), (0, 1)])).delzant
    res = delzant_check(Polytope.from_vertices([(0, 0), (2, 0), (0, 1)]))
    assert not res.delzant
    assert abs(res.determinants[2]) == 2
    assert set(res.edge_vectors[2]) == {(0, -1), (2, -1)}
    assert delzant_check(Polytope.from_vertices([(0,), (3,)])).delzant


def test_delzant_rejects_floats():
    with pytest.raises(NonRationalError):
        Polytope.from_vertices([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


elementary = st.sampled_from([((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)),
                              ((1, 0), (-1, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1))])
polygons = st.sampled_from([
    [(0, 0), (1, 0), (1, 1), (0, 1)],
    [(0, 0), (2, 0), (0, 1)],
    [(0, 0), (3, 0), (1, 2), (0, 1)],
    [(0, 0), (1, 0), (2, 1), (2, 2), (0, 1)],
])


@given(polygons, st.lists(elementary, min_size=1, max_size=6),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_delzant_unimodular_invariance(verts, mats, shift):
    M = np.eye(2, dtype=int)
    for m in mats:
        M = np.array(m) @ M
    moved = [tuple(int(c) for c in M @ np.array(v) + shift) for v in verts]
    if round(np.linalg.det(M)) < 0:  # keep counterclockwise order
        moved = moved[::-1]
    a = delzant_check(Polytope.from_vertices(verts))
    b = delzant_check(Polytope.from_vertices(moved))
    assert a.delzant == b.delzant
    assert sorted(abs(d) for d in a.determinants) == sorted(abs(d) for d in b.determinants)


# ---------------------------------------------------------------- pipeline

@pytest.mark.parametrize("name,expected", [("S2", ((-1,), (1,))),
                                           ("S2xS2", tuple(tuple(v) for v in SQUARE))])
def test_recover_catalog(name, expected):
    report = recover([toric(name, k) for k in (8, 16, 32, 64)])
    assert report.recovered.vertices == expected
    assert report.delzant.delzant
    assert max(report.rounding.vertex) <= report.rounding_tol
    assert set(report.residuals()) >= {"extrapolation", "max_vertex_delta"}


def test_recover_needs_three_hbars():
    js = toric("S2", 8)
    with pytest.raises(InsufficientDataError):
        recover([js, js, js])
