import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from jointspec.geometry import (
    ConvexPolygon,
    Interval,
    convex_hull,
    distance_to_hull,
    halfplane_intersection,
    hausdorff,
    unit_directions,
)
from jointspec.spectra import jc_joint_spectrum


def test_hull_single_point_degenerate():
    h = convex_hull([[0.0, 0.0]])
    assert h.degenerate and h.vertices.tolist() == [[0.0, 0.0]]


def test_hull_square_with_center():
    h = convex_hull([[0.5, 0.5], [-0.5, 0.5], [0.5, -0.5], [-0.5, -0.5], [0, 0]])
    assert not h.degenerate
    assert h.vertices.tolist() == [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]
    assert h.area() == pytest.approx(1.0)


def test_hull_collinear_is_segment():
    h = convex_hull([[0, 0], [1, 1], [2, 2], [0.5, 0.5]])
    assert h.degenerate and len(h) == 2


def test_hull_interval_1d():
    assert convex_hull(np.array([0.3, -1.0, 2.0])) == Interval(-1.0, 2.0)


def test_jc_hull_contains_origin():
    h = jc_joint_spectrum(5, 40).hull()
    assert isinstance(h, ConvexPolygon) and h.contains([[0.0, 0.0]])[0]


def test_hausdorff_examples():
    a = np.random.default_rng(0).normal(size=(20, 2))
    assert hausdorff(a, a) == 0.0
    k = 2
    assert hausdorff(Interval(-k / (k + 2), k / (k + 2)), Interval(-1, 1)) == 0.5
    sq = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    pt = convex_hull([[0.0, 0.0]])
    assert hausdorff(pt, sq) == pytest.approx(math.sqrt(2))
    assert hausdorff(np.array([[0.0, 0.0]]), sq.vertices) == pytest.approx(math.sqrt(2))
    with pytest.raises(TypeError):
        hausdorff(sq, sq.vertices)


def test_polygon_hausdorff_uses_edges():
    big = convex_hull([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    diamond = convex_hull([[1, 0], [0, 1], [-1, 0], [0, -1]])
    assert hausdorff(big, diamond) == pytest.approx(math.sqrt(2) / 2)


def test_distance_to_hull():
    sq = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    d = distance_to_hull([[0.5, 0.5], [2, 0.5], [2, 2]], sq)
    assert np.allclose(d, [0, 1, math.sqrt(2)])
    assert distance_to_hull(np.array([3.0, 0.0]), Interval(-1, 1)).tolist() == [2.0, 0.0]


def test_halfplane_intersection_square():
    n = np.array([[1, 0], [0, 1], [-1, 0], [0, -1.0]])
    p = halfplane_intersection(n, np.ones(4))
    assert np.allclose(p.vertices, [[-1, -1], [1, -1], [1, 1], [-1, 1]])
    with pytest.raises(ValueError):
        halfplane_intersection(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([-1.0, -1.0]))


def test_halfplane_redundant_constraints_pruned():
    dirs = unit_directions(32)
    sq = convex_hull([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    p = halfplane_intersection(dirs, sq.support(dirs) + 1.0)
    assert len(p) == 32
    p2 = halfplane_intersection(np.vstack([dirs, [[1, 0]]]), np.append(sq.support(dirs), 5.0))
    assert hausdorff(p2, sq) < 1e-9


def test_hull_idempotent():
    pts = np.random.default_rng(1).normal(size=(200, 2))
    h = convex_hull(pts)
    assert convex_hull(h.vertices) == h


coords = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
clouds = st.integers(1, 25).flatmap(lambda m: arrays(np.float64, (m, 2), elements=coords))


@given(clouds, clouds, clouds)
def test_hausdorff_symmetry_and_triangle(a, b, c):
    ab, ba = hausdorff(a, b), hausdorff(b, a)
    assert ab == ba
    assert hausdorff(a, c) <= ab + hausdorff(b, c) + 1e-9


def test_hausdorff_seeded_trials():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        a, b, c = (rng.normal(size=(rng.integers(1, 40), 2)) for _ in range(3))
        assert hausdorff(a, b) == hausdorff(b, a)
        assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12


@given(clouds)
def test_hull_contains_its_points(pts):
    h = convex_hull(pts)
    if not h.degenerate:
        assert (distance_to_hull(pts, h) <= 1e-9 * (1 + np.abs(pts).max())).all()
