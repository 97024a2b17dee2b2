import math
from fractions import Fraction

import numpy as np
import pytest

import tropcy as tc
from helpers import DIAMOND, REFLEXIVE_POLYGONS, SQUARE, random_polygon, transform, unimodular


@pytest.fixture
def square():
    return tc.convex_hull(SQUARE + [[0, 0], [1, 0]])


def test_convex_hull(square):
    assert square.vertices == ((-1, -1), (-1, 1), (1, -1), (1, 1))
    assert square.dim == 2 and square.is_full_dimensional
    assert len(square.facets) == 4
    assert all(f.offset == 1 for f in square.facets)
    assert square.is_lattice
    assert square.contains((Fraction(1, 2), -1))
    assert not square.contains((2, 0))
    assert square.relative_interior_contains((0, 0))
    assert not square.relative_interior_contains((1, 0))


def test_lower_dimensional_hull():
    segment = tc.convex_hull([[0, 0, 0], [2, 2, 0], [1, 1, 0]])
    assert segment.dim == 1
    assert segment.vertices == ((0, 0, 0), (2, 2, 0))
    assert len(segment.equations) == 2
    assert segment.contains((1, 1, 0))
    assert not segment.contains((1, 0, 0))


def test_convex_hull_rejects():
    with pytest.raises(ValueError, match="empty point set"):
        tc.convex_hull([])
    with pytest.raises(ValueError, match="different ranks"):
        tc.convex_hull([[0, 0], [1, 0, 0]])


def test_face_lattice(square):
    assert len(square.faces(0)) == 4
    assert len(square.faces(1)) == 4
    assert len(square.faces(2)) == 1
    edge = square.face(square.faces(1)[0])
    assert edge.dim == 1
    assert square.is_face(edge)
    assert not square.is_face(tc.convex_hull([[-1, -1], [1, 1]]))
    assert square.minimal_face([0]) == frozenset([0])


def test_reflexive_and_polar(square):
    assert tc.is_reflexive(square)
    assert tc.polar_dual(square) == tc.convex_hull(DIAMOND)
    assert tc.polar_dual(tc.convex_hull(DIAMOND)) == square
    assert not tc.is_reflexive(square.scale(2))
    with pytest.raises(ValueError, match="origin not interior"):
        tc.polar_dual(tc.convex_hull([[0, 0], [1, 0], [0, 1]]))


def test_lattice_points(square):
    assert len(tc.lattice_points(square)) == 9
    assert len(tc.boundary_lattice_points(square)) == 8
    assert tc.lattice_points(tc.convex_hull([[Fraction(1, 3)], [Fraction(2, 3)]])) == []
    triangle = tc.convex_hull([[-1, -1], [2, -1], [-1, 2]])
    assert len(tc.lattice_points(triangle.scale(2))) == 28


@pytest.mark.parametrize(
    "points, volume",
    [
        ([[0, 0], [1, 0], [0, 1]], Fraction(1, 2)),
        (SQUARE, Fraction(4)),
        ([[-1, -1], [1, -1]], Fraction(2)),
        ([[0, 0, 0], [2, 2, 0]], Fraction(2)),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], Fraction(1, 2)),
        ([[0, 0]], Fraction(1)),
    ],
)
def test_normalized_volume(points, volume):
    assert tc.normalized_volume(tc.convex_hull(points)) == volume


def test_normalized_volume_needs_lattice_vertices():
    with pytest.raises(ValueError, match="non-lattice"):
        tc.normalized_volume(tc.convex_hull([[0, 0], [Fraction(1, 2), 0]]))


def test_constructions(square):
    assert square.scale(0) == tc.convex_hull([[0, 0]])
    assert square.scale(2).vertices == ((-2, -2), (-2, 2), (2, -2), (2, 2))
    with pytest.raises(ValueError, match="negative"):
        square.scale(-1)
    assert square.translate((1, 1)) == tc.convex_hull([[0, 0], [2, 0], [0, 2], [2, 2]])
    assert square.centroid() == (0, 0)
    right = square.clip([((Fraction(1), Fraction(0)), Fraction(0))])
    assert right == tc.convex_hull([[0, -1], [1, -1], [0, 1], [1, 1]])
    assert square.intersect(tc.convex_hull(DIAMOND)) == tc.convex_hull(DIAMOND)


def test_minkowski_sum(square):
    low = tc.convex_hull([[-1, -1], [0, -1], [-1, 0], [0, 0]])
    high = tc.convex_hull([[0, 0], [1, 0], [0, 1], [1, 1]])
    assert tc.minkowski_sum(low, high) == square
    bottom = tc.convex_hull([[-1, -1], [0, -1]])
    assert tc.face_minkowski_test(low, high, bottom, tc.convex_hull([[0, 0], [1, 0]]))
    assert not tc.face_minkowski_test(low, high, bottom, tc.convex_hull([[0, 1], [1, 1]]))
    with pytest.raises(ValueError, match="F1 is not a face"):
        tc.face_minkowski_test(low, high, tc.convex_hull([[-1, -1], [0, 0]]), high)


def test_polytope_from_halfspaces():
    box = tc.polytope_from_halfspaces(
        [tc.HalfSpace(n, 1) for n in [(1, 0), (-1, 0), (0, 1), (0, -1)]],
        2,
    )
    assert box == tc.convex_hull(SQUARE)
    empty = tc.polytope_from_halfspaces([tc.HalfSpace((1,), -1), tc.HalfSpace((-1,), 0)], 1)
    assert empty.is_empty
    with pytest.raises(ValueError, match="unbounded"):
        tc.polytope_from_halfspaces([tc.HalfSpace((1,), 0)], 1)


def test_halfspace():
    h = tc.HalfSpace.from_inequality((2, 4), 2)
    assert h.normal == (1, 2) and h.offset == -1
    assert h.contains((1, 0)) and h.is_tight((1, 0))
    assert not h.negated().contains((2, 0))
    with pytest.raises(ValueError, match="not primitive"):
        tc.HalfSpace((2, 0), 1)
    with pytest.raises(ValueError, match="zero normal"):
        tc.HalfSpace((0, 0), 1)


CUBE = [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
TETRAHEDRON = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3], [-1, -1, -1]]
SIMPLEX_4D = [[4 if i == j else -1 for j in range(4)] for i in range(4)] + [[-1] * 4]
TESSERACT = [[(k >> i & 1) * 2 - 1 for i in range(4)] for k in range(16)]


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("vertices", REFLEXIVE_POLYGONS)
def test_polar_involution_on_reflexive_polygons(vertices, seed):
    U = unimodular(np.random.default_rng(seed))
    P = tc.convex_hull(transform(vertices, U))
    assert tc.is_reflexive(P)
    Q = tc.polar_dual(P)
    assert tc.is_reflexive(Q)
    assert tc.polar_dual(Q) == P
    assert tc.normalized_volume(P) == len(tc.boundary_lattice_points(P)) / 2


@pytest.mark.parametrize(
    "vertices, n_polar",
    [
        (CUBE, 6),
        (TETRAHEDRON, 4),
        pytest.param(SIMPLEX_4D, 5, marks=pytest.mark.slow),
        pytest.param(TESSERACT, 8, marks=pytest.mark.slow),
    ],
    ids=["cube", "tetrahedron", "simplex-4d", "tesseract"],
)
def test_polar_involution_in_higher_rank(vertices, n_polar):
    P = tc.convex_hull(vertices)
    assert tc.is_reflexive(P)
    Q = tc.polar_dual(P)
    assert len(Q.vertices) == n_polar
    assert tc.is_reflexive(Q)
    assert tc.polar_dual(Q) == P


@pytest.mark.parametrize("seed", range(5))
def test_volume_scales_with_dimension(seed):
    rng = np.random.default_rng(seed)
    P = random_polygon(rng)
    segment = tc.convex_hull(rng.integers(-3, 4, size=(2, 3)).tolist())
    for Q in (P, segment, tc.convex_hull(TETRAHEDRON)):
        volume = tc.normalized_volume(Q)
        for k in range(1, 5):
            assert tc.normalized_volume(Q.scale(k)) == k**Q.dim * volume


@pytest.mark.parametrize("seed", range(10))
def test_lattice_counts_follow_ehrhart_polynomial(seed):
    P = random_polygon(np.random.default_rng(seed))
    area = tc.normalized_volume(P)
    boundary = len(tc.boundary_lattice_points(P))
    for k in range(1, 5):
        expected = area * k * k + Fraction(boundary, 2) * k + 1
        assert len(tc.lattice_points(P.scale(k))) == expected


@pytest.mark.parametrize(
    "vertices, count",
    [
        (CUBE, lambda k: (2 * k + 1) ** 3),
        (TETRAHEDRON, lambda k: math.comb(4 * k + 3, 3)),
    ],
    ids=["cube", "tetrahedron"],
)
def test_lattice_counts_in_rank_three(vertices, count):
    P = tc.convex_hull(vertices)
    for k in range(1, 5):
        assert len(tc.lattice_points(P.scale(k))) == count(k)


@pytest.mark.parametrize("seed", range(5))
def test_minkowski_sum_adds_support_values(seed):
    rng = np.random.default_rng(seed)
    P, Q = random_polygon(rng), random_polygon(rng)
    total = tc.minkowski_sum(P, Q)
    for u in rng.integers(-9, 10, size=(100, 2)).tolist():
        assert total.min_value(u) == P.min_value(u) + Q.min_value(u)
