from fractions import Fraction

import numpy as np
import pytest

import tropcy as tc
from helpers import DIAMOND, REFLEXIVE_POLYGONS, SQUARE, random_polygon, transform, unimodular


@pytest.fixture
def square():
    return tc.convex_hull(SQUARE)


@pytest.fixture
def phi(square):
    return tc.support_function(square)


def test_cone():
    c = tc.Cone([(2, 0), (1, 1), (0, 3)])
    assert c.rays == ((0, 1), (1, 0))
    assert c.dim == 2 and c.is_simplicial and c.is_unimodular
    assert c.contains((1, 1)) and not c.contains((-1, 1))
    assert c.relative_interior_contains((1, 2))
    assert not c.relative_interior_contains((1, 0))
    assert c.interior_point() == (1, 1)
    assert [f.rays for f in c.faces(1)] == [((0, 1),), ((1, 0),)]
    assert not tc.Cone([(1, 0), (1, 2)]).is_unimodular


def test_cone_rejects():
    with pytest.raises(ValueError, match="contains a line"):
        tc.Cone([(1, 0), (-1, 0)])
    with pytest.raises(ValueError, match="nonzero generator"):
        tc.Cone([(0, 0)])


def test_normal_fan(square):
    fan = tc.normal_fan(square)
    assert len(fan.maximal_cones) == 4
    assert fan.rays == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(fan.cones) == 8
    assert fan.is_complete and fan.is_simplicial
    assert len(fan.walls) == 4 and not fan.boundary_walls
    assert fan.locate((3, 1)) is not None
    assert tc.fan_polytope(fan) == tc.convex_hull(DIAMOND)
    assert tc.is_unimodular(fan) == (True, None)
    assert tc.is_smooth(square)
    fan.validate()


def test_normal_fan_of_diamond_is_not_unimodular():
    ok, witness = tc.is_unimodular(tc.normal_fan(tc.convex_hull(DIAMOND)))
    assert not ok
    assert not witness.is_unimodular
    assert not tc.is_smooth(tc.convex_hull(DIAMOND))


def test_overlapping_cones():
    fan = tc.Fan([[(1, 0), (0, 1)], [(1, 1), (-1, 1)]])
    with pytest.raises(tc.ConditionError, match="common face") as info:
        fan.validate()
    assert len(info.value.witness) == 2


def test_support_function(square, phi):
    assert set(phi.ray_values.values()) == {1}
    assert phi((2, 3)) == 5
    assert phi((-1, Fraction(1, 2))) == Fraction(3, 2)
    assert all(s == 2 for _, s in phi.wall_slacks())
    assert tc.is_convex_pl(phi) and tc.is_strictly_convex_pl(phi)
    assert tc.newton_polytope(phi) == square


def test_pl_arithmetic(phi):
    zero = phi - phi
    assert set(zero.ray_values.values()) == {0}
    assert tc.is_convex_pl(zero) and not tc.is_strictly_convex_pl(zero)
    assert (2 * phi)((1, 1)) == 4
    assert (phi + phi) == 2 * phi
    assert not tc.is_convex_pl(-phi)
    with pytest.raises(tc.ConditionError, match="not convex"):
        tc.newton_polytope(-phi)


def test_pl_function_rejects(square):
    fan = tc.normal_fan(square)
    with pytest.raises(ValueError, match="no value given"):
        tc.PLFunction(fan, {(1, 0): 1})
    values = {r: 1 for r in fan.rays}
    values[(1, 1)] = 2
    with pytest.raises(ValueError, match="non-rays"):
        tc.PLFunction(fan, values)
    other = tc.normal_fan(tc.convex_hull(DIAMOND))
    with pytest.raises(ValueError, match="different fans"):
        tc.support_function(square) + tc.support_function(tc.convex_hull(DIAMOND), other)


def test_pulling_subdivision(square, phi):
    diamond_fan = tc.normal_fan(tc.convex_hull(DIAMOND))
    fine = tc.pulling_subdivision(square)
    assert len(fine.rays) == 8
    assert len(fine.maximal_cones) == 8
    assert tc.is_unimodular(fine)[0]
    assert tc.is_refinement(fine, diamond_fan)
    assert not tc.is_refinement(diamond_fan, fine)
    lifted = tc.support_function(tc.convex_hull(DIAMOND), diamond_fan).on_fan(fine)
    assert lifted.value((1, 1)) == 1
    assert lifted.value((1, 0)) == 1
    with pytest.raises(ValueError, match="origin not interior"):
        tc.pulling_subdivision(tc.convex_hull([[0, 0], [1, 0], [0, 1]]))


def test_refinement_support_mismatch(square):
    with pytest.raises(tc.FanSupportError, match="support mismatch"):
        tc.is_refinement(tc.Fan([[(1, 0), (0, 1)]]), tc.normal_fan(square))


def _random_polytope(rng, rank):
    if rank == 2:
        return random_polygon(rng)
    while True:
        P = tc.convex_hull(rng.integers(-2, 3, size=(8, rank)).tolist())
        if P.is_full_dimensional:
            return P


@pytest.mark.parametrize("rank", [2, 3])
@pytest.mark.parametrize("seed", range(8))
def test_newton_polytope_inverts_support_function(seed, rank):
    P = _random_polytope(np.random.default_rng(seed), rank)
    phi = tc.support_function(P)
    assert tc.is_strictly_convex_pl(phi)
    assert tc.newton_polytope(phi) == P


@pytest.mark.parametrize("rank", [2, 3])
@pytest.mark.parametrize("seed", range(8))
def test_normal_fan_is_complete(seed, rank):
    rng = np.random.default_rng(seed)
    P = _random_polytope(rng, rank)
    fan = tc.normal_fan(P)
    assert fan.is_complete
    assert len(fan.maximal_cones) == len(P.vertices)
    fan.validate()
    for n in rng.integers(-5, 6, size=(20, rank)).tolist():
        assert fan.locate(n) is not None


@pytest.mark.parametrize("seed", range(5))
def test_normal_fan_of_transformed_reflexive_polygon(seed):
    vertices = REFLEXIVE_POLYGONS[seed]
    P = tc.convex_hull(transform(vertices, unimodular(np.random.default_rng(seed))))
    fan = tc.normal_fan(P)
    assert fan.is_complete
    assert tc.fan_polytope(fan) == tc.polar_dual(P)
