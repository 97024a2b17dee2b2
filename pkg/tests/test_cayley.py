from fractions import Fraction

import pytest

import tropcy as tc
from helpers import DIAMOND

E_T = (0, 0, 1)


def _other_cones(sq):
    # Cayley cones away from the first quadrant.
    return [
        c.rays
        for c in sq.cayley.tilde_fan.maximal_cones
        if (1, 0, 0) not in c.rays or (0, 1, 0) not in c.rays
    ]


def test_cayley_of_square(sq):
    cd = sq.cayley
    assert cd.ambient_rank == 3
    assert cd.heights == [1]
    assert cd.nabla_hcheck_prime == tc.convex_hull([[0, 0]])
    assert len(cd.tilde_delta.vertices) == 8
    assert len(cd.tilde_fan.rays) == 5
    assert E_T in cd.tilde_fan.rays
    assert len(cd.tilde_fan.maximal_cones) == 4
    assert cd.type_counts() == {1: 8, 2: 8, 3: 1}
    assert tc.cone_type(tc.Cone([(1, 0, 0), E_T])) == 2


def test_cayley_restricts_to_phi(sq):
    cd = sq.cayley
    for r in cd.tilde_fan.rays:
        expected = 0 if r == E_T else 1
        assert cd.tilde_phi_parts[0].value(r) == expected


def test_good_subdivision(sq):
    gs = sq.good
    assert gs.unimodular and gs.witness is None
    assert gs.fan is sq.cayley.tilde_fan


def test_h_tilde(sq):
    h_tilde = sq.h_tilde
    assert h_tilde.value(E_T) == 0
    assert all(v == 1 for r, v in h_tilde.ray_values.items() if r != E_T)
    assert tc.is_strictly_convex_pl(h_tilde)


def test_slice_mismatch(sq):
    cones = _other_cones(sq)
    cones += [[(1, 0, 0), (1, 1, 0), E_T], [(1, 1, 0), (0, 1, 0), E_T]]
    with pytest.raises(tc.ConditionError, match="slice mismatch"):
        tc.validate_good_subdivision(sq.cayley, tc.Fan(cones), sq.sigma_prime)


def test_ray_outside_nabla_hcheck_prime(sq):
    cones = _other_cones(sq)
    cones += [
        [(1, 0, 0), (0, 1, 0), (1, 1, 1)],
        [(1, 0, 0), (1, 1, 1), E_T],
        [(0, 1, 0), (1, 1, 1), E_T],
    ]
    with pytest.raises(tc.ConditionError, match="does not lie over") as info:
        tc.validate_good_subdivision(sq.cayley, tc.Fan(cones), sq.sigma_prime)
    assert info.value.witness == (1, 1, 1)


def test_relevant_cones(sq):
    relevant = sq.relevant
    assert len(relevant) == 8
    assert all(rc.nu == tc.convex_hull([[0, 0]]) for rc in relevant)
    assert sorted(rc.cone.dim for rc in relevant) == [2] * 4 + [3] * 4


def test_dual_intersection_complex(sq):
    dic = sq.dual_complex
    assert len(dic) == 8
    assert dic.dim == 1
    assert dic.f_vector() == [4, 4]
    assert dic.nabla_h == tc.convex_hull(DIAMOND)
    assert dic.cycle_count() == 1
    assert dic.euler_characteristic() == 0
    dic.verify()


def test_face_pair_complex_agrees(sq):
    assert sq.face_pair_complex.cells == sq.dual_complex.cells


def test_dual_complex_rejects_overlaps(sq):
    diamond = tc.convex_hull(DIAMOND)
    keys = {
        tc.convex_hull([[1, 0], [0, 1]]): [],
        tc.convex_hull([[1, 0], [0, -1]]): [],
        tc.convex_hull([[0, 1], [-1, 0]]): [],
        tc.convex_hull([[Fraction(1, 2), Fraction(1, 2)], [0, 1]]): [],
    }
    with pytest.raises(tc.ConditionError, match="common face"):
        tc.DualIntersectionComplex(keys, diamond).verify()


SHAPES = [
    ("sq", [4, 4]),
    ("p2", [3, 3]),
    pytest.param("p3_22", [4, 4], marks=pytest.mark.slow),
    pytest.param("quartic", [4, 6, 4], marks=pytest.mark.slow),
]


@pytest.mark.parametrize("name, f_vector", SHAPES)
def test_dual_intersection_complex_of_every_scenario(request, name, f_vector):
    deg = request.getfixturevalue(name)
    dic = deg.dual_complex
    assert dic.dim == deg.npd.rank - deg.npd.r == len(f_vector) - 1
    assert dic.f_vector() == f_vector
    assert dic.euler_characteristic() == (2 if dic.dim == 2 else 0)
    dic.verify()
    assert dic.nabla_h == tc.minkowski_sum(deg.npd.nabla, deg.cayley.nabla_hcheck_prime)


@pytest.mark.parametrize("name, f_vector", SHAPES)
def test_face_pair_complex_agrees_on_every_scenario(request, name, f_vector):
    deg = request.getfixturevalue(name)
    assert deg.face_pair_complex.cells == deg.dual_complex.cells
    assert deg.face_pair_complex.f_vector() == f_vector
