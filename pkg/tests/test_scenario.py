from fractions import Fraction

import pytest

import tropcy as tc
from helpers import DIAMOND, SQUARE, square_scenario


@pytest.mark.parametrize("name", tc.BUNDLED_SCENARIOS)
def test_bundled_scenarios_parse(name):
    scenario = tc.parse_scenario(name)
    assert scenario.name == name
    assert scenario.rank == scenario.d + scenario.r
    assert tc.is_reflexive(scenario.delta)


def test_square_scenario():
    s = tc.parse_scenario("sq")
    assert s.parts == [[(-1, -1), (1, -1), (1, 1), (-1, 1)]]
    assert s.ray_assignment is None
    assert s.h_values is None and s.sigma_prime is None
    assert s.solver.s == 1 and s.solver.tol == 1e-9 and s.solver.max_iter == 100
    assert s.counting.k_max is None


def test_ray_assignment_is_zero_based():
    s = tc.parse_scenario("p3_22")
    assert s.parts is None
    assert s.ray_assignment[(1, 0, 0)] == 0
    assert s.ray_assignment[(-1, -1, -1)] == 1
    assert s.counting.k_max == 5


def test_optional_fields(write_scenario):
    rays = [[1, 0], [0, 1], [-1, 0], [0, -1]]
    path = write_scenario(
        square_scenario(
            h_values=[{"ray": r, "value": 2} for r in rays],
            sigma_prime=[[a, b] for a, b in zip(DIAMOND, DIAMOND[1:] + DIAMOND[:1])],
            solver={"s": "2", "tol": "1e-6", "k_max": 4, "threads": 2},
        )
    )
    s = tc.parse_scenario(path)
    assert s.name == "square" and s.path == path
    assert s.h_values == {tuple(r): Fraction(2) for r in rays}
    assert len(s.sigma_prime) == 4
    assert s.solver.s == 2 and s.solver.tol == 1e-6
    assert s.counting.k_max == 4 and s.counting.threads == 2


@pytest.mark.parametrize(
    "overrides, message",
    [
        ({"r": 2}, "rank inconsistency"),
        ({"delta_vertices": [[-2, -2], [2, -2], [2, 2], [-2, 2]]}, "delta not reflexive"),
        ({"colour": "red"}, "unknown field 'colour'"),
        (
            {"delta_vertices": [[-1, -1], [1, -1, 0]]},
            r"delta_vertices\[1\]: expected a list of 2 integers",
        ),
        (
            {"delta_vertices": [[-1, -1], ["1/2", -1]]},
            r"delta_vertices\[1\]\[0\]: expected an integer",
        ),
        ({"nef_partition": {"parts": [SQUARE], "ray_assignment": []}}, "exactly one of"),
        ({"h_values": [{"ray": [1, 0], "value": "1/2"}]}, r"h_values\[0\]\.value"),
        ({"solver": {"s": 0}}, r"solver\.s: expected an integer >= 1"),
        ({"solver": {"tolerance": 1}}, "unknown field 'tolerance'"),
    ],
)
def test_schema_errors(write_scenario, overrides, message):
    path = write_scenario(square_scenario(**overrides))
    with pytest.raises(tc.InputError, match=message):
        tc.parse_scenario(path)


def test_missing_field(write_scenario):
    data = square_scenario()
    del data["delta_vertices"]
    with pytest.raises(tc.InputError, match="missing field 'delta_vertices'"):
        tc.parse_scenario(write_scenario(data))


def test_malformed_json(write_scenario):
    path = write_scenario('{"rank": 2,\n  "d": }')
    with pytest.raises(tc.InputError, match=r":2:\d+:"):
        tc.parse_scenario(path)


def test_unknown_scenario():
    with pytest.raises(tc.InputError, match="no such scenario"):
        tc.parse_scenario("no_such_scenario")


def test_export_and_load_complexes(sq, tmp_path):
    spheres = {"A": sq.sphere_A.to_dict(), "B": sq.sphere_B.to_dict()}
    path = tc.export_json(spheres, tmp_path / "out" / "spheres.json")
    assert path.exists()
    loaded = tc.load_complexes(path)
    assert loaded["A"]["kind"] == "tropical-sphere-A"
    assert loaded["A"]["total"] == 8
    assert loaded["B"]["measures"] == [1, 1, 1, 1]
    assert set(loaded["A"]["cells"]) == set(sq.sphere_A.facets)


def test_export_json_formats_numbers(tmp_path):
    data = {"x": Fraction(1, 3), "y": 0.1, "z": [1, True, None]}
    path = tc.export_json(data, tmp_path / "n.json")
    text = path.read_text()
    assert '"x": "1/3"' in text
    assert '"y": "0.1"' in text
    assert '"1"' in text and "true" in text and "null" in text


def test_export_obj(sq, tmp_path):
    path = tc.export_obj(sq.sphere_A, tmp_path / "A.obj")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# tropical-sphere-A")
    assert sum(line.startswith("v ") for line in lines) == 4
    assert sum(line.startswith("l ") for line in lines) == 4
    with pytest.raises(tc.InputError, match="projection"):
        tc.export_obj(sq.sphere_A, tmp_path / "bad.obj", [[1, 0, 0]])


def test_export_obj_faces(quartic, tmp_path):
    identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    path = tc.export_obj(quartic.sphere_A, tmp_path / "A.obj", identity)
    lines = path.read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 4
    faces = [line for line in lines if line.startswith("f ")]
    assert len(faces) == 4
    assert all(len(f.split()) == 4 for f in faces)
