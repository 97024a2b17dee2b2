import pytest

import tropcy as tc
from helpers import square_scenario

RAYS = [[1, 0], [0, 1], [-1, 0], [0, -1]]


def test_check_passes_on_bundled_scenarios(sq, p2):
    for deg in (sq, p2):
        report = deg.check()
        assert report.ok, report.failures()
        assert report.exit_code == 0
        assert not report.errors


def test_check_rows(sq):
    report = sq.check()
    labels = [row[0] for row in report.rows]
    assert labels[0] == "delta reflexive"
    assert "good subdivision" in labels and "strictly convex lift" in labels
    assert labels.count("good subdivision") == 1
    assert labels[-2:] == ["delta smooth", "hypersurface hypotheses"]
    assert report.rows[-1][1] is True


def test_check_reports_non_convex_h(write_scenario):
    values = {(1, 0): -1, (0, 1): 0, (-1, 0): 0, (0, -1): 0}
    path = write_scenario(
        square_scenario(h_values=[{"ray": list(r), "value": v} for r, v in values.items()])
    )
    report = tc.load(path).check()
    assert not report.ok
    assert report.exit_code == 2
    failure = report.failures()[0]
    assert failure[0] == "h integral and convex"
    assert "wall slack -1" in failure[1]


def test_check_reports_bad_partition(write_scenario):
    parts = [[[-1, -1], [1, -1]], [[0, 0], [0, 2]]]
    path = write_scenario(square_scenario(r=2, d=0, nef_partition={"parts": parts}))
    report = tc.load(path).check()
    assert report.exit_code == 2
    assert [row[0] for row in report.failures()] == ["nef partition"]


def test_explicit_h_drives_the_spheres(write_scenario):
    path = write_scenario(
        square_scenario(h_values=[{"ray": r, "value": 2} for r in RAYS])
    )
    deg = tc.load(path)
    assert deg.sphere_A.ambient == tc.convex_hull([[-2, -2], [2, -2], [2, 2], [-2, 2]])
    assert deg.sphere_A.total == 16
    assert set(deg.h_prime.ray_values.values()) == {1}


def test_subdivided_sigma_prime(write_scenario):
    cones = [
        [[1, 0], [1, 1]],
        [[1, 1], [0, 1]],
        [[0, 1], [-1, 0]],
        [[-1, 0], [0, -1]],
        [[0, -1], [1, 0]],
    ]
    path = write_scenario(square_scenario(sigma_prime=cones))
    deg = tc.load(path)
    assert len(deg.sigma_prime.rays) == 5
    assert deg.phi.value((1, 1)) == 2
    assert deg.h == deg.phi


def test_sigma_prime_must_refine(write_scenario):
    cones = [[[1, 1], [-1, 1]], [[-1, 1], [-1, -1]], [[-1, -1], [1, -1]], [[1, -1], [1, 1]]]
    deg = tc.load(write_scenario(square_scenario(sigma_prime=cones)))
    with pytest.raises(tc.ConditionError, match="does not refine"):
        deg.sigma_prime


def test_summary_and_repr(sq):
    assert repr(sq) == "Degeneration('sq', d=1, r=1)"
    assert sq.summary() == {"name": "sq", "d": 1, "r": 1, "mu": 8, "nu": 4}


def test_load_rejects_non_reflexive(write_scenario):
    path = write_scenario(square_scenario(delta_vertices=[[-2, -2], [2, -2], [2, 2], [-2, 2]]))
    with pytest.raises(tc.InputError, match="delta not reflexive"):
        tc.load(path)
