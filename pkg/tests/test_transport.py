from fractions import Fraction

import numpy as np
import pytest

import tropcy as tc

CORNERS = [(-1, -1), (-1, 1), (1, -1), (1, 1)]


@pytest.fixture(scope="module")
def atoms(sq):
    return tc.discretize_target(sq.sphere_A, 1)


@pytest.fixture(scope="module")
def result(sq):
    return sq.solve()


def _is_corner(p):
    return tuple(p) in CORNERS


def test_discretize_target(atoms):
    assert len(atoms) == 8
    assert sum(atoms.masses) == 1
    for p, m in atoms:
        assert m == (Fraction(1, 6) if _is_corner(p) else Fraction(1, 12))
    assert atoms.points[0] == (-1, -1)
    assert atoms.array.shape == (8, 2)
    assert atoms.mass_array.sum() == pytest.approx(1.0)


def test_discretize_target_finer(sq):
    atoms = tc.discretize_target(sq.sphere_A, 2)
    assert len(atoms) == 16
    assert sum(atoms.masses) == 1
    assert (Fraction(1, 2), -1) in atoms.points
    with pytest.raises(ValueError, match="must be >= 1"):
        tc.discretize_target(sq.sphere_A, 0)


def test_laguerre_cells_at_zero(sq, atoms):
    dec = tc.laguerre_cells(sq.sphere_B, atoms, np.zeros(8))
    assert dec.total_mass == 1
    for p, g in zip(atoms.points, dec.masses):
        assert g == (Fraction(1, 4) if _is_corner(p) else 0)
    assert dec.nonempty() == [_is_corner(p) for p in atoms.points]
    with pytest.raises(ValueError, match="expected 8 weights"):
        tc.laguerre_cells(sq.sphere_B, atoms, np.zeros(3))


def test_dual_functional_at_zero(sq, atoms):
    value, grad = tc.dual_functional(sq.sphere_B, atoms, np.zeros(8))
    assert value == pytest.approx(1.0)
    assert grad.sum() == pytest.approx(0.0)
    for p, g in zip(atoms.points, grad):
        assert g == pytest.approx(-1 / 12 if _is_corner(p) else 1 / 12)


def test_dual_functional_at_optimum(sq, atoms):
    psi = np.array([0.0 if _is_corner(p) else -1 / 6 for p in atoms.points])
    dec = tc.laguerre_cells(sq.sphere_B, atoms, psi)
    value, grad = tc.dual_functional(sq.sphere_B, atoms, psi, dec)
    assert value == pytest.approx(35 / 36)
    assert np.abs(grad).max() < 1e-12
    assert dec.masses == pytest.approx([float(m) for m in atoms.masses])


def test_solver_converges_on_square(result, atoms):
    w = result.weights
    assert w.converged
    assert w.iterations <= 2
    assert w.residual <= 1e-9
    assert w[0] == 0
    for a, p in enumerate(atoms.points):
        assert w[a] == pytest.approx(0.0 if _is_corner(p) else -1 / 6, abs=1e-9)


def test_kantorovich_is_non_decreasing(result):
    K = result.weights.kantorovich()
    assert len(K) >= 2
    assert all(b >= a - 1e-12 for a, b in zip(K, K[1:]))
    assert all(step["mass"] == 1.0 for step in result.weights.history)
    assert K[-1] == pytest.approx(-35 / 36)


def test_residual_report(sq, result):
    report = result.report
    assert report.ok
    assert report.max_deviation <= 1e-9
    assert report.l1 <= 1e-8
    assert report.total_mass == pytest.approx(8.0)
    assert report.expected_total == 8.0
    assert len(report) == len(sq.sphere_B.facets) + 1


def test_convex_potential(sq, result, atoms):
    potential = result.potential
    assert potential((1, 0)) == pytest.approx(1 + 1 / 6)
    assert potential(np.array([[1.0, 0.0], [0.5, 0.5]])).shape == (2,)
    assert atoms.points[potential.argmax((0.5, 0.5))] == (-1, -1)
    rng = np.random.default_rng(0)
    directions = rng.normal(size=(50, 2))
    deviation = potential.max_deviation(sq.sphere_A.ambient.vertices, directions)
    assert deviation <= max(abs(x) for x in result.weights.psi) + 1e-9


def test_solver_reports_non_convergence(sq):
    params = tc.SolverParams(s=1, tol=1e-300, max_iter=1)
    result = sq.solve(params)
    assert not result.weights.converged
    assert result.weights.iterations == 1


def test_solver_params():
    params = tc.SolverParams()
    assert (params.s, params.tol, params.max_iter) == (1, 1e-9, 100)
    with pytest.raises(TypeError):
        tc.SolverParams(tol="small")
    with pytest.raises(ValueError):
        tc.SolverParams(armijo=1.5)
    with pytest.raises(TypeError, match="invalid type for .max_iter."):
        tc.SolverParams(max_iter=True)
    with pytest.raises(ValueError, match="expected >= 1; got 0"):
        tc.SolverParams(s=0)
    for name in ("tol", "min_step", "armijo"):
        with pytest.raises(TypeError, match=f"invalid type for .{name}.: expected .float."):
            tc.SolverParams(**{name: 1})
    assert tc.SolverParams(tol=1e-6, min_step=0.5, armijo=0.25).tol == 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("s", [1, 2])
def test_solver_on_projective_plane(p2, s):
    result = p2.solve(tc.SolverParams(s=s, tol=1e-9))
    w = result.weights
    assert w.converged and w.residual <= 1e-9
    K = w.kantorovich()
    assert all(b >= a - 1e-12 for a, b in zip(K, K[1:]))
    atoms = result.potential.atoms
    assert tc.laguerre_cells(p2.sphere_B, atoms, w.psi).total_mass == 1
    assert all(step["mass"] == 1.0 for step in w.history)
    assert result.report.ok
    rng = np.random.default_rng(s)
    directions = rng.uniform(-1e4, 1e4, size=(500, 2))
    deviation = result.potential.max_deviation(p2.sphere_A.ambient.vertices, directions)
    assert deviation <= np.abs(w.psi).max() + 1e-9


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_gradient_matches_central_differences(p2, seed):
    atoms = tc.discretize_target(p2.sphere_A, 1)
    rng = np.random.default_rng(seed)
    psi = rng.uniform(-0.05, 0.05, size=len(atoms))
    _, grad = tc.dual_functional(p2.sphere_B, atoms, psi)
    step = 1e-7
    for a in range(len(atoms)):
        e = np.zeros(len(atoms))
        e[a] = step
        hi, _ = tc.dual_functional(p2.sphere_B, atoms, psi + e)
        lo, _ = tc.dual_functional(p2.sphere_B, atoms, psi - e)
        assert (hi - lo) / (2 * step) == pytest.approx(grad[a], abs=1e-6)


def _with_tied_corner(atoms):
    # The corner (-1, -1) listed twice, its mass split 1 : 2.
    corner = atoms.masses[0]
    points = [atoms.points[0]] + list(atoms.points)
    masses = [corner / 3, corner * 2 / 3] + list(atoms.masses[1:])
    return tc.TargetAtoms(points, masses, atoms.s)


def test_tied_atoms_share_a_cell(sq, atoms):
    tied = _with_tied_corner(atoms)
    assert sum(tied.masses) == 1
    dec = tc.laguerre_cells(sq.sphere_B, tied, np.zeros(9))
    assert dec.total_mass == 1
    assert dec.masses[:2] == [Fraction(1, 12), Fraction(1, 6)]
    assert dec.masses[2:] == tc.laguerre_cells(sq.sphere_B, atoms, np.zeros(8)).masses[1:]
    value, _ = tc.dual_functional(sq.sphere_B, tied, np.zeros(9), dec)
    assert value == pytest.approx(1.0)


def test_tied_atoms_split_the_hessian(sq, atoms):
    from tropcy.transport import _hessian

    psi = np.array([0.0 if _is_corner(p) else -1 / 6 for p in atoms.points])
    tied = _with_tied_corner(atoms)
    psi_tied = np.concatenate([[0.0], psi])
    dec = tc.laguerre_cells(sq.sphere_B, tied, psi_tied)
    assert all(dec.nonempty())
    H = _hessian(sq.sphere_B, atoms, tc.laguerre_cells(sq.sphere_B, atoms, psi))
    Ht = _hessian(sq.sphere_B, tied, dec)
    assert np.abs(H).max() > 0
    assert Ht == pytest.approx(Ht.T)
    assert Ht.sum(axis=1) == pytest.approx(np.zeros(9), abs=1e-12)
    assert Ht[0, 2:] == pytest.approx(H[0, 1:] / 3)
    assert Ht[1, 2:] == pytest.approx(H[0, 1:] * 2 / 3)
    assert Ht[2:, 2:] == pytest.approx(H[1:, 1:])


@pytest.fixture(scope="module")
def p2_fine(p2):
    return p2.solve(tc.SolverParams(s=2, tol=1e-9, max_iter=200))


def _index(atoms):
    return {tuple(p): a for a, p in enumerate(atoms.points)}


@pytest.mark.slow
@pytest.mark.parametrize(
    "g, fixes_gauge",
    [
        (lambda x, y: (y, x), True),
        (lambda x, y: (-x - y, x), False),
    ],
    ids=["reflection", "rotation"],
)
def test_solution_follows_symmetries(p2_fine, g, fixes_gauge):
    w = p2_fine.weights
    assert w.converged
    atoms = p2_fine.potential.atoms
    index = _index(atoms)
    image = [index[g(*p)] for p in atoms.points]
    shift = w.psi[image] - w.psi
    assert np.ptp(shift) <= 1e-6
    if fixes_gauge:
        assert np.abs(shift).max() <= 1e-6


@pytest.mark.slow
def test_solution_is_gauge_invariant(p2):
    atoms = tc.discretize_target(p2.sphere_A, 1)
    psi0 = np.random.default_rng(3).uniform(-0.05, 0.05, size=len(atoms))
    params = tc.SolverParams(max_iter=200)
    first = tc.solve(p2.sphere_B, atoms, params, psi0=psi0)
    second = tc.solve(p2.sphere_B, atoms, params, psi0=psi0 + 0.37)
    assert first.weights.converged and second.weights.converged
    assert first.weights[0] == second.weights[0] == 0
    assert second.weights.psi == pytest.approx(first.weights.psi, abs=1e-6)


@pytest.mark.slow
def test_solver_with_perturbed_masses(p2):
    atoms = tc.discretize_target(p2.sphere_A, 1)
    bumps = np.random.default_rng(5).integers(0, 6, size=len(atoms))
    raw = [m * (10 + int(k)) for m, k in zip(atoms.masses, bumps)]
    total = sum(raw, Fraction(0))
    perturbed = tc.TargetAtoms(atoms.points, [m / total for m in raw], 1)
    assert sum(perturbed.masses) == 1
    result = tc.solve(p2.sphere_B, perturbed, tc.SolverParams(max_iter=200))
    w = result.weights
    assert w.converged
    assert all(step["mass"] == 1.0 for step in w.history)
    dec = tc.laguerre_cells(p2.sphere_B, perturbed, w.psi)
    assert [float(g) for g in dec.masses] == pytest.approx(perturbed.mass_array, abs=1e-9)


@pytest.mark.slow
def test_refinement_does_not_increase_deviation(p2):
    directions = np.random.default_rng(11).uniform(-1e4, 1e4, size=(500, 2))
    vertices = p2.sphere_A.ambient.vertices
    deviations = []
    for s in (1, 4):
        result = p2.solve(tc.SolverParams(s=s, tol=1e-9, max_iter=200))
        assert result.weights.converged
        deviations.append(result.potential.max_deviation(vertices, directions))
    assert deviations[1] <= deviations[0] + 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("s", [1, 2])
def test_solver_on_complete_intersection(p3_22, s):
    result = p3_22.solve(tc.SolverParams(s=s, tol=1e-9, max_iter=200))
    w = result.weights
    assert w.converged and w.residual <= 1e-9
    K = w.kantorovich()
    assert all(b >= a - 1e-12 for a, b in zip(K, K[1:]))
    assert all(step["mass"] == 1.0 for step in w.history)
    atoms = result.potential.atoms
    assert len(atoms) == 16 * s
    dec = tc.laguerre_cells(p3_22.sphere_B, atoms, w.psi)
    assert all(dec.nonempty())
    assert dec.total_mass == 1
    assert result.report.max_deviation <= 1e-6
