"""
Contains the semi-discrete transport solver for the facet-wise real
Monge-Ampère equation: SolverParams, TargetAtoms, discretize_target(),
LaguerreDecomposition, laguerre_cells(), dual_functional(), DualWeights,
ConvexPotential, solve(), ResidualReport, ma_residual().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import ConditionError
from .geometry import Polytope, lattice_points
from .interaction import Report
from .spheres import TropicalSphere, normalized_measure
from .utils.exact import Point, dot, sub
from .utils.validator import SimpleValidator

__all__ = [
    "SolverParams",
    "TargetAtoms",
    "discretize_target",
    "LaguerreDecomposition",
    "laguerre_cells",
    "dual_functional",
    "DualWeights",
    "ConvexPotential",
    "TransportResult",
    "solve",
    "ResidualReport",
    "ma_residual",
]

MAX_CONDITION = 1e12


@dataclass
class SolverParams:
    """Parameters of the transport solver."""

    s: int = SimpleValidator(int, ge=1, default=1)
    tol: float = SimpleValidator(float, gt=0, default=1e-9)
    max_iter: int = SimpleValidator(int, ge=1, default=100)
    min_step: float = SimpleValidator(float, gt=0, default=2**-30)
    armijo: float = SimpleValidator(float, gt=0, lt=1, default=1e-4)


@dataclass
class TargetAtoms:
    """Weighted points on A_h; masses are exact and sum to 1."""

    points: List[Point]
    masses: List[Fraction]
    s: int

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Tuple[Point, Fraction]]:
        return iter(zip(self.points, self.masses))

    @property
    def array(self) -> np.ndarray:
        return np.array([[float(c) for c in p] for p in self.points])

    @property
    def mass_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.masses])


def discretize_target(A: TropicalSphere, s: int = 1) -> TargetAtoms:
    """
    Atoms at the points (1/s)·(s·G ∩ M) of every facet G of A_h.

    Each facet spreads μ(G)/μ(A_h) evenly over its points; atoms shared by
    several facets collect the masses of all of them.

    Raises
    ------
    ValueError
        Raised when s < 1.
    ConditionError
        Raised when A_h has zero measure.

    """
    if s < 1:
        raise ValueError(f"discretization level must be >= 1; got {s}")
    weights = normalized_measure(A)
    merged: Dict[Point, Fraction] = {}
    for facet, w in weights.items():
        pts = lattice_points(facet.scale(s))
        for p in pts:
            m = tuple(Fraction(c, s) for c in p)
            merged[m] = merged.get(m, Fraction(0)) + w / len(pts)
    points = sorted(merged)
    return TargetAtoms(points, [merged[p] for p in points], s)


class _Facet(NamedTuple):
    polytope: Polytope
    weight: Fraction
    volume: Fraction


def _facets(B: TropicalSphere) -> List[_Facet]:
    weights = normalized_measure(B)
    return [
        _Facet(f, w, f.projected_volume(f.chart.pivots)) for f, w in weights.items()
    ]


def _snapshot(psi: Sequence[float]) -> List[Fraction]:
    return [Fraction(float(x)) for x in psi]


def _value(m: Point, psi: Fraction, n: Sequence[Fraction]) -> Fraction:
    return -dot(m, n) - psi


@dataclass
class LaguerreDecomposition:
    """Cells C_{a,τ} per facet of B and their masses G_a = Σ_τ ν̃(C_{a,τ})."""

    cells: List[List[Tuple[int, Polytope]]]
    cell_masses: List[List[Fraction]]
    masses: List[Fraction]
    psi: List[Fraction]

    @property
    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))

    def nonempty(self) -> List[bool]:
        return [g > 0 for g in self.masses]


def _cells_on(facet: _Facet, atoms: TargetAtoms, psi: List[Fraction]):
    tau = facet.polytope
    verts = tau.vertices
    values = [[_value(m, p, v) for v in verts] for m, p in zip(atoms.points, psi)]
    # Atoms whose affine functions agree on τ share one cell, split by p_a.
    groups: Dict[Tuple[Fraction, ...], List[int]] = {}
    for a in range(len(atoms)):
        groups.setdefault(tuple(values[a]), []).append(a)
    candidates = [members[0] for members in groups.values()]
    alive = [
        a
        for a in candidates
        if not any(
            all(vb > va for va, vb in zip(values[a], values[b])) for b in candidates
        )
    ]
    out: List[Tuple[int, Polytope]] = []
    masses: List[Fraction] = []
    for a in alive:
        rows = [
            (sub(atoms.points[b], atoms.points[a]), psi[b] - psi[a])
            for b in alive
            if b != a
        ]
        cell = tau.clip(rows)
        if cell.dim < tau.dim:
            continue
        mass = facet.weight * cell.projected_volume(tau.chart.pivots) / facet.volume
        members = groups[tuple(values[a])]
        share = sum((atoms.masses[b] for b in members), Fraction(0))
        for b in members:
            out.append((b, cell))
            masses.append(mass * atoms.masses[b] / share)
    return out, masses


def laguerre_cells(
    B: TropicalSphere, atoms: TargetAtoms, psi: Sequence[float], threads: int = 1
) -> LaguerreDecomposition:
    """
    Splits every facet τ of B into the cells where ⟨m_a, -n⟩ - ψ_a is largest.

    The weights are snapped to exact rationals before clipping, so the cells
    of a facet tile it exactly and the masses sum to 1.

    """
    if len(psi) != len(atoms):
        raise ValueError(f"expected {len(atoms)} weights; got {len(psi)}")
    exact = _snapshot(psi)
    facets = _facets(B)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda f: _cells_on(f, atoms, exact), facets))
    masses = [Fraction(0)] * len(atoms)
    for cells, cm in results:
        for (a, _), g in zip(cells, cm):
            masses[a] += g
    return LaguerreDecomposition(
        [c for c, _ in results], [m for _, m in results], masses, exact
    )


def dual_functional(
    B: TropicalSphere,
    atoms: TargetAtoms,
    psi: Sequence[float],
    decomposition: Optional[LaguerreDecomposition] = None,
) -> Tuple[float, np.ndarray]:
    """
    F(ψ) = Σ p_a ψ_a + ∫ max_a(⟨m_a, -n⟩ - ψ_a) dν̃ and its gradient p - G(ψ).

    F is invariant under adding a constant to ψ; the Kantorovich dual is
    K = -F. Cell integrals are exact (value at the centroid times the mass).
    `solve` accepts a step only when it lowers F by the Armijo margin, so K
    never decreases along its history.

    """
    dec = decomposition or laguerre_cells(B, atoms, psi)
    value = sum((p * w for p, w in zip(atoms.masses, dec.psi)), Fraction(0))
    for cells, cm in zip(dec.cells, dec.cell_masses):
        for (a, cell), g in zip(cells, cm):
            value += g * _value(atoms.points[a], dec.psi[a], cell.centroid())
    grad = np.array([float(p - g) for p, g in zip(atoms.masses, dec.masses)])
    return float(value), grad


def _wall_measure(wall: Polytope, pivots: Sequence[int]) -> float:
    # (k-1)-volume of a wall in chart coordinates.
    k = wall.dim
    if k == 0:
        return 1.0
    total = 0.0
    for simplex in wall.triangulation():
        base = wall.vertices[simplex[0]]
        E = np.array(
            [[float(wall.vertices[i][j] - base[j]) for j in pivots] for i in simplex[1:]]
        )
        total += math.sqrt(max(np.linalg.det(E @ E.T), 0.0))
    return total / math.factorial(k)


def _hessian(
    B: TropicalSphere, atoms: TargetAtoms, dec: LaguerreDecomposition
) -> np.ndarray:
    # Derivative of the cell masses G with respect to ψ. Tied atoms share a
    # cell; a wall term is split over the members by their shares of it.
    H = np.zeros((len(atoms), len(atoms)))
    for facet, cells, cm in zip(_facets(B), dec.cells, dec.cell_masses):
        tau = facet.polytope
        pivots = tau.chart.pivots
        density = float(facet.weight / facet.volume)
        lift = tau.chart.lift
        groups: List[Tuple[Polytope, List[int], List[Fraction]]] = []
        for (a, cell), g in zip(cells, cm):
            if groups and groups[-1][0] is cell:
                groups[-1][1].append(a)
                groups[-1][2].append(g)
            else:
                groups.append((cell, [a], [g]))
        shares = [
            np.array([float(g / sum(gs, Fraction(0))) for g in gs]) for _, _, gs in groups
        ]
        for (i, (ca, ga, _)), (j, (cb, gb, _)) in combinations(enumerate(groups), 2):
            wall = ca.intersect(cb)
            if wall.dim != tau.dim - 1:
                continue
            diff = sub(atoms.points[gb[0]], atoms.points[ga[0]])
            slope = math.sqrt(sum(float(dot(diff, vec)) ** 2 for vec in lift))
            if slope == 0:
                continue
            hab = density * _wall_measure(wall, pivots) / slope
            sa, sb = shares[i], shares[j]
            H[np.ix_(ga, gb)] += hab * np.outer(sa, sb)
            H[np.ix_(gb, ga)] += hab * np.outer(sb, sa)
            H[np.ix_(ga, ga)] -= hab * np.outer(sa, sa)
            H[np.ix_(gb, gb)] -= hab * np.outer(sb, sb)
    return H


@dataclass
class DualWeights:
    """The discretized dual potential ψ and the history of the run."""

    psi: np.ndarray
    iterations: int = 0
    converged: bool = False
    residual: float = math.inf
    history: List[Dict[str, Any]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.psi)

    def __getitem__(self, a: int) -> float:
        return float(self.psi[a])

    def kantorovich(self) -> List[float]:
        """K = -F along the accepted iterates."""
        return [step["K"] for step in self.history]


class ConvexPotential:
    """
    The convex function n -> max_a(⟨m_a, -n⟩ - ψ_a).

    Parameters
    ----------
    atoms : TargetAtoms
        The atoms m_a.
    psi : np.ndarray
        The weights ψ_a.

    """

    def __init__(self, atoms: TargetAtoms, psi: np.ndarray) -> None:
        self.atoms = atoms
        self.psi = np.asarray(psi, dtype=float)
        self.__points = atoms.array

    def __repr__(self) -> str:
        return f"ConvexPotential(atoms={len(self.atoms)})"

    def __call__(self, n: Any) -> Any:
        n = np.asarray(n, dtype=float)
        values = -(np.atleast_2d(n) @ self.__points.T) - self.psi
        out = values.max(axis=1)
        return out if n.ndim == 2 else float(out[0])

    def argmax(self, n: Sequence[float]) -> int:
        values = -(self.__points @ np.asarray(n, dtype=float)) - self.psi
        return int(values.argmax())

    def max_deviation(self, vertices: Sequence[Sequence[Any]], n: np.ndarray) -> float:
        """
        max over the rows of n of |φ(n) - φ_h(n)|, where φ_h is the support
        function of the polytope with the given vertices.

        """
        V = np.array([[float(c) for c in v] for v in vertices])
        n = np.atleast_2d(np.asarray(n, dtype=float))
        support = (-(n @ V.T)).max(axis=1)
        return float(np.abs(self(n) - support).max())


class TransportResult(NamedTuple):
    weights: DualWeights
    potential: ConvexPotential
    report: "ResidualReport"


def _entry(value: float, mode: str, t: float, dec: LaguerreDecomposition) -> Dict[str, Any]:
    return {"F": value, "K": -value, "mode": mode, "t": t, "mass": float(dec.total_mass)}


def _step(
    B: TropicalSphere,
    atoms: TargetAtoms,
    psi: np.ndarray,
    direction: np.ndarray,
    value: float,
    slope: float,
    params: SolverParams,
    keep: Optional[np.ndarray],
):
    t = 1.0
    while t >= params.min_step:
        trial = psi + t * direction
        dec = laguerre_cells(B, atoms, trial)
        if keep is None or all(dec.masses[a] > 0 for a in np.flatnonzero(keep)):
            new_value, grad = dual_functional(B, atoms, trial, dec)
            if new_value <= value + params.armijo * t * slope:
                return t, trial, dec, new_value, grad
        t /= 2
    return None


def solve(
    B: TropicalSphere,
    atoms: TargetAtoms,
    params: Optional[SolverParams] = None,
    psi0: Optional[Sequence[float]] = None,
    A: Optional[TropicalSphere] = None,
) -> TransportResult:
    """
    Finds weights ψ whose cells carry the masses of the atoms.

    Descends F (ascends K = -F) by damped Newton steps while every cell is
    nonempty and the Hessian is well conditioned, and by gradient steps with
    backtracking otherwise. The gauge is fixed by ψ_0 = 0.

    Parameters
    ----------
    B : TropicalSphere
        Source sphere, with the normalized measure ν̃.
    atoms : TargetAtoms
        Target atoms.
    params : SolverParams, optional
        Solver parameters, by default `SolverParams()`.
    psi0 : Sequence[float], optional
        Initial weights, by default zero.
    A : TropicalSphere, optional
        The sphere A_h, for the residual report; if omitted the report uses
        unit total mass.

    Returns
    -------
    TransportResult
        The weights with their history, the potential and the residual report.
        Non-convergence is reported in the weights, not raised.

    """
    params = params or SolverParams()
    if not len(atoms):
        raise ConditionError("no target atoms")
    psi = np.zeros(len(atoms)) if psi0 is None else np.array(psi0, dtype=float)
    psi = psi - psi[0]
    dec = laguerre_cells(B, atoms, psi)
    value, grad = dual_functional(B, atoms, psi, dec)
    weights = DualWeights(psi)
    weights.history.append(_entry(value, "start", 0.0, dec))
    warned = False
    for it in range(params.max_iter + 1):
        weights.residual = float(np.abs(grad).max())
        logging.debug("iteration %d: F = %.12g, residual = %.3g", it, value, weights.residual)
        if weights.residual <= params.tol:
            weights.converged = True
            break
        if it == params.max_iter:
            break
        nonempty = np.array(dec.nonempty())
        direction = None
        if nonempty.all():
            H = _hessian(B, atoms, dec)[1:, 1:]
            if H.size == 0 or np.linalg.cond(H) < MAX_CONDITION:
                direction = np.zeros(len(atoms))
                if H.size:
                    direction[1:] = np.linalg.solve(H, grad[1:])
        accepted = None
        if direction is not None:
            accepted = _step(
                B, atoms, psi, direction, value, float(grad @ direction), params, nonempty
            )
            mode = "newton"
        if accepted is None:
            if not warned:
                logging.warning("falling back to gradient steps at iteration %d", it)
                warned = True
            direction = -grad
            direction -= direction[0]
            accepted = _step(
                B, atoms, psi, direction, value, float(grad @ direction), params, None
            )
            mode = "gradient"
        if accepted is None:
            logging.warning("line search stalled at iteration %d", it)
            break
        t, psi, dec, value, grad = accepted
        weights.iterations = it + 1
        weights.history.append(_entry(value, mode, t, dec))
    weights.psi = psi
    if not weights.converged:
        logging.warning(
            "stability not certified at this discretization (residual %.3g)",
            weights.residual,
        )
    potential = ConvexPotential(atoms, psi)
    report = ma_residual(B, potential, A, decomposition=dec)
    return TransportResult(weights, potential, report)


class ResidualReport(Report):
    """Per-facet Monge-Ampère mass against its target."""

    def __init__(self) -> None:
        super().__init__("Monge-Ampère residual", ["facet", "target", "MA mass", "deviation"])
        self.l1 = 0.0
        self.max_deviation = 0.0
        self.total_mass = 0.0
        self.expected_total = 0.0


def ma_residual(
    B: TropicalSphere,
    potential: ConvexPotential,
    A: Optional[TropicalSphere] = None,
    tol: float = 1e-8,
    decomposition: Optional[LaguerreDecomposition] = None,
) -> ResidualReport:
    """
    Compares, on every facet τ of B, the discrete Monge-Ampère mass of the
    potential with μ(A_h)·ν̃(τ).

    The MA mass on τ is μ(A_h)·Σ_a p_a·ν̃(C_{a,τ})/G_a: each atom spreads its
    mass over the facets in proportion to the part of its cell lying there.

    """
    atoms = potential.atoms
    dec = decomposition or laguerre_cells(B, atoms, potential.psi)
    scale = float(A.total) if A is not None else 1.0
    report = ResidualReport()
    for facet, cells, cm in zip(_facets(B), dec.cells, dec.cell_masses):
        target = scale * float(facet.weight)
        mass = scale * sum(
            float(atoms.masses[a] * g / dec.masses[a]) for (a, _), g in zip(cells, cm)
        )
        deviation = abs(mass - target)
        report.l1 += deviation
        report.max_deviation = max(report.max_deviation, deviation)
        report.total_mass += mass
        report.add(repr(facet.polytope), target, mass, deviation, ok=deviation <= tol)
    report.expected_total = scale
    report.add(
        "total",
        scale,
        report.total_mass,
        abs(report.total_mass - scale),
        ok=abs(report.total_mass - scale) <= tol,
    )
    return report
