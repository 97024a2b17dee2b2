"""
Contains the tropical spheres: TropicalSphere, build_B(), build_A(),
normalized_measure(), compare_with_dual_complex().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Literal, Sequence, Tuple

from .abc import PolyhedralComplex
from .cayley import DualIntersectionComplex
from .errors import ConditionError
from .fans import PLFunction, newton_polytope
from .geometry import Polytope
from .interaction import Report
from .nef import NefPartitionData
from .utils.exact import dot

__all__ = [
    "TropicalSphere",
    "build_B",
    "build_A",
    "normalized_measure",
    "ComparisonReport",
    "compare_with_dual_complex",
]

SphereKind = Literal["A", "B"]


class TropicalSphere(PolyhedralComplex):
    """
    A tropical sphere: the faces of a Newton polytope selected by the
    nonvanishing condition, with the lattice-normalized volume on its facets.

    Parameters
    ----------
    ambient : Polytope
        The Newton polytope (∇_ȟ for B, Δ_h for A).
    cells : Sequence[Polytope]
        Passing faces of `ambient`.
    d : int
        Expected dimension.
    which : {"A", "B"}
        Which sphere this is.

    """

    def __init__(
        self, ambient: Polytope, cells: Sequence[Polytope], d: int, which: SphereKind
    ) -> None:
        super().__init__(cells, ambient.ambient_rank)
        self.ambient = ambient
        self.d = d
        self.which = which
        self.facet_measure: Dict[Polytope, Fraction] = {
            f: f.normalized_volume() for f in self.facets
        }
        self.total: Fraction = sum(self.facet_measure.values(), Fraction(0))
        if self.cells and (not self.is_pure or self.dim != d):
            logging.warning(
                "tropical sphere %s is not pure of dimension %d (maximal cell dims %s)",
                which,
                d,
                sorted({c.dim for c in self.maximal_cells}),
            )

    @property
    def kind(self) -> str:
        return f"tropical-sphere-{self.which}"

    def to_dict(self) -> Dict:
        out = super().to_dict()
        out["measures"] = [str(self.facet_measure.get(c, 0)) for c in self.maximal_cells]
        out["total"] = str(self.total)
        return out


def _scan(
    ambient: Polytope,
    parts: Sequence[Sequence[Tuple[Tuple[int, ...], Fraction]]],
) -> List[Polytope]:
    tight_sets: List[List[FrozenSet[int]]] = []
    for pts in parts:
        sets = set()
        for p, value in pts:
            tight = frozenset(
                k for k, v in enumerate(ambient.vertices) if value + dot(p, v) == 0
            )
            if tight:
                sets.add(tight)
        tight_sets.append(list(sets))
    cells = []
    for face in ambient.faces():
        if all(any(face <= t for t in sets) for sets in tight_sets):
            cells.append(ambient.face(face))
    return cells


# pylint: disable=unused-argument
def build_B(npd: NefPartitionData, h: PLFunction, hcheck: PLFunction) -> TropicalSphere:
    """
    The sphere B_ȟ: faces F of ∇_ȟ such that, for every part i, some nonzero
    lattice point m of Δ_i satisfies ȟ(m) + <m, n> = 0 on all of F.

    Raises
    ------
    ConditionError
        Raised when ȟ is not convex.

    """
    try:
        nabla_h = newton_polytope(hcheck)
    except ConditionError as e:
        raise ConditionError("hcheck is not convex") from e
    parts = [[(m, hcheck(m)) for m in pts] for pts in npd.delta_lattice_points]
    sphere = TropicalSphere(nabla_h, _scan(nabla_h, parts), npd.rank - npd.r, "B")
    logging.info("B: %d cells, nu = %s", len(sphere), sphere.total)
    return sphere


def build_A(npd: NefPartitionData, h: PLFunction, hcheck: PLFunction) -> TropicalSphere:
    """
    The sphere A_h: faces G of Δ_h such that, for every part i, some nonzero
    lattice point n of ∇_i satisfies h(n) + <m, n> = 0 on all of G.

    Raises
    ------
    ConditionError
        Raised when h is not convex.

    """
    try:
        delta_h = newton_polytope(h)
    except ConditionError as e:
        raise ConditionError("h is not convex") from e
    parts = [[(n, h(n)) for n in pts] for pts in npd.nabla_lattice_points]
    sphere = TropicalSphere(delta_h, _scan(delta_h, parts), npd.rank - npd.r, "A")
    logging.info("A: %d cells, mu = %s", len(sphere), sphere.total)
    return sphere


def normalized_measure(S: TropicalSphere) -> Dict[Polytope, Fraction]:
    """
    Facet measures divided by the total, summing to exactly 1.

    Raises
    ------
    ConditionError
        Raised when the sphere has zero total measure.

    """
    if S.total == 0:
        raise ConditionError("empty tropical sphere")
    return {f: m / S.total for f, m in S.facet_measure.items()}


class ComparisonReport(Report):
    """Outcome of comparing two complexes as point sets."""

    def __init__(self) -> None:
        super().__init__("B versus the dual intersection complex", ["check", "value"])
        self.uncovered: List[Polytope] = []

    @property
    def equal(self) -> bool:
        return self.ok


def compare_with_dual_complex(
    B: TropicalSphere, dic: DualIntersectionComplex
) -> ComparisonReport:
    """
    Compares the supports of B_ȟ and the dual intersection complex.

    Checks mutual vertex containment, then that every maximal cell of each
    complex is covered by the other; uncovered cells are listed.

    """
    report = ComparisonReport()
    missing_b = [v for v in B.vertex_points() if not dic.contains(v)]
    missing_d = [v for v in dic.vertex_points() if not B.contains(v)]
    report.add("vertices of B in the dual complex", not missing_b, ok=not missing_b)
    report.add("vertices of the dual complex in B", not missing_d, ok=not missing_d)
    for v in missing_b + missing_d:
        report.note(f"uncovered vertex {tuple(str(c) for c in v)}")
    left = B.uncovered_by(dic)
    right = dic.uncovered_by(B)
    report.add("cells of B covered", len(B.maximal_cells) - len(left), ok=not left)
    covered = len(dic.maximal_cells) - len(right)
    report.add("cells of the dual complex covered", covered, ok=not right)
    report.uncovered = left + right
    for c in report.uncovered:
        report.note(f"uncovered cell {c}")
    report.add("total measure of B", B.total, ok=B.total > 0)
    if not report.ok:
        logging.warning("B and the dual intersection complex differ")
    return report
