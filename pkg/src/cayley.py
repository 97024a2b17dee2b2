"""
Contains the Cayley degeneration: CayleyData, build_cayley(), GoodSubdivision,
validate_good_subdivision(), find_h_tilde(), relevant_cones(),
DualIntersectionComplex, build_dual_intersection_complex(),
build_face_pair_complex().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .abc import PolyhedralComplex
from .errors import ConditionError
from .fans import (
    Cone,
    Fan,
    PLFunction,
    is_convex_pl,
    is_refinement,
    is_strictly_convex_pl,
    is_unimodular,
    newton_polytope,
)
from .geometry import HalfSpace, Polytope, convex_hull, minkowski_sum, polytope_from_halfspaces
from .nef import NefPartitionData, beta_inverted
from .utils.exact import row_basis, solve

__all__ = [
    "CayleyData",
    "build_cayley",
    "cone_type",
    "GoodSubdivision",
    "validate_good_subdivision",
    "find_h_tilde",
    "RelevantCone",
    "relevant_cones",
    "DualIntersectionComplex",
    "build_dual_intersection_complex",
    "build_face_pair_complex",
]

Ray = Tuple[int, ...]

LIFT_BOUND = 10**6


def _split(cone: Cone) -> Tuple[List[Ray], List[Ray]]:
    # Rays at height 0 and the bases of the rays at height 1.
    low, high = [], []
    for r in cone.rays:
        if r[-1] == 0:
            low.append(r[:-1])
        elif r[-1] == 1:
            high.append(r[:-1])
        else:
            raise ConditionError(f"ray at height {r[-1]}: {r}", witness=r)
    return low, high


@dataclass
class CayleyData:
    """
    The Cayley polytopes Δ̃_i, their sum Δ̃ and its normal fan Σ̃.

    Δ̃_i is unbounded upwards; `tilde_parts` holds its truncation at height
    `heights[i]` (one above the maximum of ȟ′ on Δ_i), and `tilde_delta` is the
    sum of the truncations. Σ̃ only uses the facets that are not at the top.

    """

    npd: NefPartitionData
    hcheck_prime: PLFunction
    nabla_hcheck_prime: Polytope
    tilde_parts: List[Polytope]
    heights: List[Fraction]
    tilde_delta: Polytope
    tilde_fan: Fan
    tilde_phi: PLFunction
    tilde_phi_parts: List[PLFunction]
    cone_classification: Dict[Cone, int] = field(default_factory=dict)

    @property
    def ambient_rank(self) -> int:
        return self.npd.rank + 1

    def type_counts(self) -> Dict[int, int]:
        counts = {1: 0, 2: 0, 3: 0}
        for t in self.cone_classification.values():
            counts[t] += 1
        return counts


def cone_type(cone: Cone) -> int:
    """1 if all rays lie at height 0, 3 if none does, 2 otherwise."""
    low, high = _split(cone)
    if not high:
        return 1
    return 3 if not low else 2


def _classify(cone: Cone, star: Polytope, nabla_hp: Polytope, total: Polytope) -> int:
    low, high = _split(cone)
    kind = 1 if not high else (3 if not low else 2)
    ok = True
    if low:
        f1 = convex_hull(low)
        ok = star.is_face(f1) and f1 != star
    if ok and high:
        f2 = convex_hull(high)
        ok = nabla_hp.is_face(f2)
    if ok and kind == 2:
        ok = total.is_face(minkowski_sum(f1, f2))
    if not ok:
        raise ConditionError("cone classification failed", witness=cone)
    return kind


def build_cayley(npd: NefPartitionData, hcheck_prime: PLFunction) -> CayleyData:
    """
    Builds the Cayley polytopes and the fan Σ̃ with its cone types.

    Parameters
    ----------
    npd : NefPartitionData
        The nef partition.
    hcheck_prime : PLFunction
        ȟ′ on Σ̌′; must be convex.

    Returns
    -------
    CayleyData
        Δ̃_i (truncated), Δ̃, Σ̃, φ̃, φ̃_i and the classification of every cone
        of Σ̃ into types 1, 2 and 3.

    Raises
    ------
    ConditionError
        Raised when ȟ′ is not convex, or when a cone of Σ̃ fits none of the
        three types or φ̃_i does not restrict as expected.

    """
    if not hcheck_prime.fan.is_complete or not is_convex_pl(hcheck_prime):
        raise ConditionError("hcheck' is not convex")
    n = npd.rank
    nabla_hp = newton_polytope(hcheck_prime)
    forms = sorted(set(hcheck_prime.linear_forms))

    tilde_parts, heights = [], []
    for part in npd.parts:
        top = max(hcheck_prime(v) for v in part.vertices) + 1
        hs = [HalfSpace(f.normal + (0,), f.offset) for f in part.facets]
        for e in part.equations:
            lifted = HalfSpace(e.normal + (0,), e.offset)
            hs.extend([lifted, lifted.negated()])
        # l >= <u, m> for every linear piece u of ȟ′
        hs.extend(
            HalfSpace.from_inequality(tuple(-a for a in u) + (1,), 0) for u in forms
        )
        hs.append(HalfSpace((0,) * n + (-1,), top))
        tilde_parts.append(polytope_from_halfspaces(hs, n + 1))
        heights.append(top)
    tilde_delta = reduce(minkowski_sum, tilde_parts)

    cones = []
    for i in range(len(tilde_delta.vertices)):
        normals = [
            f.normal
            for f, inc in zip(tilde_delta.facets, tilde_delta.incidence)
            if i in inc
        ]
        if all(u[-1] >= 0 for u in normals):
            cones.append(Cone(normals))
    tilde_fan = Fan(cones)
    tilde_phi = PLFunction(
        tilde_fan, {r: -tilde_delta.min_value(r) for r in tilde_fan.rays}
    )
    tilde_phi_parts = [
        PLFunction(tilde_fan, {r: -t.min_value(r) for r in tilde_fan.rays})
        for t in tilde_parts
    ]

    for r in tilde_fan.rays:
        base, t = r[:-1], r[-1]
        if t == 0:
            expected = [f(base) for f in npd.phi_parts]
        elif t == 1 and nabla_hp.contains(base):
            expected = [0] * npd.r
        else:
            raise ConditionError("cone classification failed", witness=r)
        if [f.value(r) for f in tilde_phi_parts] != expected:
            raise ConditionError(
                f"phi~ does not restrict to phi on ray {r}", witness=r
            )

    star = npd.delta_star
    total = minkowski_sum(star, nabla_hp)
    classification = {c: _classify(c, star, nabla_hp, total) for c in tilde_fan.cones}
    cd = CayleyData(
        npd,
        hcheck_prime,
        nabla_hp,
        tilde_parts,
        heights,
        tilde_delta,
        tilde_fan,
        tilde_phi,
        tilde_phi_parts,
        classification,
    )
    logging.info(
        "Cayley fan: %d rays, %d maximal cones, cone types %s",
        len(tilde_fan.rays),
        len(tilde_fan.maximal_cones),
        cd.type_counts(),
    )
    return cd


class RelevantCone(NamedTuple):
    """A type-2 cone cone(μ)×{0} + cone(ν×{1}) with ⅁(μ) nonempty."""

    cone: Cone
    mu: Polytope
    nu: Polytope


@dataclass
class GoodSubdivision:
    """A validated subdivision Σ̃′ of the Cayley fan."""

    cayley: CayleyData
    fan: Fan
    sigma_prime: Fan
    unimodular: bool
    witness: Optional[Cone] = None
    h_tilde: Optional[PLFunction] = None
    relevant_cones: List[RelevantCone] = field(default_factory=list)


def validate_good_subdivision(
    cd: CayleyData, sigma_tilde_prime: Fan, sigma_prime: Fan
) -> GoodSubdivision:
    """
    Checks that Σ̃′ is a good subdivision of Σ̃.

    A good subdivision refines Σ̃, slices to Σ′ along N_ℝ⊕{0}, and every ray
    off that hyperplane is spanned by (n, 1) with n a lattice point of ∇_ȟ′.
    Unimodularity is reported (with a witness cone) but not enforced.

    Raises
    ------
    ConditionError
        Raised when Σ̃′ does not refine Σ̃, when a ray sits at the wrong height
        or outside ∇_ȟ′, or when the slice differs from Σ′.

    """
    if sigma_tilde_prime.ambient_rank != cd.ambient_rank:
        raise ConditionError("not a refinement of the Cayley fan: rank mismatch")
    try:
        refines = is_refinement(sigma_tilde_prime, cd.tilde_fan)
    except ValueError as e:
        raise ConditionError(
            "not a refinement of the Cayley fan", witness=getattr(e, "witness", None)
        ) from e
    if not refines:
        raise ConditionError("not a refinement of the Cayley fan")

    for r in sigma_tilde_prime.rays:
        t = r[-1]
        if t == 0:
            continue
        if t != 1:
            raise ConditionError(f"ray at height {t}: {r}", witness=r)
        if not cd.nabla_hcheck_prime.contains(r[:-1]):
            raise ConditionError(
                f"ray {r} does not lie over nabla_hcheck'", witness=r
            )

    sliced = set()
    for c in sigma_tilde_prime.cones:
        low = frozenset(r[:-1] for r in c.rays if r[-1] == 0)
        if low:
            sliced.add(low)
    expected = {frozenset(c.rays) for c in sigma_prime.cones}
    if sliced != expected:
        odd = sorted(sliced ^ expected, key=sorted)
        raise ConditionError("slice mismatch", witness=sorted(odd[0]))

    unimodular, witness = is_unimodular(sigma_tilde_prime)
    if not unimodular:
        logging.warning("subdivision of the Cayley fan is not unimodular at %s", witness)
    return GoodSubdivision(cd, sigma_tilde_prime, sigma_prime, unimodular, witness)


def _coordinates(basis: Sequence[Ray], r: Ray) -> Tuple[Fraction, ...]:
    rows = [[b[k] for b in basis] for k in range(len(r))]
    return solve(rows, r, unique=True)


def _scaled_row(target: int, pairs: Sequence[Tuple[int, Fraction]]) -> Dict[int, int]:
    # x_target - sum(c * x_k), cleared of denominators.
    den = math.lcm(*(c.denominator for _, c in pairs)) if pairs else 1
    row = {target: den}
    for k, c in pairs:
        row[k] = row.get(k, 0) - int(c * den)
    return row


def find_h_tilde(gs: GoodSubdivision, h: PLFunction) -> PLFunction:
    """
    Finds a strictly convex integral lift h̃ of h to Σ̃′.

    Solves an integer program over the ray values: h̃ equals h on the rays in
    N_ℝ⊕{0}, is linear on every maximal cone, and crosses every wall with an
    integer slack of at least 1. The L1 norm of the free values is minimized.

    Raises
    ------
    ConditionError
        Raised when Σ̃′ does not cover the upper half-space ("fan not
        complete"), or when no lift exists ("no strictly convex lift on this
        subdivision").

    """
    fan = gs.fan
    n1 = fan.ambient_rank
    for c in fan.maximal_cones:
        if c.dim != n1:
            raise ConditionError("fan not complete over the upper half-space", witness=c)
    for _, wall in fan.boundary_walls:
        if any(r[-1] != 0 for r in wall.rays):
            raise ConditionError("fan not complete over the upper half-space", witness=wall)

    rays = fan.rays
    index = {r: k for k, r in enumerate(rays)}
    fixed: Dict[int, Fraction] = {}
    for r in rays:
        if r[-1] == 0:
            base = r[:-1]
            v = h.value(base) if base in h.ray_values else h(base)
            if v.denominator != 1:
                raise ConditionError(f"h is not integral on ray {base}", witness=base)
            fixed[index[r]] = v

    bases = []
    equalities: List[Dict[int, int]] = []
    for c in fan.maximal_cones:
        basis = [c.rays[k] for k in row_basis(c.rays)]
        bases.append(basis)
        for r in c.rays:
            if r not in basis:
                lam = _coordinates(basis, r)
                equalities.append(
                    _scaled_row(index[r], [(index[b], x) for b, x in zip(basis, lam)])
                )

    inequalities: List[Dict[int, int]] = []
    for i, j, wall in fan.walls:
        for a, b in ((i, j), (j, i)):
            r = next(r for r in fan.maximal_cones[b].rays if r not in wall.rays)
            lam = _coordinates(bases[a], r)
            row = _scaled_row(index[r], [(index[x], y) for x, y in zip(bases[a], lam)])
            if all(k in fixed for k in row):
                if sum(c * fixed[k] for k, c in row.items()) < 1:
                    raise ConditionError(
                        "no strictly convex lift on this subdivision", witness=wall
                    )
            inequalities.append(row)

    free = [k for k in range(len(rays)) if k not in fixed]
    nvar = len(rays) + len(free)

    def dense(rows: List[Dict[int, int]]) -> np.ndarray:
        A = np.zeros((len(rows), nvar))
        for i, row in enumerate(rows):
            for k, c in row.items():
                A[i, k] = c
        return A

    abs_rows = []
    for s, k in enumerate(free):
        abs_rows.append({k: 1, len(rays) + s: -1})
        abs_rows.append({k: -1, len(rays) + s: -1})
    constraints = []
    if inequalities:
        constraints.append(LinearConstraint(dense(inequalities), 1, np.inf))
    if equalities:
        constraints.append(LinearConstraint(dense(equalities), 0, 0))
    if abs_rows:
        constraints.append(LinearConstraint(dense(abs_rows), -np.inf, 0))

    lb = np.full(nvar, -float(LIFT_BOUND))
    ub = np.full(nvar, float(LIFT_BOUND))
    for k, v in fixed.items():
        lb[k] = ub[k] = float(v)
    lb[len(rays):] = 0
    cost = np.concatenate([np.zeros(len(rays)), np.ones(len(free))])
    res = milp(
        cost,
        constraints=constraints or None,
        integrality=np.ones(nvar),
        bounds=Bounds(lb, ub),
    )
    if not res.success or res.x is None:
        raise ConditionError("no strictly convex lift on this subdivision")
    values = {r: Fraction(int(round(res.x[index[r]]))) for r in rays}
    h_tilde = PLFunction(fan, values)
    if not is_strictly_convex_pl(h_tilde):
        raise ConditionError("no strictly convex lift on this subdivision")
    logging.info("strictly convex lift found on %d rays", len(rays))
    gs.h_tilde = h_tilde
    return h_tilde


def relevant_cones(gs: GoodSubdivision, npd: NefPartitionData) -> List[RelevantCone]:
    """All cones of Σ̃′ of type 2 whose μ has ⅁(μ) nonempty."""
    out = []
    for c in gs.fan.cones:
        low, high = _split(c)
        if not low or not high:
            continue
        mu = convex_hull(low)
        if not beta_inverted(npd, mu).is_empty:
            out.append(RelevantCone(c, mu, convex_hull(high)))
    if not out:
        logging.warning("no relevant cones: the data is degenerate")
    gs.relevant_cones = out
    return out


class DualIntersectionComplex(PolyhedralComplex):
    """
    The cells ⅁(μ)+ν of a polyhedral decomposition of a subset of ∂∇_ȟ.

    Parameters
    ----------
    keys : Dict[Polytope, List[Tuple[Polytope, Polytope]]]
        Each cell with the pairs (μ, ν) producing it.
    nabla_h : Polytope
        The Newton polytope ∇_ȟ.

    """

    def __init__(
        self, keys: Dict[Polytope, List[Tuple[Polytope, Polytope]]], nabla_h: Polytope
    ) -> None:
        super().__init__(keys, nabla_h.ambient_rank)
        self.keys = keys
        self.nabla_h = nabla_h

    @property
    def kind(self) -> str:
        return "dual-intersection"

    def verify(self) -> None:
        """
        Checks that every cell lies in a facet of ∇_ȟ and that any two cells
        meet in a common face.

        Raises
        ------
        ConditionError
            Raised with the offending cell or pair as witness.

        """
        for c in self.cells:
            if not any(all(f.is_tight(v) for v in c.vertices) for f in self.nabla_h.facets):
                raise ConditionError(
                    "cell does not lie in the boundary of nabla_h", witness=c
                )
        boxes = [
            (
                [min(v[i] for v in c.vertices) for i in range(self.ambient_rank)],
                [max(v[i] for v in c.vertices) for i in range(self.ambient_rank)],
            )
            for c in self.cells
        ]
        for a, b in combinations(range(len(self.cells)), 2):
            (lo_a, hi_a), (lo_b, hi_b) = boxes[a], boxes[b]
            apart = any(x > y for x, y in zip(lo_a, hi_b))
            if apart or any(x > y for x, y in zip(lo_b, hi_a)):
                continue
            p, q = self.cells[a], self.cells[b]
            common = p.intersect(q)
            if common.is_empty:
                continue
            if not (p.is_face(common) and q.is_face(common)):
                raise ConditionError(
                    "cells do not meet in a common face", witness=(p, q)
                )


def _nabla_h(npd: NefPartitionData, cd: CayleyData) -> Polytope:
    return minkowski_sum(npd.nabla, cd.nabla_hcheck_prime)


def build_dual_intersection_complex(
    gs: GoodSubdivision, npd: NefPartitionData
) -> DualIntersectionComplex:
    """
    Assembles the cells ⅁(μ)+ν over the relevant cones of Σ̃′.

    Raises
    ------
    ConditionError
        Raised when the cells do not form a polyhedral decomposition inside
        ∂∇_ȟ; this indicates an invalid subdivision.

    """
    rel = gs.relevant_cones or relevant_cones(gs, npd)
    keys: Dict[Polytope, List[Tuple[Polytope, Polytope]]] = {}
    for rc in rel:
        cell = minkowski_sum(beta_inverted(npd, rc.mu), rc.nu)
        keys.setdefault(cell, []).append((rc.mu, rc.nu))
    dic = DualIntersectionComplex(keys, _nabla_h(npd, gs.cayley))
    dic.verify()
    logging.info("dual intersection complex: %d cells, dim %d", len(dic), dic.dim)
    return dic


def build_face_pair_complex(npd: NefPartitionData, cd: CayleyData) -> DualIntersectionComplex:
    """
    The cells ⅁(F1)+F2 over the face pairs F1 ≺ Δ*, F2 ≺ ∇_ȟ′ with ⅁(F1)
    nonempty and F1+F2 a face of Δ*+∇_ȟ′.

    Its support agrees with the complex built from any good subdivision.

    """
    star = npd.delta_star
    nabla_hp = cd.nabla_hcheck_prime
    total = minkowski_sum(star, nabla_hp)
    full = frozenset(range(len(star.vertices)))
    keys: Dict[Polytope, List[Tuple[Polytope, Polytope]]] = {}
    for f1 in star.faces():
        if f1 == full:
            continue
        F1 = star.face(f1)
        G = beta_inverted(npd, F1)
        if G.is_empty:
            continue
        for f2 in nabla_hp.faces():
            F2 = nabla_hp.face(f2)
            if total.is_face(minkowski_sum(F1, F2)):
                keys.setdefault(minkowski_sum(G, F2), []).append((F1, F2))
    return DualIntersectionComplex(keys, _nabla_h(npd, cd))
