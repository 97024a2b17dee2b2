"""
Contains nef partitions and the face operators: NefPartitionData,
validate_nef_partition(), nef_partition_from_rays(), beta_star(), beta_inverted().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Dict, List, Mapping, Sequence, Tuple

from .errors import ConditionError, InputError
from .fans import Fan, PLFunction, newton_polytope, normal_fan, support_function
from .geometry import (
    Polytope,
    boundary_lattice_points,
    convex_hull,
    is_reflexive,
    lattice_points,
    minkowski_sum,
    polar_dual,
)

__all__ = [
    "NefPartitionData",
    "validate_nef_partition",
    "nef_partition_from_rays",
    "beta_star",
    "beta_inverted",
]

Ray = Tuple[int, ...]


@dataclass
class NefPartitionData:
    """
    A nef partition Δ = Δ_1 + ... + Δ_r of a reflexive polytope together with
    its dual data. Parts are numbered from 0.

    """

    delta: Polytope
    parts: List[Polytope]
    sigma: Fan
    phi: PLFunction
    phi_parts: List[PLFunction]
    nabla_parts: List[Polytope]
    nabla: Polytope
    ray_assignment: Dict[Ray, int] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def rank(self) -> int:
        return self.delta.ambient_rank

    @cached_property
    def delta_star(self) -> Polytope:
        return polar_dual(self.delta)

    @cached_property
    def nabla_star(self) -> Polytope:
        return polar_dual(self.nabla)

    @cached_property
    def nabla_lattice_points(self) -> List[List[Ray]]:
        """(∇_i ∩ N) minus the origin, for each part."""
        return [[n for n in lattice_points(p) if any(n)] for p in self.nabla_parts]

    @cached_property
    def delta_lattice_points(self) -> List[List[Ray]]:
        """(Δ_i ∩ M) minus the origin, for each part."""
        return [[m for m in lattice_points(p) if any(m)] for p in self.parts]

    def part_of(self, n: Sequence[int]) -> int:
        """Index i with n in (∇_i ∩ N) minus 0; -1 if there is none."""
        n = tuple(n)
        for i, pts in enumerate(self.nabla_lattice_points):
            if n in pts:
                return i
        return -1


def validate_nef_partition(delta: Polytope, parts: Sequence[Polytope]) -> NefPartitionData:
    """
    Validates a Minkowski decomposition as a nef partition.

    Parameters
    ----------
    delta : Polytope
        A reflexive polytope Δ.
    parts : Sequence[Polytope]
        Lattice polytopes Δ_1, ..., Δ_r.

    Returns
    -------
    NefPartitionData
        Full nef-partition data, with the dual partition ∇_i and ∇.

    Raises
    ------
    InputError
        Raised when Δ is not reflexive or a part is not a lattice polytope.
    ConditionError
        Raised when the sum differs from Δ, when some φ_i takes a value other
        than 0 or 1 on a ray, when the boundary lattice points of Δ* are not
        partitioned, or when ∇ is not reflexive.

    """
    if not is_reflexive(delta):
        raise InputError("delta not reflexive")
    if not parts:
        raise InputError("a nef partition needs at least one part")
    for i, p in enumerate(parts):
        if p.is_empty or not p.is_lattice or p.ambient_rank != delta.ambient_rank:
            raise InputError(
                f"part {i + 1} is not a lattice polytope of rank {delta.ambient_rank}"
            )
    total = reduce(minkowski_sum, parts)
    if total != delta:
        missing = sorted(set(delta.vertices) ^ set(total.vertices))
        raise ConditionError("Minkowski sum mismatch", witness=missing[:1])

    sigma = normal_fan(delta)
    phi = support_function(delta, sigma)
    phi_parts = [support_function(p, sigma) for p in parts]
    assignment: Dict[Ray, int] = {}
    for i, f in enumerate(phi_parts):
        for ray, v in f.ray_values.items():
            if v not in (0, 1):
                raise ConditionError(
                    f"phi_{i + 1} takes value {v} on ray {ray}", witness=ray
                )
            if v == 1:
                assignment[ray] = i
    if any(v != 1 for v in phi.ray_values.values()):
        raise ConditionError("phi is not anticanonical")

    nabla_parts = [
        convex_hull([(0,) * delta.ambient_rank] + [r for r, i in assignment.items() if i == k])
        for k in range(len(parts))
    ]
    nabla = reduce(minkowski_sum, nabla_parts)
    if not is_reflexive(nabla):
        raise ConditionError("nabla not reflexive", witness=nabla)
    npd = NefPartitionData(
        delta, list(parts), sigma, phi, phi_parts, nabla_parts, nabla, assignment
    )

    seen: Dict[Ray, int] = {}
    for i, pts in enumerate(npd.nabla_lattice_points):
        for n in pts:
            if n in seen:
                raise ConditionError(
                    f"lattice point {n} lies in nabla_{seen[n] + 1} and nabla_{i + 1}",
                    witness=n,
                )
            seen[n] = i
    boundary = set(boundary_lattice_points(npd.delta_star))
    if boundary != set(seen):
        odd = sorted(boundary ^ set(seen))
        raise ConditionError(
            "boundary lattice points of delta* are not partitioned by the nabla_i",
            witness=odd[0],
        )
    return npd


def nef_partition_from_rays(
    delta: Polytope, assignment: Mapping[Sequence[int], int]
) -> NefPartitionData:
    """
    Builds a nef partition from a ray assignment e_j -> i (parts from 0).

    Each part is recovered as the Newton polytope of φ_i, the function taking
    1 on the rays assigned to i and 0 elsewhere; the result is validated and
    cross-checked against the assignment.

    Raises
    ------
    InputError
        Raised when Δ is not reflexive or the assignment does not cover the
        rays of its normal fan.
    ConditionError
        Raised when some φ_i is not convex or validation fails.

    """
    if not is_reflexive(delta):
        raise InputError("delta not reflexive")
    sigma = normal_fan(delta)
    given = {tuple(int(a) for a in r): int(i) for r, i in assignment.items()}
    for r in sigma.rays:
        if r not in given:
            raise InputError(f"ray {r} is not assigned to a part", witness=r)
    extra = sorted(set(given) - set(sigma.rays))
    if extra:
        raise InputError(f"{extra[0]} is not a ray of the normal fan", witness=extra[0])
    r = max(given.values()) + 1
    if sorted(set(given.values())) != list(range(r)):
        raise InputError("parts must be numbered consecutively")
    parts = []
    for i in range(r):
        f = PLFunction(sigma, {ray: int(k == i) for ray, k in given.items()})
        try:
            parts.append(newton_polytope(f))
        except ConditionError as e:
            raise ConditionError(f"phi_{i + 1} is not convex: not a nef partition") from e
    npd = validate_nef_partition(delta, parts)
    if npd.ray_assignment != given:
        raise ConditionError("ray assignment does not match the recovered parts")
    return npd


def _check_boundary(npd: NefPartitionData, mu: Polytope) -> None:
    star = npd.delta_star
    if (
        mu.is_empty
        or mu.ambient_rank != star.ambient_rank
        or not star.contains_polytope(mu)
        or not any(all(f.is_tight(v) for v in mu.vertices) for f in star.facets)
    ):
        raise InputError("mu is not contained in the boundary of delta*", witness=mu)


def beta_star(npd: NefPartitionData, i: int, mu: Polytope) -> Polytope:
    """
    The face of μ on which φ_i equals 1; empty when there is none.

    Raises
    ------
    InputError
        Raised when μ does not lie in the boundary of Δ*.

    """
    _check_boundary(npd, mu)
    keep = [v for v in mu.vertices if npd.phi_parts[i](v) == 1]
    if not keep:
        return Polytope.empty(mu.ambient_rank)
    return mu.face(mu.vertex_index[v] for v in keep)


def beta_inverted(npd: NefPartitionData, mu: Polytope) -> Polytope:
    """Minkowski sum of β*_i(μ) over all parts; empty if one summand is."""
    summands = [beta_star(npd, i, mu) for i in range(npd.r)]
    if any(s.is_empty for s in summands):
        return Polytope.empty(mu.ambient_rank)
    return reduce(minkowski_sum, summands)
