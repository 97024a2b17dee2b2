"""
Contains rational fans and piecewise-linear functions on them: Cone, Fan,
PLFunction, normal_fan(), is_refinement(), is_unimodular(), support_function(),
newton_polytope(), is_convex_pl(), is_strictly_convex_pl(), pulling_subdivision().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .errors import ConditionError, FanSupportError
from .geometry import (
    HalfSpace,
    Polytope,
    boundary_lattice_points,
    convex_hull,
    polytope_from_halfspaces,
)
from .utils.exact import Point, Rational, dot, lattice_index, primitive, rank, solve

__all__ = [
    "Cone",
    "Fan",
    "PLFunction",
    "normal_fan",
    "is_refinement",
    "is_unimodular",
    "is_smooth",
    "support_function",
    "newton_polytope",
    "is_convex_pl",
    "is_strictly_convex_pl",
    "pulling_subdivision",
    "fan_polytope",
]

Ray = Tuple[int, ...]


class Cone:
    """
    A strongly convex rational polyhedral cone.

    Parameters
    ----------
    rays : Iterable[Sequence[Rational]]
        Generators; they are made primitive and reduced to the extremal ones.

    Raises
    ------
    ValueError
        Raised when no generator is nonzero or the cone contains a line.

    """

    def __init__(self, rays: Iterable[Sequence[Rational]]) -> None:
        gens = sorted({primitive(r) for r in rays if any(r)})
        if not gens:
            raise ValueError("a cone needs a nonzero generator")
        n = len(gens[0])
        zero = (0,) * n
        hull = convex_hull([zero] + gens)
        if zero not in hull.vertex_index:
            raise ValueError(f"cone contains a line: {gens}")
        normals = sorted({f.normal for f in hull.facets if f.offset == 0})
        all_gens = frozenset(gens)
        faces = {all_gens}
        stack = [all_gens]
        tight = [frozenset(g for g in gens if dot(u, g) == 0) for u in normals]
        while stack:
            f = stack.pop()
            for t in tight:
                g = f & t
                if g and g != f and g not in faces:
                    faces.add(g)
                    stack.append(g)
        extremal = frozenset(g for g in gens if frozenset([g]) in faces)
        self.rays: Tuple[Ray, ...] = tuple(sorted(extremal))
        self.ambient_rank = n
        self.dim = hull.dim
        self.inequalities: Tuple[Ray, ...] = tuple(normals)
        self.equations: Tuple[Ray, ...] = tuple(e.normal for e in hull.equations)
        self.face_rays: Tuple[FrozenSet[Ray], ...] = tuple(
            sorted(
                {f & extremal for f in faces},
                key=lambda f: (rank(list(f)), sorted(f)),
            )
        )

    def __repr__(self) -> str:
        return f"Cone({list(self.rays)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.rays == other.rays

    def __hash__(self) -> int:
        return hash(self.rays)

    def contains(self, x: Sequence[Rational]) -> bool:
        return all(dot(w, x) == 0 for w in self.equations) and all(
            dot(u, x) >= 0 for u in self.inequalities
        )

    def relative_interior_contains(self, x: Sequence[Rational]) -> bool:
        return self.contains(x) and all(dot(u, x) > 0 for u in self.inequalities)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays)

    def interior_point(self) -> Ray:
        """A lattice point of the relative interior (sum of the rays)."""
        return tuple(sum(c) for c in zip(*self.rays))

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @property
    def is_unimodular(self) -> bool:
        """Generated by part of a lattice basis."""
        return self.is_simplicial and lattice_index(self.rays) == 1

    @cached_property
    def _face_cones(self) -> Tuple["Cone", ...]:
        return tuple(self if f == frozenset(self.rays) else Cone(f) for f in self.face_rays)

    def faces(self, dim: Optional[int] = None) -> List["Cone"]:
        """Nonzero faces, the cone itself included."""
        return [c for c in self._face_cones if dim is None or c.dim == dim]

    def truncated(self) -> Polytope:
        """Intersection with the cube [-1, 1]^n."""
        n = self.ambient_rank
        hs = [HalfSpace(u, 0) for u in self.inequalities]
        for w in self.equations:
            hs.append(HalfSpace(w, 0))
            hs.append(HalfSpace(tuple(-a for a in w), 0))
        for i in range(n):
            unit = tuple(int(i == j) for j in range(n))
            hs.append(HalfSpace(unit, 1))
            hs.append(HalfSpace(tuple(-a for a in unit), 1))
        return polytope_from_halfspaces(hs, n)


class Fan:
    """
    A rational polyhedral fan given by its maximal cones.

    Parameters
    ----------
    cones : Iterable[Union[Cone, Iterable[Sequence[Rational]]]]
        Maximal cones, as Cone objects or as lists of generators.

    """

    def __init__(self, cones: Iterable[Union[Cone, Iterable[Sequence[Rational]]]]) -> None:
        maximal: List[Cone] = []
        for c in cones:
            c = c if isinstance(c, Cone) else Cone(c)
            if c not in maximal:
                maximal.append(c)
        if not maximal:
            raise ValueError("a fan needs at least one cone")
        ranks = {c.ambient_rank for c in maximal}
        if len(ranks) != 1:
            raise ValueError("cones of different ambient ranks")
        self.maximal_cones: Tuple[Cone, ...] = tuple(maximal)
        self.ambient_rank: int = ranks.pop()

    def __repr__(self) -> str:
        return (
            f"Fan(ambient_rank={self.ambient_rank}, rays={len(self.rays)}, "
            f"maximal_cones={len(self.maximal_cones)})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return set(self.maximal_cones) == set(other.maximal_cones)

    def __hash__(self) -> int:
        return hash(frozenset(self.maximal_cones))

    @cached_property
    def cones(self) -> List[Cone]:
        """All nonzero cones, sorted by dimension then rays."""
        out = {f for c in self.maximal_cones for f in c.faces()}
        return sorted(out, key=lambda c: (c.dim, c.rays))

    @cached_property
    def rays(self) -> List[Ray]:
        return sorted({r for c in self.maximal_cones for r in c.rays})

    @cached_property
    def _codim_one(self) -> Dict[Cone, List[int]]:
        out: Dict[Cone, List[int]] = {}
        n = self.ambient_rank
        for i, c in enumerate(self.maximal_cones):
            if c.dim != n:
                continue
            for f in c.faces(n - 1):
                out.setdefault(f, []).append(i)
        for f, owners in out.items():
            if len(owners) > 2:
                raise ValueError(f"not a fan: {f} bounds {len(owners)} maximal cones")
        return out

    @cached_property
    def walls(self) -> List[Tuple[int, int, Cone]]:
        """Codimension-one cones shared by two maximal cones, with their owners."""
        return [(o[0], o[1], f) for f, o in self._codim_one.items() if len(o) == 2]

    @cached_property
    def boundary_walls(self) -> List[Tuple[int, Cone]]:
        return [(o[0], f) for f, o in self._codim_one.items() if len(o) == 1]

    @cached_property
    def is_complete(self) -> bool:
        return all(c.dim == self.ambient_rank for c in self.maximal_cones) and (
            not self.boundary_walls
        )

    @property
    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self.maximal_cones)

    def locate(self, x: Sequence[Rational]) -> Optional[int]:
        """Index of the first maximal cone containing x, or None."""
        for i, c in enumerate(self.maximal_cones):
            if c.contains(x):
                return i
        return None

    def validate(self) -> None:
        """
        Checks that maximal cones pairwise meet in a common face.

        Raises
        ------
        ConditionError
            Raised with the offending pair as witness.

        """
        zero = convex_hull([(0,) * self.ambient_rank])
        truncated = [c.truncated() for c in self.maximal_cones]
        for i, j in combinations(range(len(self.maximal_cones)), 2):
            a, b = self.maximal_cones[i], self.maximal_cones[j]
            common = frozenset(a.rays) & frozenset(b.rays)
            if common and not (common in a.face_rays and common in b.face_rays):
                raise ConditionError(
                    f"cones {a} and {b} share rays that span no common face",
                    witness=(a, b),
                )
            expected = Cone(common).truncated() if common else zero
            if truncated[i].intersect(truncated[j]) != expected:
                raise ConditionError(
                    f"cones {a} and {b} do not meet in a common face", witness=(a, b)
                )


class PLFunction:
    """
    A piecewise-linear function on a fan, given by its values on the rays.

    Parameters
    ----------
    fan : Fan
        The fan of linearity.
    ray_values : Mapping[Sequence[int], Rational]
        Value at every ray of `fan`.

    Raises
    ------
    ValueError
        Raised when a ray is missing, or when the values are not linear on
        some maximal cone.

    """

    def __init__(self, fan: Fan, ray_values: Mapping[Sequence[int], Rational]) -> None:
        values = {tuple(int(a) for a in r): Fraction(v) for r, v in ray_values.items()}
        for r in fan.rays:
            if r not in values:
                raise ValueError(f"no value given for ray {r}")
        extra = set(values) - set(fan.rays)
        if extra:
            raise ValueError(f"values given for non-rays: {sorted(extra)}")
        self.fan = fan
        self.ray_values: Dict[Ray, Fraction] = {r: values[r] for r in fan.rays}
        self.linear_forms  # pylint: disable=pointless-statement

    def __repr__(self) -> str:
        inner = ", ".join(f"{r}: {v}" for r, v in self.ray_values.items())
        return f"PLFunction({{{inner}}})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLFunction):
            return NotImplemented
        return self.fan == other.fan and self.ray_values == other.ray_values

    def __hash__(self) -> int:
        return hash((self.fan, tuple(self.ray_values.items())))

    @cached_property
    def linear_forms(self) -> List[Point]:
        """Linear form on each maximal cone, in the dual space."""
        forms = []
        for c in self.fan.maximal_cones:
            form = solve(c.rays, [self.ray_values[r] for r in c.rays])
            if form is None:
                raise ValueError(f"ray values are not linear on {c}")
            forms.append(form)
        return forms

    def value(self, ray: Sequence[int]) -> Fraction:
        return self.ray_values[tuple(ray)]

    def __call__(self, x: Sequence[Rational]) -> Fraction:
        i = self.fan.locate(x)
        if i is None:
            raise ValueError(f"point {tuple(x)} outside the fan support")
        return dot(self.linear_forms[i], x)

    def _check_fan(self, other: "PLFunction") -> None:
        if self.fan != other.fan:
            raise ValueError("functions live on different fans")

    def __add__(self, other: "PLFunction") -> "PLFunction":
        self._check_fan(other)
        return PLFunction(
            self.fan, {r: v + other.ray_values[r] for r, v in self.ray_values.items()}
        )

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        self._check_fan(other)
        return PLFunction(
            self.fan, {r: v - other.ray_values[r] for r, v in self.ray_values.items()}
        )

    def __neg__(self) -> "PLFunction":
        return PLFunction(self.fan, {r: -v for r, v in self.ray_values.items()})

    def __mul__(self, k: Rational) -> "PLFunction":
        return PLFunction(self.fan, {r: k * v for r, v in self.ray_values.items()})

    __rmul__ = __mul__

    def on_fan(self, fan: Fan) -> "PLFunction":
        """The same function re-expressed on a refinement of its fan."""
        return PLFunction(fan, {r: self(r) for r in fan.rays})

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.ray_values.values())

    def wall_slacks(self) -> List[Tuple[Cone, Fraction]]:
        """
        The crossing defect on every wall: how far the function lies above the
        extension of the linear form of one side into the other, minimized
        over both sides.

        """
        out = []
        forms = self.linear_forms
        cones = self.fan.maximal_cones
        for i, j, wall in self.fan.walls:
            slack = None
            for a, b in ((i, j), (j, i)):
                r = next(r for r in cones[b].rays if r not in wall.rays)
                s = self.ray_values[r] - dot(forms[a], r)
                slack = s if slack is None else min(slack, s)
            out.append((wall, slack))
        return out


def normal_fan(P: Polytope) -> Fan:
    """
    The inner normal fan: one maximal cone per vertex, in vertex order.

    Raises
    ------
    ValueError
        Raised when P is not full-dimensional.

    """
    if P.is_empty or not P.is_full_dimensional:
        raise ValueError("normal fan needs a full-dimensional polytope")
    return Fan(
        Cone([f.normal for f, inc in zip(P.facets, P.incidence) if i in inc])
        for i in range(len(P.vertices))
    )


def fan_polytope(fan: Fan) -> Polytope:
    """Convex hull of the primitive ray generators."""
    return convex_hull(fan.rays)


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    """
    Whether every cone of `fine` lies in some cone of `coarse`.

    Raises
    ------
    ValueError
        Raised on rank mismatch.
    FanSupportError
        Raised when the supports differ.

    """
    if fine.ambient_rank != coarse.ambient_rank:
        raise ValueError("rank mismatch")
    if fine.is_complete != coarse.is_complete:
        raise FanSupportError("support mismatch")
    owners = []
    for c in fine.maximal_cones:
        owner = next((D for D in coarse.maximal_cones if D.contains_cone(c)), None)
        if owner is None:
            return False
        owners.append(owner)
    if fine.is_complete:
        return True
    for D in coarse.maximal_cones:
        inside = [c for c, o in zip(fine.maximal_cones, owners) if o == D]
        if not inside:
            raise FanSupportError("support mismatch", witness=D)
        if D.dim != fine.ambient_rank:
            continue
        counts: Dict[Cone, int] = {}
        for c in inside:
            if c.dim == D.dim:
                for f in c.faces(c.dim - 1):
                    counts[f] = counts.get(f, 0) + 1
        for f, k in counts.items():
            if k == 1 and not any(
                all(dot(u, r) == 0 for r in f.rays) for u in D.inequalities
            ):
                raise FanSupportError("support mismatch", witness=f)
    return True


def is_unimodular(fan: Fan) -> Tuple[bool, Optional[Cone]]:
    """Whether every maximal cone is generated by part of a lattice basis."""
    for c in fan.maximal_cones:
        if not c.is_unimodular:
            return False, c
    return True, None


def is_smooth(P: Polytope) -> bool:
    """Delzant test: the normal fan of P is unimodular."""
    return is_unimodular(normal_fan(P))[0]


def support_function(P: Polytope, fan: Optional[Fan] = None) -> PLFunction:
    """
    The function n -> -min <m, n> over P, on `fan` (default: the normal fan).

    Raises
    ------
    ValueError
        Raised when P is empty, or when `fan` does not refine the normal fan.

    """
    if P.is_empty:
        raise ValueError("empty polytope")
    if fan is None:
        fan = normal_fan(P)
    return PLFunction(fan, {r: -P.min_value(r) for r in fan.rays})


def is_convex_pl(f: PLFunction) -> bool:
    return all(s >= 0 for _, s in f.wall_slacks())


def is_strictly_convex_pl(f: PLFunction) -> bool:
    return all(s > 0 for _, s in f.wall_slacks())


def newton_polytope(f: PLFunction) -> Polytope:
    """
    The polytope {m : <m, n> >= -f(n) for every ray n}.

    Raises
    ------
    ValueError
        Raised when the fan is not complete.
    ConditionError
        Raised when f is not convex.

    """
    if not f.fan.is_complete:
        raise ValueError("fan is not complete")
    if not is_convex_pl(f):
        raise ConditionError("not convex; Newton polytope not faithful")
    return polytope_from_halfspaces(
        [HalfSpace(r, v) for r, v in f.ray_values.items()], f.fan.ambient_rank
    )


def pulling_subdivision(P: Polytope) -> Fan:
    """
    Fan over a pulling triangulation of the boundary of P using its lattice
    points, in lexicographic order.

    The result need not be unimodular; check with `is_unimodular()`.

    Raises
    ------
    ValueError
        Raised when 0 is not an interior point of P.

    """
    if not P.is_full_dimensional or any(f.offset <= 0 for f in P.facets):
        raise ValueError("origin not interior")
    points = boundary_lattice_points(P)
    cones: List[Cone] = []
    for facet in P.facet_polytopes():
        cells = [facet]
        for p in (q for q in points if facet.contains(q)):
            refined = []
            for cell in cells:
                if cell.dim == 0 or not cell.contains(p):
                    refined.append(cell)
                    continue
                for sub in cell.facet_polytopes():
                    if not sub.contains(p):
                        refined.append(convex_hull(list(sub.vertices) + [p]))
            cells = refined
        cones.extend(Cone(cell.vertices) for cell in cells)
    return Fan(cones)

