"""
Contains the exact polyhedral kernel: HalfSpace, Polytope, convex_hull(),
polytope_from_halfspaces(), polar_dual(), is_reflexive(), minkowski_sum(),
face_minkowski_test(), lattice_points(), normalized_volume().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from typing_extensions import Self

from .utils.exact import (
    Point,
    Rational,
    add,
    as_point,
    determinant,
    dot,
    format_fraction,
    integral_row,
    is_integral,
    lattice_index,
    nullspace,
    pivot_columns,
    primitive,
    rank,
    row_basis,
    solve,
    sub,
)

__all__ = [
    "HalfSpace",
    "Polytope",
    "convex_hull",
    "polytope_from_halfspaces",
    "polar_dual",
    "is_reflexive",
    "minkowski_sum",
    "face_minkowski_test",
    "lattice_points",
    "normalized_volume",
    "boundary_lattice_points",
    "MAX_BOX_POINTS",
]

MAX_BOX_POINTS = 20_000_000

Row = Tuple[Tuple[Fraction, ...], Fraction]


@dataclass(frozen=True, order=True)
class HalfSpace:
    """
    The set {x : <normal, x> >= -offset}. When listed among the equations of a
    polytope it stands for the hyperplane <normal, x> + offset = 0.

    Parameters
    ----------
    normal : Tuple[int, ...]
        Primitive integer normal.
    offset : Fraction
        Offset.

    """

    normal: Tuple[int, ...]
    offset: Fraction

    def __post_init__(self) -> None:
        if not any(self.normal):
            raise ValueError("zero normal")
        if math.gcd(*self.normal) != 1:
            raise ValueError(f"normal is not primitive: {self.normal}")
        object.__setattr__(self, "normal", tuple(int(a) for a in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))

    @classmethod
    def from_inequality(cls, coeffs: Sequence[Rational], bound: Rational) -> Self:
        """Normalizes <coeffs, x> >= bound."""
        normal = primitive(coeffs)
        i = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if i is None:
            raise ValueError("zero normal")
        factor = Fraction(normal[i]) / Fraction(coeffs[i])
        return cls(normal, -Fraction(bound) * factor)

    def value(self, x: Sequence[Rational]) -> Fraction:
        """<normal, x> + offset, nonnegative exactly on the half-space."""
        return dot(self.normal, x) + self.offset

    def contains(self, x: Sequence[Rational]) -> bool:
        return self.value(x) >= 0

    def is_tight(self, x: Sequence[Rational]) -> bool:
        return self.value(x) == 0

    def negated(self) -> Self:
        """The opposite closed half-space."""
        return self.__class__(tuple(-a for a in self.normal), -self.offset)

    def as_row(self) -> Row:
        return tuple(Fraction(a) for a in self.normal), self.offset


class Chart(NamedTuple):
    """Affine coordinates on the affine span of a polytope."""

    origin: Point
    pivots: Tuple[int, ...]
    lift: Tuple[Point, ...]

    def to_chart(self, x: Sequence[Rational]) -> Point:
        return tuple(Fraction(x[j]) - self.origin[j] for j in self.pivots)

    def from_chart(self, z: Sequence[Rational]) -> Point:
        p = list(self.origin)
        for zj, vec in zip(z, self.lift):
            if zj:
                for i, a in enumerate(vec):
                    p[i] += zj * a
        return tuple(p)

    def pull_back(self, coeffs: Sequence[Rational], const: Rational) -> Row:
        """Restricts the affine function <coeffs, x> + const to the chart."""
        return (
            tuple(dot(coeffs, vec) for vec in self.lift),
            dot(coeffs, self.origin) + Fraction(const),
        )


def _extreme_rays(rows: Sequence[Sequence[Rational]], dim: int) -> List[Tuple[int, ...]]:
    # Double description method on {y : <row, y> >= 0 for all rows}.
    rows = [integral_row(r) for r in rows]
    basis = row_basis(rows)
    if len(basis) < dim:
        raise ValueError("cone is not pointed")
    rays: List[Tuple[Tuple[int, ...], FrozenSet[int]]] = []
    for j in basis:
        v = nullspace([rows[i] for i in basis if i != j], dim)[0]
        if sum(a * b for a, b in zip(rows[j], v)) < 0:
            v = tuple(-a for a in v)
        rays.append((v, frozenset(i for i in basis if i != j)))
    done = set(basis)
    for i, row in enumerate(rows):
        if i in done:
            continue
        done.add(i)
        values = [sum(a * b for a, b in zip(row, v)) for v, _ in rays]
        pos = [k for k, s in enumerate(values) if s > 0]
        neg = [k for k, s in enumerate(values) if s < 0]
        new: List[Tuple[Tuple[int, ...], FrozenSet[int]]] = []
        for p in pos:
            for q in neg:
                common = rays[p][1] & rays[q][1]
                if len(common) < dim - 2:
                    continue
                if any(
                    k not in (p, q) and common <= rays[k][1] for k in range(len(rays))
                ):
                    continue
                sp, sq = values[p], -values[q]
                w = primitive(
                    [sq * a + sp * b for a, b in zip(rays[p][0], rays[q][0])]
                )
                new.append((w, common | {i}))
        rays = [
            (v, z | {i}) if values[k] == 0 else (v, z)
            for k, (v, z) in enumerate(rays)
            if values[k] >= 0
        ] + new
    return [v for v, _ in rays]


def _hull_inequalities(z: Sequence[Point], k: int) -> List[Tuple[Tuple[int, ...], Fraction]]:
    # Facets a·z >= beta of a full-dimensional point set in R^k.
    out = []
    for ray in _extreme_rays([tuple(p) + (Fraction(-1),) for p in z], k + 1):
        a, beta = ray[:-1], ray[-1]
        if not any(a):
            continue
        g = math.gcd(*a)
        out.append((tuple(c // g for c in a), Fraction(beta, g)))
    return out


def _vertices_from_rows(rows: Sequence[Row], k: int) -> List[Point]:
    # Vertices of {z in R^k : coeffs·z + const >= 0 for all rows}.
    homogeneous = []
    for c, const in rows:
        if any(c):
            homogeneous.append(tuple(c) + (const,))
        elif const < 0:
            return []
    homogeneous.append((0,) * k + (1,))
    try:
        rays = _extreme_rays(homogeneous, k + 1)
    except ValueError as e:
        raise ValueError("unbounded input") from e
    vertices = []
    for ray in rays:
        if ray[-1] == 0:
            raise ValueError("unbounded input")
        vertices.append(tuple(Fraction(a, ray[-1]) for a in ray[:-1]))
    return vertices


class Polytope:
    """
    A convex polytope with exact rational vertices, possibly lower-dimensional.

    Build instances with `convex_hull()` or `polytope_from_halfspaces()`. The
    V-representation (`vertices`, sorted) and the H-representation (`facets`
    plus the `equations` of the affine span) describe the same set; faces are
    identified by the frozenset of indices of their vertices.

    """

    def __init__(
        self,
        vertices: Sequence[Point],
        facets: Sequence[HalfSpace],
        equations: Sequence[HalfSpace],
        incidence: Sequence[FrozenSet[int]],
        ambient_rank: int,
        dim: int,
        chart: Optional[Chart],
    ) -> None:
        self.vertices: Tuple[Point, ...] = tuple(vertices)
        self.facets: Tuple[HalfSpace, ...] = tuple(facets)
        self.equations: Tuple[HalfSpace, ...] = tuple(equations)
        self.incidence: Tuple[FrozenSet[int], ...] = tuple(incidence)
        self.ambient_rank = ambient_rank
        self.dim = dim
        self.chart = chart
        self.__faces: Dict[FrozenSet[int], Polytope] = {}

    @classmethod
    def empty(cls, ambient_rank: int) -> Self:
        """The empty polytope in a space of the given rank."""
        return cls((), (), (), (), ambient_rank, -1, None)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Polytope(empty, ambient_rank={self.ambient_rank})"
        verts = ", ".join(
            "(" + ", ".join(format_fraction(c) for c in v) + ")" for v in self.vertices
        )
        return f"Polytope(dim={self.dim}, vertices=[{verts}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.vertices))

    @property
    def is_empty(self) -> bool:
        return self.dim < 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @cached_property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    @cached_property
    def vertex_index(self) -> Dict[Point, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def contains(self, x: Sequence[Rational]) -> bool:
        """Exact membership test against the H-representation."""
        if self.is_empty:
            return False
        return all(e.value(x) == 0 for e in self.equations) and all(
            f.value(x) >= 0 for f in self.facets
        )

    def relative_interior_contains(self, x: Sequence[Rational]) -> bool:
        return self.contains(x) and all(f.value(x) > 0 for f in self.facets)

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def min_value(self, direction: Sequence[Rational]) -> Fraction:
        """min <v, direction> over the polytope."""
        if self.is_empty:
            raise ValueError("empty polytope")
        return min(dot(v, direction) for v in self.vertices)

    # Face lattice -------------------------------------------------------------

    def _affine_dim(self, indices: Iterable[int]) -> int:
        indices = sorted(indices)
        if not indices:
            return -1
        base = self.vertices[indices[0]]
        return rank([sub(self.vertices[i], base) for i in indices[1:]])

    @cached_property
    def face_lattice(self) -> Dict[FrozenSet[int], int]:
        """All nonempty faces (vertex-index sets) with their dimensions."""
        if self.is_empty:
            return {}
        full = frozenset(range(len(self.vertices)))
        faces = {full}
        stack = [full]
        while stack:
            f = stack.pop()
            for inc in self.incidence:
                g = f & inc
                if g and g != f and g not in faces:
                    faces.add(g)
                    stack.append(g)
        return {f: (self.dim if f == full else self._affine_dim(f)) for f in faces}

    def faces(self, dim: Optional[int] = None) -> List[FrozenSet[int]]:
        """Faces in deterministic order, optionally of one dimension only."""
        return sorted(
            (f for f, d in self.face_lattice.items() if dim is None or d == dim),
            key=lambda f: (self.face_lattice[f], sorted(f)),
        )

    def face(self, indices: Iterable[int]) -> "Polytope":
        """The face spanned by the given vertex indices, as a polytope."""
        indices = frozenset(indices)
        if len(indices) == len(self.vertices):
            return self
        if indices not in self.__faces:
            self.__faces[indices] = convex_hull([self.vertices[i] for i in indices])
        return self.__faces[indices]

    def facet_polytopes(self) -> List["Polytope"]:
        return [self.face(f) for f in self.faces(self.dim - 1)]

    def minimal_face(self, indices: Iterable[int]) -> FrozenSet[int]:
        """Smallest face containing the given vertices."""
        indices = frozenset(indices)
        out = frozenset(range(len(self.vertices)))
        for inc in self.incidence:
            if indices <= inc:
                out &= inc
        return out

    def is_face(self, other: "Polytope") -> bool:
        """Whether `other` is a (nonempty) face of this polytope, itself included."""
        if self.is_empty or other.is_empty or self.ambient_rank != other.ambient_rank:
            return False
        indices = []
        for v in other.vertices:
            if v not in self.vertex_index:
                return False
            indices.append(self.vertex_index[v])
        indices = frozenset(indices)
        return self.minimal_face(indices) == indices

    # Triangulation and volumes ------------------------------------------------

    def triangulation(self) -> List[Tuple[int, ...]]:
        """Pulling triangulation in vertex order, as tuples of vertex indices."""
        if self.is_empty:
            return []
        lattice = self.face_lattice
        memo: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}

        def pull(face: FrozenSet[int], d: int) -> List[Tuple[int, ...]]:
            if face in memo:
                return memo[face]
            if d == 0:
                result = [tuple(face)]
            else:
                apex = min(face)
                result = []
                for sub_face, sub_dim in lattice.items():
                    if sub_dim == d - 1 and sub_face < face and apex not in sub_face:
                        result.extend((apex,) + s for s in pull(sub_face, sub_dim))
            memo[face] = result
            return result

        return pull(frozenset(range(len(self.vertices))), self.dim)

    def normalized_volume(self) -> Fraction:
        """Volume relative to the lattice of the affine span; see `normalized_volume()`."""
        if self.is_empty:
            return Fraction(0)
        if not self.is_lattice:
            raise ValueError("non-lattice vertices")
        total = 0
        for simplex in self.triangulation():
            base = self.vertices[simplex[0]]
            edges = [[int(c) for c in sub(self.vertices[i], base)] for i in simplex[1:]]
            total += lattice_index(edges) if edges else 1
        return Fraction(total, math.factorial(self.dim))

    def projected_volume(self, pivots: Sequence[int]) -> Fraction:
        """
        Euclidean volume of the projection onto the coordinates `pivots`.

        For a polytope of dimension len(pivots) whose chart uses these pivots,
        this is its volume in chart coordinates.

        """
        if self.is_empty or self.dim != len(pivots):
            return Fraction(0)
        if self.dim == 0:
            return Fraction(1)
        total = Fraction(0)
        for simplex in self.triangulation():
            base = self.vertices[simplex[0]]
            edges = [[self.vertices[i][j] - base[j] for j in pivots] for i in simplex[1:]]
            total += abs(determinant(edges))
        return total / math.factorial(self.dim)

    def centroid(self) -> Point:
        """Exact barycenter of the polytope (uniform density on its span)."""
        if self.is_empty:
            raise ValueError("empty polytope")
        if self.dim == 0:
            return self.vertices[0]
        pivots = self.chart.pivots
        weight = Fraction(0)
        acc = [Fraction(0)] * self.ambient_rank
        for simplex in self.triangulation():
            base = self.vertices[simplex[0]]
            edges = [[self.vertices[i][j] - base[j] for j in pivots] for i in simplex[1:]]
            w = abs(determinant(edges))
            weight += w
            for i in simplex:
                for c in range(self.ambient_rank):
                    acc[c] += w * self.vertices[i][c] / len(simplex)
        return tuple(a / weight for a in acc)

    # Constructions ------------------------------------------------------------

    def scale(self, k: Rational) -> Self:
        """The dilate k·P for k >= 0."""
        k = Fraction(k)
        if k < 0:
            raise ValueError("negative dilation factor")
        if self.is_empty:
            return self
        if k == 0:
            return convex_hull([(0,) * self.ambient_rank])
        return self.__class__(
            [tuple(k * c for c in v) for v in self.vertices],
            [HalfSpace(f.normal, k * f.offset) for f in self.facets],
            [HalfSpace(e.normal, k * e.offset) for e in self.equations],
            self.incidence,
            self.ambient_rank,
            self.dim,
            Chart(tuple(k * c for c in self.chart.origin), self.chart.pivots, self.chart.lift),
        )

    def translate(self, v: Sequence[Rational]) -> Self:
        if self.is_empty:
            return self
        return convex_hull([add(p, v) for p in self.vertices])

    def clip(self, rows: Sequence[Row]) -> "Polytope":
        """
        Intersects with {x : <coeffs, x> + const >= 0} for every (coeffs, const).

        Parameters
        ----------
        rows : Sequence[Row]
            Affine inequalities in ambient coordinates (need not be primitive).

        Returns
        -------
        Polytope
            The intersection, possibly empty.

        """
        if self.is_empty:
            return self
        if self.dim == 0:
            v = self.vertices[0]
            if all(dot(c, v) + const >= 0 for c, const in rows):
                return self
            return self.empty(self.ambient_rank)
        chart_rows = [self.chart.pull_back(f.normal, f.offset) for f in self.facets]
        chart_rows.extend(self.chart.pull_back(c, const) for c, const in rows)
        zverts = _vertices_from_rows(chart_rows, self.dim)
        if not zverts:
            return self.empty(self.ambient_rank)
        return convex_hull([self.chart.from_chart(z) for z in zverts])

    def intersect(self, other: "Polytope") -> "Polytope":
        """Intersection with another polytope of the same ambient rank."""
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("rank mismatch")
        if self.is_empty or other.is_empty:
            return self.empty(self.ambient_rank)
        rows = [f.as_row() for f in other.facets]
        for e in other.equations:
            rows.append(e.as_row())
            rows.append(e.negated().as_row())
        return self.clip(rows)


def _lift_vectors(basis: List[Point], pivots: List[int]) -> Tuple[Point, ...]:
    # Vectors of the span of `basis` whose pivot coordinates are unit vectors.
    k = len(pivots)
    transposed = [[basis[i][p] for i in range(k)] for p in pivots]
    lift = []
    for j in range(k):
        coeffs = solve(transposed, [int(i == j) for i in range(k)], unique=True)
        vec = [Fraction(0)] * len(basis[0])
        for c, b in zip(coeffs, basis):
            for i, a in enumerate(b):
                vec[i] += c * a
        lift.append(tuple(vec))
    return tuple(lift)


def convex_hull(points: Iterable[Sequence[Union[int, str, Fraction]]]) -> Polytope:
    """
    Convex hull of finitely many rational points.

    Parameters
    ----------
    points : Iterable[Sequence[Union[int, str, Fraction]]]
        Points of a common ambient rank.

    Returns
    -------
    Polytope
        The hull, with vertices, facets, equations of the affine span and the
        vertex-facet incidences.

    Raises
    ------
    ValueError
        Raised when the point set is empty or of mixed ranks.

    """
    pts = sorted({as_point(p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points of different ranks")
    origin = pts[0]
    diffs = [sub(p, origin) for p in pts[1:]]
    basis = [diffs[i] for i in row_basis(diffs)]
    k = len(basis)
    equations = [HalfSpace(w, -dot(w, origin)) for w in nullspace(basis, n)]
    pivots = pivot_columns(basis, n) if basis else []
    chart = Chart(origin, tuple(pivots), _lift_vectors(basis, pivots) if basis else ())
    if k == 0:
        return Polytope((origin,), (), equations, (), n, 0, chart)

    zs = [chart.to_chart(p) for p in pts]
    inequalities = _hull_inequalities(zs, k)
    vertex_ids = [
        i
        for i, z in enumerate(zs)
        if rank([a for a, beta in inequalities if dot(a, z) == beta]) == k
    ]
    vertices = [pts[i] for i in vertex_ids]
    facets = []
    for a, beta in inequalities:
        normal = [0] * n
        for j, c in zip(pivots, a):
            normal[j] = c
        facets.append(HalfSpace(tuple(normal), -(beta + dot(normal, origin))))
    facets.sort()
    for f in facets:
        if any(f.value(p) < 0 for p in pts):
            raise RuntimeError("hull representations disagree")
    incidence = [
        frozenset(i for i, v in enumerate(vertices) if f.is_tight(v)) for f in facets
    ]
    return Polytope(vertices, facets, equations, incidence, n, k, chart)


def polytope_from_halfspaces(halfspaces: Iterable[HalfSpace], ambient_rank: int) -> Polytope:
    """
    The polytope cut out by finitely many half-spaces.

    Parameters
    ----------
    halfspaces : Iterable[HalfSpace]
        Half-spaces; pairs of opposite half-spaces encode equations.
    ambient_rank : int
        Rank of the ambient space.

    Returns
    -------
    Polytope
        The intersection, or the empty polytope when infeasible.

    Raises
    ------
    ValueError
        Raised when the intersection is unbounded.

    """
    rows = [h.as_row() for h in halfspaces]
    if any(len(c) != ambient_rank for c, _ in rows):
        raise ValueError("rank mismatch")
    vertices = _vertices_from_rows(rows, ambient_rank)
    if not vertices:
        return Polytope.empty(ambient_rank)
    return convex_hull(vertices)


def polar_dual(P: Polytope) -> Polytope:
    """
    The polar dual {n : <m, n> >= -1 for all m in P}.

    Raises
    ------
    ValueError
        Raised when P is not full-dimensional or 0 is not an interior point.

    """
    if not P.is_full_dimensional or any(f.offset <= 0 for f in P.facets):
        raise ValueError("origin not interior")
    return convex_hull([tuple(Fraction(a) / f.offset for a in f.normal) for f in P.facets])


def is_reflexive(P: Polytope) -> bool:
    """Lattice vertices, 0 interior and every facet at lattice distance 1."""
    return (
        P.is_full_dimensional
        and P.is_lattice
        and all(f.offset == 1 for f in P.facets)
    )


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    """Hull of the pairwise vertex sums; empty if either summand is empty."""
    if P.ambient_rank != Q.ambient_rank:
        raise ValueError("rank mismatch")
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.ambient_rank)
    return convex_hull(add(p, q) for p in P.vertices for q in Q.vertices)


def face_minkowski_test(P: Polytope, Q: Polytope, F1: Polytope, F2: Polytope) -> bool:
    """
    Whether F1 + F2 is a face of P + Q.

    Equivalent to the relative interiors of the normal cones of F1 and F2
    meeting: F1 + F2 is then the face of P + Q minimizing any common normal.

    Raises
    ------
    ValueError
        Raised when F1 is not a face of P or F2 is not a face of Q.

    """
    if not P.is_face(F1):
        raise ValueError("F1 is not a face of P")
    if not Q.is_face(F2):
        raise ValueError("F2 is not a face of Q")
    return minkowski_sum(P, Q).is_face(minkowski_sum(F1, F2))


def lattice_points(P: Polytope) -> List[Tuple[int, ...]]:
    """
    All lattice points of P in lexicographic order.

    Bounding-box scan with an exact integer membership test; the box size is
    exponential in the rank and capped by `MAX_BOX_POINTS`.

    """
    if P.is_empty:
        return []
    n = P.ambient_rank
    lows = [math.ceil(min(v[i] for v in P.vertices)) for i in range(n)]
    highs = [math.floor(max(v[i] for v in P.vertices)) for i in range(n)]
    if any(lo > hi for lo, hi in zip(lows, highs)):
        return []
    if math.prod(hi - lo + 1 for lo, hi in zip(lows, highs)) > MAX_BOX_POINTS:
        raise ValueError("bounding box too large; lower the dilation")

    def scaled(h: HalfSpace) -> Tuple[List[int], int]:
        den = h.offset.denominator
        return [den * a for a in h.normal], h.offset.numerator

    ineqs = [scaled(f) for f in P.facets]
    eqs = [scaled(e) for e in P.equations]
    A = np.array([a for a, _ in ineqs], dtype=np.int64).reshape(len(ineqs), n)
    b = np.array([c for _, c in ineqs], dtype=np.int64)
    E = np.array([a for a, _ in eqs], dtype=np.int64).reshape(len(eqs), n)
    e = np.array([c for _, c in eqs], dtype=np.int64)

    out: List[Tuple[int, ...]] = []
    tail = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in zip(lows[1:], highs[1:])]
    for first in range(lows[0], highs[0] + 1):
        grids = np.meshgrid(np.array([first], dtype=np.int64), *tail, indexing="ij")
        X = np.stack([g.ravel() for g in grids], axis=1)
        mask = np.all(X @ A.T + b >= 0, axis=1) & np.all(X @ E.T + e == 0, axis=1)
        out.extend(tuple(int(c) for c in row) for row in X[mask])
    return out


def normalized_volume(P: Polytope) -> Fraction:
    """
    Lattice-normalized volume of a lattice polytope of any dimension k.

    The volume is taken relative to the lattice of the affine span of P, so
    that a unimodular k-simplex has volume 1/k!; computed from a pulling
    triangulation and the Smith normal form of each simplex's edge matrix.

    Raises
    ------
    ValueError
        Raised when P has a non-lattice vertex.

    """
    return P.normalized_volume()


def boundary_lattice_points(P: Polytope) -> List[Tuple[int, ...]]:
    """Lattice points of P lying on at least one facet."""
    return [m for m in lattice_points(P) if any(f.is_tight(m) for f in P.facets)]

