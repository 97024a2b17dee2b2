"""
Contains abstract classes: PolyhedralComplex.

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

from abc import ABC, abstractmethod
from collections import Counter
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence

from .geometry import Polytope
from .interaction import HTMLTableMaker, display_params, format_value, make_plain_text
from .utils.exact import Point, Rational

__all__ = ["PolyhedralComplex"]


class PolyhedralComplex(ABC):
    """
    A finite polyhedral complex in a lattice of given rank, stored as the list
    of its cells; faces of cells are implied.

    Parameters
    ----------
    cells : Iterable[Polytope]
        Cells of the complex; duplicates are dropped.
    ambient_rank : int
        Rank of the ambient lattice.

    """

    def __init__(self, cells: Iterable[Polytope], ambient_rank: int) -> None:
        self.ambient_rank = ambient_rank
        self.__cells = sorted(
            {c for c in cells if not c.is_empty}, key=lambda c: (c.dim, c.vertices)
        )

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(dim={self.dim}, cells={len(self.cells)}, "
            f"facets={len(self.facets)})"
        )

    def _repr_mimebundle_(self, *_, **__) -> Optional[Dict[str, Any]]:
        if display_params.use_mimebundle:
            return {"text/html": self.to_html()}

    def __len__(self) -> int:
        return len(self.__cells)

    def __iter__(self):
        return iter(self.__cells)

    @property
    @abstractmethod
    def kind(self) -> str:
        """Short name of the complex, used in reports and exports."""

    @property
    def cells(self) -> List[Polytope]:
        """Cells in order of dimension, then vertices."""
        return self.__cells

    @cached_property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    @cached_property
    def maximal_cells(self) -> List[Polytope]:
        """Cells that are not proper faces of another cell."""
        return [
            c
            for c in self.cells
            if not any(d.dim > c.dim and d.is_face(c) for d in self.cells)
        ]

    @cached_property
    def facets(self) -> List[Polytope]:
        """Maximal cells of top dimension."""
        return [c for c in self.maximal_cells if c.dim == self.dim]

    @property
    def is_pure(self) -> bool:
        return all(c.dim == self.dim for c in self.maximal_cells)

    @cached_property
    def faces(self) -> Dict[FrozenSet[Point], int]:
        """All faces of all cells, as vertex sets, with their dimensions."""
        out: Dict[FrozenSet[Point], int] = {}
        for c in self.maximal_cells:
            for f, d in c.face_lattice.items():
                out[frozenset(c.vertices[i] for i in f)] = d
        return out

    def f_vector(self) -> List[int]:
        """Number of faces in each dimension 0, ..., dim."""
        counts = Counter(self.faces.values())
        return [counts.get(d, 0) for d in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.faces.values())

    @cached_property
    def facet_adjacency(self) -> Dict[int, List[int]]:
        """Facets (by index) sharing a codimension-one face with each facet."""
        ridges: Dict[FrozenSet[Point], List[int]] = {}
        for k, c in enumerate(self.facets):
            for f in c.faces(c.dim - 1):
                ridges.setdefault(frozenset(c.vertices[i] for i in f), []).append(k)
        adj: Dict[int, List[int]] = {k: [] for k in range(len(self.facets))}
        for owners in ridges.values():
            for a, b in combinations(owners, 2):
                adj[a].append(b)
                adj[b].append(a)
        return {k: sorted(set(v)) for k, v in adj.items()}

    def connected_components(self) -> int:
        """Number of connected components of the facet adjacency graph."""
        seen: set = set()
        count = 0
        for start in self.facet_adjacency:
            if start in seen:
                continue
            count += 1
            stack = [start]
            while stack:
                k = stack.pop()
                if k not in seen:
                    seen.add(k)
                    stack.extend(self.facet_adjacency[k])
        return count

    def is_pseudomanifold(self) -> bool:
        """Pure, and every codimension-one face lies in exactly two facets."""
        if not self.is_pure or self.dim < 1:
            return False
        ridges: Counter = Counter()
        for c in self.facets:
            for f in c.faces(c.dim - 1):
                ridges[frozenset(c.vertices[i] for i in f)] += 1
        return all(k == 2 for k in ridges.values())

    def cycle_count(self) -> Optional[int]:
        """
        Number of cycles when the complex is a disjoint union of cycles of
        segments; None otherwise.

        """
        if self.dim != 1 or not self.is_pseudomanifold():
            return None
        return self.connected_components()

    def contains(self, x: Sequence[Rational]) -> bool:
        return any(c.contains(x) for c in self.maximal_cells)

    def covers(self, cell: Polytope) -> bool:
        """
        Whether the support of the complex contains `cell`.

        True when one cell contains it, or when the cells of the same
        dimension lying inside it fill its volume.

        """
        if any(c.contains_polytope(cell) for c in self.maximal_cells):
            return True
        if cell.dim <= 0:
            return False
        pivots = cell.chart.pivots
        inside = [
            c for c in self.cells if c.dim == cell.dim and cell.contains_polytope(c)
        ]
        filled = sum((c.projected_volume(pivots) for c in inside), Fraction(0))
        return filled == cell.projected_volume(pivots)

    def uncovered_by(self, other: "PolyhedralComplex") -> List[Polytope]:
        """Maximal cells of this complex that `other` does not cover."""
        return [c for c in self.maximal_cells if not other.covers(c)]

    def to_html(self) -> str:
        """Return an HTML string for representation."""
        html_maker = HTMLTableMaker(
            index=list(range(len(self.facets))), columns=["dim", "vertices"]
        )
        for i, c in enumerate(self.facets):
            html_maker[i, 0] = str(c.dim)
            html_maker[i, 1] = make_plain_text(
                ", ".join(format_value(tuple(v)) for v in c.vertices)
            )
        return html_maker.make()

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready description: kind, rank and exact cell vertices."""
        return {
            "kind": self.kind,
            "ambient_rank": self.ambient_rank,
            "dim": self.dim,
            "cells": [
                {"dim": c.dim, "vertices": [[format_value(x) for x in v] for v in c.vertices]}
                for c in self.maximal_cells
            ],
        }

    def vertex_points(self) -> List[Point]:
        """All vertices of all cells, sorted."""
        return sorted({v for c in self.cells for v in c.vertices})
