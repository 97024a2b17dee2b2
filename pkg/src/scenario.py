"""
Contains scenario files and exports: Scenario, parse_scenario(),
resolve_scenario(), export_json(), export_obj(), load_complexes().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InputError
from .geometry import Polytope, convex_hull, is_reflexive
from .transport import SolverParams
from .utils.exact import as_fraction, format_fraction
from .utils.validator import SimpleValidator

if TYPE_CHECKING:
    from .abc import PolyhedralComplex

__all__ = [
    "BUNDLED_SCENARIOS",
    "CountingParams",
    "Scenario",
    "resolve_scenario",
    "parse_scenario",
    "export_json",
    "export_obj",
    "load_complexes",
]

PathLike = Union[Path, str]
Ray = Tuple[int, ...]

SCENARIO_DIR = Path(__file__).parent / "scenarios"
BUNDLED_SCENARIOS = ("sq", "p2", "p3_22", "quartic")

_FIELDS = {
    "name",
    "rank",
    "d",
    "r",
    "delta_vertices",
    "nef_partition",
    "h_values",
    "hcheck_values",
    "sigma_prime",
    "sigma_check_prime",
    "sigma_tilde_prime",
    "solver",
}
_REQUIRED = ("rank", "d", "r", "delta_vertices", "nef_partition")
_SOLVER_FIELDS = {"s", "tol", "max_iter", "k_min", "k_max", "threads"}


@dataclass
class CountingParams:
    """Window and parallelism of the lattice-point counts."""

    k_min: int = SimpleValidator(int, ge=1, default=1)
    k_max: Optional[int] = SimpleValidator(int, ge=1, optional=True, default=None)
    threads: int = SimpleValidator(int, ge=1, default=1)


@dataclass
class Scenario:
    """
    Validated input data of a degeneration.

    Rays and values are exact; parts are numbered from 0 here (files number
    them from 1). Absent optional data is None and defaults downstream.

    """

    name: str
    rank: int
    d: int
    r: int
    delta: Polytope
    parts: Optional[List[List[Ray]]] = None
    ray_assignment: Optional[Dict[Ray, int]] = None
    h_values: Optional[Dict[Ray, Fraction]] = None
    hcheck_values: Optional[Dict[Ray, Fraction]] = None
    sigma_prime: Optional[List[List[Ray]]] = None
    sigma_check_prime: Optional[List[List[Ray]]] = None
    sigma_tilde_prime: Optional[List[List[Ray]]] = None
    solver: SolverParams = field(default_factory=SolverParams)
    counting: CountingParams = field(default_factory=CountingParams)
    path: Optional[Path] = None


def resolve_scenario(path_or_name: PathLike) -> Path:
    """
    Maps a bundled scenario name ("sq", "p2", "p3_22", "quartic") to its file;
    anything else is taken as a path.

    Raises
    ------
    InputError
        Raised when no such file exists.

    """
    path = Path(path_or_name)
    if path.exists():
        return path
    if str(path_or_name) in BUNDLED_SCENARIOS:
        return SCENARIO_DIR / f"{path_or_name}.json"
    raise InputError(f"no such scenario: {path_or_name}")


class _Reader:
    """Field-level checks with dotted-path diagnostics."""

    def __init__(self, source: str) -> None:
        self.source = source

    def fail(self, where: str, msg: str) -> InputError:
        return InputError(f"{self.source}: {where}: {msg}")

    def mapping(self, x: Any, where: str, allowed: set) -> Dict[str, Any]:
        if not isinstance(x, dict):
            raise self.fail(where, "expected an object")
        unknown = sorted(set(x) - allowed)
        if unknown:
            raise self.fail(where, f"unknown field {unknown[0]!r}")
        return x

    def integer(self, x: Any, where: str, minimum: Optional[int] = None) -> int:
        try:
            value = as_fraction(x)
        except (TypeError, ValueError) as e:
            raise self.fail(where, "expected an integer") from e
        if value.denominator != 1:
            raise self.fail(where, f"expected an integer; got {x!r}")
        if minimum is not None and value < minimum:
            raise self.fail(where, f"expected an integer >= {minimum}; got {x!r}")
        return int(value)

    def number(self, x: Any, where: str) -> Fraction:
        try:
            return as_fraction(x)
        except (TypeError, ValueError) as e:
            raise self.fail(where, "expected an integer or a decimal string") from e

    def real(self, x: Any, where: str) -> float:
        if isinstance(x, float) and not isinstance(x, bool):
            return x
        if isinstance(x, str):
            try:
                return float(x)
            except ValueError as e:
                raise self.fail(where, f"expected a number; got {x!r}") from e
        return float(self.number(x, where))

    def vector(self, x: Any, where: str, rank: int) -> Ray:
        if not isinstance(x, list) or len(x) != rank:
            raise self.fail(where, f"expected a list of {rank} integers")
        return tuple(self.integer(c, f"{where}[{k}]") for k, c in enumerate(x))

    def vectors(self, x: Any, where: str, rank: int) -> List[Ray]:
        if not isinstance(x, list) or not x:
            raise self.fail(where, "expected a nonempty list of vectors")
        return [self.vector(v, f"{where}[{k}]", rank) for k, v in enumerate(x)]

    def cones(self, x: Any, where: str, rank: int) -> List[List[Ray]]:
        if not isinstance(x, list) or not x:
            raise self.fail(where, "expected a nonempty list of cones")
        return [self.vectors(c, f"{where}[{k}]", rank) for k, c in enumerate(x)]

    def values(self, x: Any, where: str, rank: int) -> Dict[Ray, Fraction]:
        if not isinstance(x, list):
            raise self.fail(where, "expected a list of {ray, value} objects")
        out: Dict[Ray, Fraction] = {}
        for k, item in enumerate(x):
            at = f"{where}[{k}]"
            item = self.mapping(item, at, {"ray", "value"})
            if "ray" not in item or "value" not in item:
                raise self.fail(at, "expected fields 'ray' and 'value'")
            ray = self.vector(item["ray"], f"{at}.ray", rank)
            if ray in out:
                raise self.fail(at, f"duplicate ray {list(ray)}")
            out[ray] = Fraction(self.integer(item["value"], f"{at}.value"))
        return out


def _load_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e


def parse_scenario(path_or_name: PathLike) -> Scenario:
    """
    Reads and validates a scenario file.

    Parameters
    ----------
    path_or_name : PathLike
        Path to a JSON scenario, or the name of a bundled one.

    Returns
    -------
    Scenario
        Validated scenario. Omitted h, ȟ and fans stay None; they default to
        the anticanonical data downstream.

    Raises
    ------
    InputError
        Raised on malformed JSON (with line and column), on schema
        violations (with the dotted field path), on rank inconsistency and
        when Δ is not reflexive.

    """
    path = resolve_scenario(path_or_name)
    raw = _load_json(path)
    rd = _Reader(str(path))
    data = rd.mapping(raw, "<root>", _FIELDS)
    for key in _REQUIRED:
        if key not in data:
            raise rd.fail("<root>", f"missing field {key!r}")
    rank = rd.integer(data["rank"], "rank", 1)
    d = rd.integer(data["d"], "d", 0)
    r = rd.integer(data["r"], "r", 1)
    if rank != d + r:
        raise InputError(f"{path}: rank inconsistency: rank = {rank} but d + r = {d + r}")
    name = data.get("name", path.stem)
    if not isinstance(name, str):
        raise rd.fail("name", "expected a string")

    vertices = rd.vectors(data["delta_vertices"], "delta_vertices", rank)
    try:
        delta = convex_hull(vertices)
    except ValueError as e:
        raise rd.fail("delta_vertices", str(e)) from e
    if not is_reflexive(delta):
        raise InputError(f"{path}: delta not reflexive")

    scenario = Scenario(name=name, rank=rank, d=d, r=r, delta=delta, path=path)
    nef = rd.mapping(data["nef_partition"], "nef_partition", {"parts", "ray_assignment"})
    if len(nef) != 1:
        raise rd.fail("nef_partition", "expected exactly one of 'parts', 'ray_assignment'")
    if "parts" in nef:
        if not isinstance(nef["parts"], list):
            raise rd.fail("nef_partition.parts", "expected a list of vertex lists")
        scenario.parts = [
            rd.vectors(p, f"nef_partition.parts[{k}]", rank)
            for k, p in enumerate(nef["parts"])
        ]
        used = len(scenario.parts)
    else:
        items = nef["ray_assignment"]
        if not isinstance(items, list):
            raise rd.fail("nef_partition.ray_assignment", "expected a list")
        assignment: Dict[Ray, int] = {}
        for k, item in enumerate(items):
            at = f"nef_partition.ray_assignment[{k}]"
            item = rd.mapping(item, at, {"ray", "part"})
            if "ray" not in item or "part" not in item:
                raise rd.fail(at, "expected fields 'ray' and 'part'")
            ray = rd.vector(item["ray"], f"{at}.ray", rank)
            part = rd.integer(item["part"], f"{at}.part", 1)
            if part > r:
                raise rd.fail(f"{at}.part", f"part {part} out of range 1..{r}")
            assignment[ray] = part - 1
        scenario.ray_assignment = assignment
        used = len(set(assignment.values()))
    if used != r:
        raise InputError(f"{path}: rank inconsistency: r = {r} but {used} parts given")

    if "h_values" in data:
        scenario.h_values = rd.values(data["h_values"], "h_values", rank)
    if "hcheck_values" in data:
        scenario.hcheck_values = rd.values(data["hcheck_values"], "hcheck_values", rank)
    for key in ("sigma_prime", "sigma_check_prime", "sigma_tilde_prime"):
        if key in data:
            width = rank + 1 if key == "sigma_tilde_prime" else rank
            setattr(scenario, key, rd.cones(data[key], key, width))

    if "solver" in data:
        opts = rd.mapping(data["solver"], "solver", _SOLVER_FIELDS)
        try:
            if "s" in opts:
                scenario.solver.s = rd.integer(opts["s"], "solver.s", 1)
            if "tol" in opts:
                scenario.solver.tol = rd.real(opts["tol"], "solver.tol")
            if "max_iter" in opts:
                scenario.solver.max_iter = rd.integer(opts["max_iter"], "solver.max_iter", 1)
            if "k_min" in opts:
                scenario.counting.k_min = rd.integer(opts["k_min"], "solver.k_min", 1)
            if "k_max" in opts:
                scenario.counting.k_max = rd.integer(opts["k_max"], "solver.k_max", 1)
            if "threads" in opts:
                scenario.counting.threads = rd.integer(opts["threads"], "solver.threads", 1)
        except (TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise rd.fail("solver", str(e)) from e
    logging.debug("parsed scenario %s from %s", scenario.name, path)
    return scenario


# ==============================================================================
#                                  Exports
# ==============================================================================


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return format_fraction(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {x.__class__.__name__!r}")


def export_json(data: Mapping[str, Any], path: PathLike) -> Path:
    """
    Writes results as JSON: integers and rationals become "p/q" strings,
    floats are printed with 12 significant digits, keys are sorted.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(data), sort_keys=True, indent=2, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")
    logging.info("wrote %s", path)
    return path


def _project(
    v: Sequence[Fraction], projection: Optional[Sequence[Sequence[int]]]
) -> Tuple[float, float, float]:
    if projection is None:
        coords = [float(c) for c in v[:3]]
    else:
        coords = [float(sum(Fraction(a) * c for a, c in zip(row, v))) for row in projection]
    coords += [0.0] * (3 - len(coords))
    return coords[0], coords[1], coords[2]


def _cyclic(cell: Polytope) -> List[int]:
    """Vertex indices of a 2-dimensional cell in boundary order."""
    z = np.array([[float(c) for c in cell.chart.to_chart(v)] for v in cell.vertices])
    centre = z.mean(axis=0)
    angles = np.arctan2(z[:, 1] - centre[1], z[:, 0] - centre[0])
    return [int(k) for k in np.argsort(angles)]


def export_obj(
    complex_: "PolyhedralComplex",
    path: PathLike,
    projection: Optional[Sequence[Sequence[int]]] = None,
) -> Path:
    """
    Writes a complex as an OBJ line/face set.

    Segments become `l` records, polygons become `f` records and higher cells
    contribute their edges.

    Parameters
    ----------
    complex_ : PolyhedralComplex
        Complex to export.
    path : PathLike
        Output file.
    projection : Sequence[Sequence[int]], optional
        Integral matrix with at most 3 rows mapping the ambient lattice to
        the plotting space, by default the first min(3, rank) coordinates.

    Raises
    ------
    InputError
        Raised when the projection has the wrong shape.

    """
    if projection is not None and (
        not 1 <= len(projection) <= 3
        or any(len(row) != complex_.ambient_rank for row in projection)
    ):
        raise InputError(
            f"projection must have 1 to 3 rows of length {complex_.ambient_rank}"
        )
    points = complex_.vertex_points()
    index = {v: k + 1 for k, v in enumerate(points)}
    lines = [f"# {complex_.kind}: {len(complex_.maximal_cells)} cells"]
    for v in points:
        x, y, w = _project(v, projection)
        lines.append(f"v {x:.12g} {y:.12g} {w:.12g}")
    edges = set()
    for c in complex_.maximal_cells:
        if c.dim == 2:
            lines.append("f " + " ".join(str(index[c.vertices[k]]) for k in _cyclic(c)))
        elif c.dim == 1:
            edges.add(tuple(sorted(index[v] for v in c.vertices)))
        elif c.dim > 2:
            for e in c.faces(1):
                edges.add(tuple(sorted(index[c.vertices[k]] for k in e)))
    lines.extend(f"l {a} {b}" for a, b in sorted(edges))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logging.info("wrote %s", path)
    return path


def load_complexes(path: PathLike) -> Dict[str, Dict[str, Any]]:
    """
    Reads complexes written by `export_json`.

    Returns
    -------
    Dict[str, Dict[str, Any]]
        For each exported complex: "kind", "cells" as polytopes and, when
        present, "measures" and "total" as Fractions.

    """
    path = Path(path)
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise InputError(f"{path}: expected an object of complexes")
    out: Dict[str, Dict[str, Any]] = {}
    for key, entry in raw.items():
        if not isinstance(entry, dict) or "cells" not in entry:
            continue
        try:
            cells = [
                convex_hull([[as_fraction(x) for x in v] for v in c["vertices"]])
                for c in entry["cells"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{path}: {key}: malformed cell") from e
        item: Dict[str, Any] = {"kind": entry.get("kind"), "cells": cells}
        if "measures" in entry:
            item["measures"] = [as_fraction(m) for m in entry["measures"]]
        if "total" in entry:
            item["total"] = as_fraction(entry["total"])
        out[key] = item
    return out
