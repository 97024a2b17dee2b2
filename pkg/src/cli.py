"""
Contains the command line interface: main().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .__version__ import __version__
from .core import Degeneration, load
from .errors import ConvergenceError, InputError, TropcyError
from .interaction import Report, display_params
from .scenario import export_json, export_obj

__all__ = ["main"]

COMMANDS = ("check", "cayley", "spheres", "hilbert", "volume", "solve-ma", "export")


def parse_projection(text: str) -> List[List[int]]:
    """Parses "a,b,c;d,e,f" into integer rows."""
    try:
        return [[int(x) for x in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid projection {text!r}") from e


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario file, or one of sq, p2, p3_22, quartic")
    common.add_argument("--s", type=int, default=None, help="subdivision of the target atoms")
    common.add_argument("--tol", type=float, default=None, help="solver tolerance")
    common.add_argument("--max-iter", type=int, default=None, help="solver iteration cap")
    common.add_argument("--k-min", type=int, default=None)
    common.add_argument("--k-max", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument(
        "--projection",
        type=parse_projection,
        default=None,
        help='integral projection for OBJ export, rows separated by ";"',
    )
    common.add_argument("--no-color", action="store_true")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="tropcy",
        description="Toric degenerations of Calabi-Yau complete intersections: "
        "tropical spheres, intersection numbers and discrete transport.",
    )
    parser.add_argument("--version", action="version", version=f"tropcy {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "report every input condition",
        "cayley": "Cayley fan, good subdivision and dual intersection complex",
        "spheres": "tropical spheres A and B with measures",
        "hilbert": "table of h(I, kL)",
        "volume": "the self-intersection number three ways",
        "solve-ma": "solve the discrete transport problem",
        "export": "write complexes as JSON and OBJ",
    }
    for cmd in COMMANDS:
        sub.add_parser(cmd, parents=[common], help=helps[cmd])
    return parser.parse_args(argv)


def _print(*items: object) -> None:
    for item in items:
        print(item if isinstance(item, str) else repr(item))


def _out_dir(args: argparse.Namespace) -> Path:
    return args.out if args.out is not None else Path(".")


def run_check(deg: Degeneration, _: argparse.Namespace) -> int:
    report = deg.check()
    _print(report)
    return report.exit_code


def run_cayley(deg: Degeneration, args: argparse.Namespace) -> int:
    cd = deg.cayley
    report = Report(f"Cayley data of {deg.scenario.name}", ["item", "value"])
    report.add("vertices of the Cayley polytope", len(cd.tilde_delta.vertices))
    report.add("heights", tuple(cd.heights))
    for t, count in sorted(cd.type_counts().items()):
        report.add(f"cones of type {t}", count)
    gs = deg.good
    report.add("unimodular", gs.unimodular, ok=gs.unimodular)
    report.add("relevant cones", len(deg.relevant))
    report.add("strictly convex lift", repr(deg.h_tilde), ok=True)
    dic = deg.dual_complex
    report.add("dual intersection complex", repr(dic))
    report.add("f-vector", tuple(dic.f_vector()))
    _print(report)
    if args.out is not None:
        export_json(
            {"dual_complex": dic.to_dict(), "h_tilde": deg.h_tilde.ray_values},
            args.out / "cayley.json",
        )
    return 0 if report.ok else 2


def run_spheres(deg: Degeneration, args: argparse.Namespace) -> int:
    for S in (deg.sphere_A, deg.sphere_B):
        report = Report(f"tropical sphere {S.which}", ["facet", "measure"])
        for f, m in S.facet_measure.items():
            report.add(repr(f), m)
        report.add("total", S.total)
        report.note(
            f"f-vector {S.f_vector()}, euler characteristic {S.euler_characteristic()}, "
            f"cycles {S.cycle_count()}"
        )
        _print(report)
    comparison = deg.comparison
    _print(comparison)
    if args.out is not None:
        export_json(
            {"A": deg.sphere_A.to_dict(), "B": deg.sphere_B.to_dict()},
            args.out / "spheres.json",
        )
    return 0 if comparison.equal else 2


def run_hilbert(deg: Degeneration, args: argparse.Namespace) -> int:
    table = deg.hilbert(args.k_min, args.k_max, args.threads)
    _print(table)
    if args.out is not None:
        export_json(table.to_dict(), args.out / "hilbert.json")
    return 0


def run_volume(deg: Degeneration, args: argparse.Namespace) -> int:
    ks = None
    if args.k_min is not None or args.k_max is not None:
        lo = args.k_min or 1
        ks = list(range(lo, (args.k_max or lo + 4) + 1))
    report = deg.verify_volume_lemma(ks, args.threads)
    _print(report)
    if args.out is not None:
        export_json(report.to_dict(), args.out / "volume.json")
    return 0 if report.agree else 2


def run_solve(deg: Degeneration, args: argparse.Namespace) -> int:
    overrides: Dict[str, object] = {}
    if args.s is not None:
        overrides["s"] = args.s
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    try:
        params = replace(deg.scenario.solver, **overrides)
    except (TypeError, ValueError) as e:
        raise InputError(str(e)) from e
    result = deg.solve(params)
    w = result.weights
    _print(result.report)
    print(f"iterations {w.iterations}, residual {w.residual:.12g}, converged {w.converged}")
    path = export_json(
        {
            "scenario": deg.scenario.name,
            "s": params.s,
            "atoms": [list(p) for p in result.potential.atoms.points],
            "masses": list(result.potential.atoms.masses),
            "psi": list(w.psi),
            "converged": w.converged,
            "iterations": w.iterations,
            "residual": w.residual,
            "history": w.history,
            "ma_residual": result.report.to_dict(),
        },
        _out_dir(args) / "weights.json",
    )
    print(f"weights written to {path}")
    if not w.converged:
        raise ConvergenceError(
            f"solver stopped at residual {w.residual:.3g} above tolerance {params.tol:g}"
        )
    return 0


def run_export(deg: Degeneration, args: argparse.Namespace) -> int:
    out = _out_dir(args)
    complexes = {
        "A": deg.sphere_A,
        "B": deg.sphere_B,
        "dual_complex": deg.dual_complex,
    }
    export_json({k: c.to_dict() for k, c in complexes.items()}, out / "complexes.json")
    for key, c in complexes.items():
        export_obj(c, out / f"{key}.obj", args.projection)
    print(f"exported {', '.join(complexes)} to {out}")
    return 0


RUNNERS: Dict[str, Callable[[Degeneration, argparse.Namespace], int]] = {
    "check": run_check,
    "cayley": run_cayley,
    "spheres": run_spheres,
    "hilbert": run_hilbert,
    "volume": run_volume,
    "solve-ma": run_solve,
    "export": run_export,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one command on one scenario.

    Returns
    -------
    int
        0 on success, 1 on invalid input, 2 when a condition fails, 3 when
        the solver does not converge.

    """
    args = _parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    if args.no_color:
        display_params.color_scheme = "no-color"
    try:
        deg = load(args.scenario)
        c = deg.scenario.counting
        if args.k_min is not None:
            c.k_min = args.k_min
        if args.k_max is not None:
            c.k_max = args.k_max
        if args.threads is not None:
            c.threads = args.threads
        return RUNNERS[args.command](deg, args)
    except TropcyError as e:
        logging.error("%s", e)
        if e.witness is not None:
            print(f"witness: {e.witness}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        logging.error("%s", e)
        return InputError.exit_code
