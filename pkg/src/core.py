"""
Contains the core of tropcy: Degeneration, load().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import logging
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from colorama import just_fix_windows_console

from .cayley import (
    CayleyData,
    DualIntersectionComplex,
    GoodSubdivision,
    RelevantCone,
    build_cayley,
    build_dual_intersection_complex,
    build_face_pair_complex,
    find_h_tilde,
    relevant_cones,
    validate_good_subdivision,
)
from .ehrhart import HilbertTable, VolumeReport, hilbert_table, verify_volume_lemma
from .errors import ConditionError, InputError, TropcyError
from .fans import (
    Fan,
    PLFunction,
    fan_polytope,
    is_convex_pl,
    is_refinement,
    is_smooth,
    is_strictly_convex_pl,
    normal_fan,
    support_function,
)
from .geometry import Polytope, boundary_lattice_points, convex_hull, is_reflexive
from .interaction import Report
from .nef import NefPartitionData, nef_partition_from_rays, validate_nef_partition
from .scenario import Scenario, parse_scenario
from .spheres import (
    ComparisonReport,
    TropicalSphere,
    build_A,
    build_B,
    compare_with_dual_complex,
)
from .transport import SolverParams, TransportResult, discretize_target, solve

__all__ = ["Degeneration", "ConditionReport", "load"]

Ray = Tuple[int, ...]

just_fix_windows_console()


class ConditionReport(Report):
    """Outcome of every input condition, with witnesses of failures."""

    def __init__(self, name: str) -> None:
        super().__init__(f"conditions of {name}", ["condition", "detail"])
        self.errors: List[TropcyError] = []

    @property
    def exit_code(self) -> int:
        """0 when all conditions hold, else the code of the first error."""
        if self.errors:
            return self.errors[0].exit_code
        return 0 if self.ok else ConditionError.exit_code


class Degeneration:
    """
    The toric degeneration of a scenario, built stage by stage on demand.

    Every stage is a cached property; a stage raises the error of the first
    condition it needs and that fails.

    Parameters
    ----------
    scenario : Scenario
        Validated input data.

    """

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario

    def __repr__(self) -> str:
        s = self.scenario
        return f"Degeneration({s.name!r}, d={s.d}, r={s.r})"

    @property
    def d(self) -> int:
        return self.scenario.d

    @property
    def r(self) -> int:
        return self.scenario.r

    @property
    def delta(self) -> Polytope:
        return self.scenario.delta

    @cached_property
    def npd(self) -> NefPartitionData:
        """The nef partition with ∇_i, ∇, Σ and φ."""
        s = self.scenario
        if s.parts is not None:
            return validate_nef_partition(self.delta, [convex_hull(p) for p in s.parts])
        return nef_partition_from_rays(self.delta, s.ray_assignment or {})

    @property
    def sigma(self) -> Fan:
        return self.npd.sigma

    @cached_property
    def sigma_check(self) -> Fan:
        """Normal fan of ∇."""
        return normal_fan(self.npd.nabla)

    def _subdivision(self, cones: Optional[List[List[Ray]]], coarse: Fan, label: str) -> Fan:
        if cones is None:
            return coarse
        try:
            fan = Fan(cones)
            fan.validate()
        except ValueError as e:
            if isinstance(e, TropcyError):
                raise
            raise InputError(f"{label}: {e}") from e
        if not is_refinement(fan, coarse):
            raise ConditionError(f"{label} does not refine the normal fan")
        return fan

    @cached_property
    def sigma_prime(self) -> Fan:
        """Σ′, by default Σ."""
        fan = self._subdivision(self.scenario.sigma_prime, self.sigma, "sigma_prime")
        expected = set(boundary_lattice_points(self.npd.delta_star))
        if set(fan.rays) != expected:
            logging.warning("rays of sigma' differ from the boundary lattice points of delta*")
        return fan

    @cached_property
    def sigma_check_prime(self) -> Fan:
        """Σ̌′, by default Σ̌."""
        return self._subdivision(
            self.scenario.sigma_check_prime, self.sigma_check, "sigma_check_prime"
        )

    @cached_property
    def phi(self) -> PLFunction:
        """φ on Σ′."""
        return self.npd.phi.on_fan(self.sigma_prime)

    @cached_property
    def phi_check(self) -> PLFunction:
        """φ̌ on Σ̌′."""
        return support_function(self.npd.nabla, self.sigma_check_prime)

    def _function(
        self, values: Optional[Mapping[Ray, object]], fan: Fan, default: PLFunction, label: str
    ) -> PLFunction:
        if values is None:
            return default
        try:
            return PLFunction(fan, values)
        except ValueError as e:
            raise InputError(f"{label}: {e}") from e

    @cached_property
    def h(self) -> PLFunction:
        """h on Σ′, by default φ."""
        return self._function(self.scenario.h_values, self.sigma_prime, self.phi, "h_values")

    @cached_property
    def hcheck(self) -> PLFunction:
        """ȟ on Σ̌′, by default φ̌."""
        return self._function(
            self.scenario.hcheck_values,
            self.sigma_check_prime,
            self.phi_check,
            "hcheck_values",
        )

    @cached_property
    def h_prime(self) -> PLFunction:
        return self.h - self.phi

    @cached_property
    def hcheck_prime(self) -> PLFunction:
        return self.hcheck - self.phi_check

    @cached_property
    def cayley(self) -> CayleyData:
        return build_cayley(self.npd, self.hcheck_prime)

    @cached_property
    def sigma_tilde_prime(self) -> Fan:
        """Σ̃′, by default Σ̃."""
        cones = self.scenario.sigma_tilde_prime
        if cones is None:
            return self.cayley.tilde_fan
        try:
            return Fan(cones)
        except ValueError as e:
            raise InputError(f"sigma_tilde_prime: {e}") from e

    @cached_property
    def good(self) -> GoodSubdivision:
        return validate_good_subdivision(self.cayley, self.sigma_tilde_prime, self.sigma_prime)

    @cached_property
    def h_tilde(self) -> PLFunction:
        return find_h_tilde(self.good, self.h)

    @cached_property
    def relevant(self) -> List[RelevantCone]:
        return relevant_cones(self.good, self.npd)

    @cached_property
    def dual_complex(self) -> DualIntersectionComplex:
        self.relevant  # pylint: disable=pointless-statement
        return build_dual_intersection_complex(self.good, self.npd)

    @cached_property
    def face_pair_complex(self) -> DualIntersectionComplex:
        return build_face_pair_complex(self.npd, self.cayley)

    @cached_property
    def sphere_A(self) -> TropicalSphere:
        return build_A(self.npd, self.h, self.hcheck)

    @cached_property
    def sphere_B(self) -> TropicalSphere:
        return build_B(self.npd, self.h, self.hcheck)

    @cached_property
    def comparison(self) -> ComparisonReport:
        """B_ȟ against the dual intersection complex."""
        return compare_with_dual_complex(self.sphere_B, self.dual_complex)

    def hilbert(
        self,
        k_min: Optional[int] = None,
        k_max: Optional[int] = None,
        threads: Optional[int] = None,
    ) -> HilbertTable:
        """h(I, kL_h) for all I, over the scenario's window unless overridden."""
        c = self.scenario.counting
        return hilbert_table(
            self.npd,
            self.h,
            c.k_min if k_min is None else k_min,
            c.k_max if k_max is None else k_max,
            c.threads if threads is None else threads,
        )

    def verify_volume_lemma(
        self, ks: Optional[Sequence[int]] = None, threads: Optional[int] = None
    ) -> VolumeReport:
        """(L_h^d) three ways, with the pointwise count identities."""
        threads = self.scenario.counting.threads if threads is None else threads
        return verify_volume_lemma(self.npd, self.h, self.sphere_A, ks, threads)

    def solve(self, params: Optional[SolverParams] = None) -> TransportResult:
        """Solves the discrete transport problem from B_ȟ to the atoms of A_h."""
        params = params or self.scenario.solver
        atoms = discretize_target(self.sphere_A, params.s)
        return solve(self.sphere_B, atoms, params, A=self.sphere_A)

    def check(self) -> ConditionReport:
        """
        Evaluates every input condition in order and reports all of them.

        Conditions that depend on a failed one are skipped.

        """
        report = ConditionReport(self.scenario.name)

        def run(label: str, test: Callable[[], Tuple[bool, str]]) -> bool:
            try:
                ok, detail = test()
            except TropcyError as e:
                report.errors.append(e)
                detail = str(e)
                if e.witness is not None:
                    detail += f" (witness: {e.witness})"
                report.add(label, detail, ok=False)
                return False
            report.add(label, detail, ok=ok)
            return ok

        report.add("delta reflexive", f"{len(self.delta.vertices)} vertices", ok=True)
        if not run("nef partition", lambda: (True, f"r = {self.npd.r}")):
            return report
        run(
            "nabla reflexive",
            lambda: (is_reflexive(self.npd.nabla), f"{len(self.npd.nabla.vertices)} vertices"),
        )
        fans_ok = run(
            "sigma' spans delta*",
            lambda: (
                fan_polytope(self.sigma_prime) == self.npd.delta_star,
                repr(self.sigma_prime),
            ),
        )
        fans_ok &= run(
            "sigma_check' spans nabla*",
            lambda: (
                fan_polytope(self.sigma_check_prime) == self.npd.nabla_star,
                repr(self.sigma_check_prime),
            ),
        )
        if not fans_ok:
            return report
        lifts_ok = run("h integral and convex", lambda: self._convexity(self.h))
        lifts_ok &= run("h' = h - phi convex", lambda: self._convexity(self.h_prime))
        lifts_ok &= run(
            "hcheck' = hcheck - phi_check convex", lambda: self._convexity(self.hcheck_prime)
        )
        if not lifts_ok:
            return report
        run("h strictly convex", lambda: (is_strictly_convex_pl(self.h), ""))
        if not run("cayley fan", lambda: (True, f"cone types {self.cayley.type_counts()}")):
            return report
        if not run("good subdivision", lambda: (True, repr(self.good.fan))):
            return report
        run(
            "unimodular subdivision",
            lambda: (
                self.good.unimodular,
                "" if self.good.witness is None else f"witness: {self.good.witness}",
            ),
        )
        run("strictly convex lift", lambda: (True, repr(self.h_tilde)))
        report.add("delta smooth", is_smooth(self.delta))
        report.add(
            "hypersurface hypotheses",
            self.r == 1 and is_smooth(self.delta) and self.h == self.phi,
        )
        return report

    @staticmethod
    def _convexity(f: PLFunction) -> Tuple[bool, str]:
        if not f.is_integral:
            return False, "values are not integral"
        if not is_convex_pl(f):
            wall, slack = min(f.wall_slacks(), key=lambda ws: ws[1])
            return False, f"wall slack {slack} at the wall spanned by {list(wall.rays)}"
        return True, ""

    def summary(self) -> Dict[str, object]:
        """Headline numbers of the built stages."""
        return {
            "name": self.scenario.name,
            "d": self.d,
            "r": self.r,
            "mu": self.sphere_A.total,
            "nu": self.sphere_B.total,
        }


def load(path_or_name: Union[Path, str]) -> Degeneration:
    """
    Reads a scenario and prepares its degeneration.

    Parameters
    ----------
    path_or_name : Union[Path, str]
        Path to a JSON scenario, or a bundled name: "sq", "p2", "p3_22",
        "quartic".

    Returns
    -------
    Degeneration
        The degeneration; stages are computed on first access.

    Raises
    ------
    InputError
        Raised when the file is missing, malformed or inconsistent.

    See Also
    --------
    parse_scenario : Reads a scenario without building anything.

    """
    return Degeneration(parse_scenario(path_or_name))
