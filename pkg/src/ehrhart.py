"""
Contains lattice counting in dilates: TwistSpec, twisted_polytope(), h0_count(),
h_I(), count_complex_dilate(), monomial_section_count(), fit_and_extract_degree(),
HilbertTable, hilbert_table(), verify_volume_lemma().

NOTE: this module is private. All functions and objects are available in the main
`tropcy` namespace - use that instead.

"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import pandas as pd
import sympy

from .errors import ConditionError
from .fans import PLFunction, newton_polytope
from .geometry import HalfSpace, Polytope, lattice_points, polytope_from_halfspaces
from .interaction import Report, display_params
from .nef import NefPartitionData
from .spheres import TropicalSphere
from .utils.exact import dot

__all__ = [
    "TwistSpec",
    "twist_spec",
    "twisted_polytope",
    "h0_count",
    "h_I",
    "count_complex_dilate",
    "monomial_section_count",
    "fit_polynomial",
    "fit_and_extract_degree",
    "HilbertTable",
    "hilbert_table",
    "default_k_window",
    "VolumeReport",
    "verify_volume_lemma",
]

Ray = Tuple[int, ...]


@dataclass(frozen=True)
class TwistSpec:
    """
    The twist -Σ_{j ∈ J} Σ_{n ∈ ∇_j ∩ N ∖ 0} D_n, as 0/1 coefficients on rays.

    Parameters
    ----------
    J : FrozenSet[int]
        Twisted parts, numbered from 0.
    c : Dict[Ray, int]
        Coefficient of every ray of Σ′.

    """

    J: FrozenSet[int]
    c: Dict[Ray, int] = field(hash=False)

    def __repr__(self) -> str:
        return f"TwistSpec(J={sorted(j + 1 for j in self.J)})"


def twist_spec(npd: NefPartitionData, J: Iterable[int], rays: Iterable[Ray]) -> TwistSpec:
    """The twist of the parts `J` (from 0) on the given rays."""
    J = frozenset(J)
    if any(not 0 <= j < npd.r for j in J):
        raise ValueError(f"parts out of range: {sorted(J)}")
    return TwistSpec(J, {r: int(npd.part_of(r) in J) for r in rays})


def twisted_polytope(h: PLFunction, k: int, twist: Optional[TwistSpec] = None) -> Polytope:
    """
    The polytope {m : <m, n> >= -k·h(n) + c(n) for every ray n of the fan of h}.

    Returns the empty polytope when the inequalities are infeasible.

    """
    hs = [
        HalfSpace(r, k * v - (twist.c.get(r, 0) if twist else 0))
        for r, v in h.ray_values.items()
    ]
    return polytope_from_halfspaces(hs, h.fan.ambient_rank)


def h0_count(h: PLFunction, k: int, twist: Optional[TwistSpec] = None) -> int:
    """Number of lattice points of the twisted polytope."""
    return len(lattice_points(twisted_polytope(h, k, twist)))


def h_I(
    h: PLFunction,
    k: int,
    I: Iterable[int],
    npd: NefPartitionData,
    extra: Iterable[int] = (),
) -> int:
    """
    Alternating sum Σ_{J ⊆ I} (-1)^|J| · h0_count(h, k, twist(J ∪ extra)).

    Parameters
    ----------
    h : PLFunction
        The polarization on Σ′.
    k : int
        Dilation factor.
    I : Iterable[int]
        Parts, numbered from 0.
    npd : NefPartitionData
        The nef partition defining the twists.
    extra : Iterable[int], optional
        Parts twisted in every term, by default none; with extra = {i0}
        this evaluates h(I, kL - twist(i0)).

    """
    I = sorted(set(I))
    extra = frozenset(extra)
    if extra & set(I):
        raise ValueError("extra twists must be disjoint from I")
    total = 0
    for size in range(len(I) + 1):
        for J in combinations(I, size):
            spec = twist_spec(npd, extra.union(J), h.fan.rays)
            total += (-1) ** size * h0_count(h, k, spec)
    return total


def count_complex_dilate(S: TropicalSphere, k: int) -> int:
    """
    #(k·S ∩ M): lattice points of the dilated cells, each counted once.

    For k = 0 the dilate is {0}, counted once when S is nonempty.

    """
    if not S.cells:
        return 0
    if k == 0:
        return 1
    points = set()
    for cell in S.maximal_cells:
        points.update(lattice_points(cell.scale(k)))
    return len(points)


def monomial_section_count(npd: NefPartitionData, h: PLFunction, k: int) -> int:
    """
    Lattice points m of k·Δ_h such that every part j has some n in
    (∇_j ∩ N) ∖ 0 with k·h(n) + <m, n> = 0.

    """
    polytope = newton_polytope(h).scale(k)
    parts = [[(n, k * h(n)) for n in pts] for pts in npd.nabla_lattice_points]
    return sum(
        all(any(v + dot(m, n) == 0 for n, v in part) for part in parts)
        for m in lattice_points(polytope)
    )


def fit_polynomial(samples: Mapping[int, int], degree: int) -> List[Fraction]:
    """
    Exact polynomial of degree <= `degree` through the samples.

    The polynomial is interpolated on the first degree + 1 samples and checked
    on the remaining ones.

    Returns
    -------
    List[Fraction]
        Coefficients from the constant term up.

    Raises
    ------
    ConditionError
        Raised when there are fewer than degree + 2 samples, or when the
        extra samples do not lie on the polynomial.

    """
    ks = sorted(samples)
    if len(ks) < degree + 2:
        raise ConditionError(f"need at least {degree + 2} samples; got {len(ks)}")
    x = sympy.Symbol("k")
    expr = sympy.interpolate([(k, samples[k]) for k in ks[: degree + 1]], x)
    for k in ks[degree + 1 :]:
        if expr.subs(x, k) != samples[k]:
            raise ConditionError(
                "not yet in polynomial range, increase k_min", witness=k
            )
    coeffs = sympy.Poly(expr, x).all_coeffs()[::-1]
    out = [Fraction(int(c.p), int(c.q)) for c in coeffs]
    return out + [Fraction(0)] * (degree + 1 - len(out))


def fit_and_extract_degree(samples: Mapping[int, int], d: int) -> Tuple[Fraction, int]:
    """
    Leading coefficient of the degree-d fit and d! times it.

    Raises
    ------
    ConditionError
        Raised when the fit fails, or when d! times the leading coefficient
        is not a positive integer.

    """
    coeffs = fit_polynomial(samples, d)
    lead = coeffs[d]
    degree = lead * math.factorial(d)
    if degree.denominator != 1 or degree <= 0:
        raise ConditionError(
            f"data inconsistency: d!·leading coefficient is {degree}", witness=degree
        )
    return lead, int(degree)


def default_k_window(d: int, r: int) -> Tuple[int, int]:
    return 1, max(d + 4, d + r + 2)


@dataclass
class HilbertTable:
    """Values h(I, kL) for all I ⊆ parts and a window of k, with fits."""

    r: int
    d: int
    counts: Dict[Tuple[FrozenSet[int], int], int]
    fitted_polynomials: Dict[FrozenSet[int], Optional[List[Fraction]]]
    degree_estimate: Optional[int] = None

    @property
    def subsets(self) -> List[FrozenSet[int]]:
        return sorted({I for I, _ in self.counts}, key=lambda I: (len(I), sorted(I)))

    @property
    def ks(self) -> List[int]:
        return sorted({k for _, k in self.counts})

    @staticmethod
    def label(I: FrozenSet[int]) -> str:
        return "{" + ",".join(str(i + 1) for i in sorted(I)) + "}"

    def series(self, I: Iterable[int]) -> Dict[int, int]:
        I = frozenset(I)
        return {k: self.counts[I, k] for k in self.ks}

    def to_frame(self) -> pd.DataFrame:
        """Counts with k as index and one column per subset I."""
        return pd.DataFrame(
            {self.label(I): [self.counts[I, k] for k in self.ks] for I in self.subsets},
            index=pd.Index(self.ks, name="k"),
        )

    def __repr__(self) -> str:
        text = self.to_frame().to_string()
        if self.degree_estimate is not None:
            text += f"\n(L_h^d) = {self.degree_estimate}"
        return text

    def _repr_mimebundle_(self, *_, **__) -> Optional[Dict[str, Any]]:
        if display_params.use_mimebundle:
            return {"text/html": self.to_frame().to_html()}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.ks,
            "counts": {self.label(I): list(self.series(I).values()) for I in self.subsets},
            "polynomials": {
                self.label(I): [str(c) for c in v] if v else None
                for I, v in self.fitted_polynomials.items()
            },
            "degree": self.degree_estimate,
        }


def hilbert_table(
    npd: NefPartitionData,
    h: PLFunction,
    k_min: int = 1,
    k_max: Optional[int] = None,
    threads: int = 1,
) -> HilbertTable:
    """
    Tabulates h(I, kL) for every I ⊆ {0..r-1} and k_min <= k <= k_max.

    Each series is fitted by a polynomial of degree d + r - |I| when the
    window is long enough; series that are not yet polynomial are left
    unfitted. The degree estimate comes from the full set I.

    """
    d = npd.rank - npd.r
    if k_max is None:
        k_max = default_k_window(d, npd.r)[1]
    if k_min < 1 or k_max < k_min:
        raise ValueError(f"invalid k window {k_min}..{k_max}")
    subsets = [
        frozenset(J) for size in range(npd.r + 1) for J in combinations(range(npd.r), size)
    ]
    jobs = [(I, k) for I in subsets for k in range(k_min, k_max + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        values = list(pool.map(lambda job: h_I(h, job[1], job[0], npd), jobs))
    counts = dict(zip(jobs, values))

    table = HilbertTable(npd.r, d, counts, {})
    for I in subsets:
        degree = d + npd.r - len(I)
        try:
            table.fitted_polynomials[I] = fit_polynomial(table.series(I), degree)
        except ConditionError as e:
            logging.info("h(%s, kL) not fitted: %s", table.label(I), e)
            table.fitted_polynomials[I] = None
    full = frozenset(range(npd.r))
    coeffs = table.fitted_polynomials.get(full)
    if coeffs is not None and (coeffs[d] * math.factorial(d)).denominator == 1:
        table.degree_estimate = int(coeffs[d] * math.factorial(d))
    return table


class VolumeReport(Report):
    """Per-k counts and the three values of (L_h^d)."""

    def __init__(self) -> None:
        super().__init__(
            "volume lemma",
            ["k", "h({1..r}, kL)", "#(kA ∩ M)", "monomial sections"],
        )
        self.volume: Optional[int] = None
        self.from_complex: Optional[int] = None
        self.from_sections: Optional[int] = None

    @property
    def agree(self) -> bool:
        return (
            self.ok
            and self.volume is not None
            and self.volume == self.from_complex == self.from_sections
        )

    @property
    def summary(self) -> str:
        if self.agree:
            return f"d!·μ(A_h) = {self.volume} = (L_h^d)"
        return (
            f"mismatch: d!·μ(A_h) = {self.volume}, from #(kA ∩ M): "
            f"{self.from_complex}, from h(I, kL): {self.from_sections}"
        )

    def __repr__(self) -> str:
        return super().__repr__() + "\n" + self.summary

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        out.update(
            volume=self.volume,
            from_complex=self.from_complex,
            from_sections=self.from_sections,
            summary=self.summary,
        )
        return out


def verify_volume_lemma(
    npd: NefPartitionData,
    h: PLFunction,
    A: TropicalSphere,
    ks: Optional[Sequence[int]] = None,
    threads: int = 1,
) -> VolumeReport:
    """
    Computes (L_h^d) three ways and compares the counts pointwise.

    The three values are d!·μ(A_h), d! times the leading coefficient of
    #(k·A_h ∩ M) and d! times the leading coefficient of h({1..r}, kL_h).
    For every sampled k, h({1..r}, kL_h), #(k·A_h ∩ M) and the monomial
    section count must coincide.

    """
    d = npd.rank - npd.r
    if ks is None:
        lo, hi = default_k_window(d, npd.r)
        ks = range(lo, hi + 1)
    ks = sorted(ks)
    full = range(npd.r)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        sections = list(pool.map(lambda k: h_I(h, k, full, npd), ks))
        dilates = list(pool.map(lambda k: count_complex_dilate(A, k), ks))
        monomials = list(pool.map(lambda k: monomial_section_count(npd, h, k), ks))

    report = VolumeReport()
    for k, a, b, c in zip(ks, sections, dilates, monomials):
        report.add(k, a, b, c, ok=a == b == c)
    volume = A.total * math.factorial(d)
    report.volume = int(volume) if volume.denominator == 1 else None
    for attr, series in (("from_complex", dilates), ("from_sections", sections)):
        try:
            setattr(report, attr, fit_and_extract_degree(dict(zip(ks, series)), d)[1])
        except ConditionError as e:
            report.note(f"{attr}: {e}")
    if not report.agree:
        logging.warning("volume lemma check failed: %s", report.summary)
    return report
