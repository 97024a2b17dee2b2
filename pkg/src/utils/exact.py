"""Exact rational and integer linear algebra on top of FLINT matrices."""

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from flint import fmpz_mat

__all__ = [
    "Rational",
    "Point",
    "as_fraction",
    "as_point",
    "is_integral",
    "dot",
    "add",
    "sub",
    "scale",
    "primitive",
    "integral_row",
    "rank",
    "row_basis",
    "pivot_columns",
    "nullspace",
    "solve",
    "determinant",
    "elementary_divisors",
    "lattice_index",
    "format_fraction",
]

Rational = Union[int, Fraction]
Point = Tuple[Fraction, ...]


def as_fraction(x: Union[int, str, Fraction]) -> Fraction:
    """
    Converts an integer, a fraction or a decimal/"p/q" string to a Fraction.

    Parameters
    ----------
    x : Union[int, str, Fraction]
        Value to convert. Floats are refused.

    Returns
    -------
    Fraction
        Exact value.

    Raises
    ------
    TypeError
        Raised when `x` is a float or of an unsupported type.
    ValueError
        Raised when a string cannot be parsed.

    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {x!r}") from e
    raise TypeError(f"expected int, Fraction or str; got {x.__class__.__name__!r}")


def as_point(coords: Iterable[Union[int, str, Fraction]]) -> Point:
    """Converts a coordinate sequence to a tuple of Fractions."""
    return tuple(as_fraction(c) for c in coords)


def is_integral(v: Iterable[Rational]) -> bool:
    """Returns whether every coordinate is an integer."""
    return all(Fraction(c).denominator == 1 for c in v)


def dot(u: Sequence[Rational], v: Sequence[Rational]) -> Fraction:
    """Exact scalar product."""
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence[Rational], v: Sequence[Rational]) -> Point:
    return tuple(Fraction(a) + b for a, b in zip(u, v))


def sub(u: Sequence[Rational], v: Sequence[Rational]) -> Point:
    return tuple(Fraction(a) - b for a, b in zip(u, v))


def scale(c: Rational, v: Sequence[Rational]) -> Point:
    return tuple(Fraction(c) * a for a in v)


def integral_row(v: Sequence[Rational]) -> Tuple[int, ...]:
    """Positive multiple of `v` with coprime integer entries (zero stays zero)."""
    fr = [Fraction(a) for a in v]
    den = math.lcm(*(a.denominator for a in fr)) if fr else 1
    ints = [int(a * den) for a in fr]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


primitive = integral_row


def _int_matrix(rows: Sequence[Sequence[Rational]]) -> fmpz_mat:
    return fmpz_mat([list(integral_row(r)) for r in rows])


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    """Rank of a rational matrix given by rows."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return int(_int_matrix(rows).rank())


def row_basis(rows: Sequence[Sequence[Rational]]) -> List[int]:
    """Indices of a greedily chosen maximal independent subset of rows."""
    chosen: List[int] = []
    for i, r in enumerate(rows):
        if not any(r):
            continue
        if rank([rows[j] for j in chosen] + [r]) > len(chosen):
            chosen.append(i)
    return chosen


def pivot_columns(rows: Sequence[Sequence[Rational]], ncols: int) -> List[int]:
    """Greedy column indices on which the row space projects isomorphically."""
    cols: List[int] = []
    target = rank(rows)
    for j in range(ncols):
        if len(cols) == target:
            break
        sub_rows = [[r[c] for c in cols + [j]] for r in rows]
        if rank(sub_rows) > len(cols):
            cols.append(j)
    return cols


def nullspace(rows: Sequence[Sequence[Rational]], ncols: int) -> List[Tuple[int, ...]]:
    """
    Integer basis of the right kernel {x : rows·x = 0}.

    Parameters
    ----------
    rows : Sequence[Sequence[Rational]]
        Matrix rows.
    ncols : int
        Number of columns (needed when `rows` is empty).

    Returns
    -------
    List[Tuple[int, ...]]
        Primitive integer kernel vectors.

    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    x, nullity = _int_matrix(rows).nullspace()
    return [
        primitive([int(x[i, j]) for i in range(ncols)]) for j in range(int(nullity))
    ]


def solve(
    rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational], unique: bool = False
) -> Optional[Point]:
    """
    Solves rows·x = rhs exactly.

    Parameters
    ----------
    rows : Sequence[Sequence[Rational]]
        Matrix rows.
    rhs : Sequence[Rational]
        Right-hand side.
    unique : bool, optional
        Whether to return None for underdetermined systems, by default False.

    Returns
    -------
    Optional[Point]
        A solution, or None when the system is inconsistent (or not uniquely
        solvable while `unique` is set).

    """
    if not rows:
        return None
    ncols = len(rows[0])
    augmented = [list(r) + [-Fraction(b)] for r, b in zip(rows, rhs)]
    kernel = nullspace(augmented, ncols + 1)
    if unique and len(kernel) != 1:
        return None
    for v in kernel:
        if v[-1] != 0:
            return tuple(Fraction(a, v[-1]) for a in v[:-1])
    return None


def determinant(rows: Sequence[Sequence[Rational]]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    if not rows:
        return Fraction(1)
    factor = Fraction(1)
    ints = []
    for r in rows:
        fr = [Fraction(a) for a in r]
        den = math.lcm(*(a.denominator for a in fr))
        factor /= den
        ints.append([int(a * den) for a in fr])
    return Fraction(int(fmpz_mat(ints).det())) * factor


def elementary_divisors(rows: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form)."""
    if not rows or not any(any(r) for r in rows):
        return []
    snf = fmpz_mat([[int(a) for a in r] for r in rows]).snf()
    n = min(snf.nrows(), snf.ncols())
    return [abs(int(snf[i, i])) for i in range(n) if snf[i, i] != 0]


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """
    Index of the lattice spanned by integer `rows` inside its saturation.

    Equals 1 exactly when the rows extend to a basis of the ambient lattice
    restricted to their span.

    """
    return math.prod(elementary_divisors(rows))


def format_fraction(x: Rational) -> str:
    """Renders a rational number as "p" or "p/q"."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
