"""Exact rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction` (always reduced, positive denominator).
Vectors are tuples of Fraction, matrices tuples of row tuples. Integer kernels
(Gram matrices, rank) run on integerized copies so that no division happens
on the hot path.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionError, ParseError

Rational = Fraction
Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]
Number = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rational(x: Number) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are refused: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParseError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RATIONAL_RE.match(x)
        if not m:
            raise ParseError(f"malformed rational {x!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ParseError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise ParseError(f"not a rational: {x!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vector(xs: Iterable[Number]) -> Vector:
    return tuple(rational(x) for x in xs)


def matrix(rows: Iterable[Iterable[Number]]) -> Matrix:
    return tuple(vector(r) for r in rows)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionError(f"dot product of vectors of length {len(a)} and {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def scale(k, a: Sequence) -> tuple:
    return tuple(k * x for x in a)


def transpose(mat: Sequence[Sequence]) -> tuple:
    return tuple(zip(*mat)) if mat else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def _check_common_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return 0
    dim = len(points[0])
    for i, p in enumerate(points):
        if len(p) != dim:
            raise DimensionError(f"point {i} has dimension {len(p)}, expected {dim}")
    return dim


def gram(points: Sequence[Sequence]) -> tuple:
    """Matrix of pairwise inner products ``G[i][j] = points[i] . points[j]``."""
    _check_common_dim(points)
    n = len(points)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = sum(x * y for x, y in zip(points[i], points[j]))
    return tuple(tuple(r) for r in g)


def lcm_of_denominators(values: Iterable) -> int:
    out = 1
    for v in values:
        if isinstance(v, Fraction):
            out = math.lcm(out, v.denominator)
    return out


def integerize(points: Sequence[Sequence]) -> tuple[list[tuple[int, ...]], Fraction]:
    """Scale all points by the lcm L of every denominator.

    Returns ``(integer_points, 1/L)`` so that ``points == scale * integer_points``.
    A uniform scaling multiplies every Gram entry by L**2, so the set of
    Gram-preserving permutations is unchanged.
    """
    _check_common_dim(points)
    L = lcm_of_denominators(x for p in points for x in p)
    ints = [tuple(int(x * L) for x in p) for p in points]
    return ints, Fraction(1, L)


def integer_row(row: Sequence) -> list[int]:
    """Positive multiple of ``row`` with integer entries (denominators cleared)."""
    L = lcm_of_denominators(row)
    return [int(x * L) for x in row]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = math.gcd(*v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Pivot = first nonzero entry in column order; every division is exact.
    """
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        top = a[rank]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[col]
            for j in range(col + 1, ncols):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(mat: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix.

    Each row is first scaled by the lcm of its denominators (rank-preserving),
    then reduced fraction-free.
    """
    _check_common_dim(mat)
    return bareiss_rank([integer_row(r) for r in mat])


def solve(mat: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of a square nonsingular system, or None if singular."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        top = [x / p for x in a[col]]
        a[col] = top
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], top)]
    return tuple(row[n] for row in a)


def independent_subset(points: Sequence[Sequence]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset (first come, first kept)."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    keep = []
    for idx, p in enumerate(points):
        r = [Fraction(x) for x in p]
        for col, b in basis:
            if r[col] != 0:
                f = r[col] / b[col]
                r = [x - f * y for x, y in zip(r, b)]
        col = next((j for j, x in enumerate(r) if x != 0), None)
        if col is not None:
            basis.append((col, r))
            keep.append(idx)
    return keep
