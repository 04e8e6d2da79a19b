"""Rational polytopes: double description, dimensions, symmetry tests, asymmetry."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lp
from .errors import DegenerateError, DimensionError
from .exact import (Vector, format_rational, independent_subset, integer_row, primitive,
                    rank, rational, solve, sub, vector)


@dataclass(frozen=True)
class VRep:
    """A point list ``conv(vertices)``; see :meth:`checked` for the extremality guarantee."""

    vertices: tuple[Vector, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DegenerateError("a V-representation needs at least one vertex")
        dim = len(self.vertices[0])
        for i, v in enumerate(self.vertices):
            if len(v) != dim:
                raise DimensionError(f"vertex {i} has dimension {len(v)}, expected {dim}")

    @classmethod
    def of(cls, points: Iterable[Iterable]) -> "VRep":
        return cls(tuple(vector(p) for p in points))

    @classmethod
    def checked(cls, points: Iterable[Iterable]) -> "VRep":
        """Build a VRep, rejecting duplicates and non-extreme points."""
        rep = cls.of(points)
        seen: dict[Vector, int] = {}
        for i, v in enumerate(rep.vertices):
            if v in seen:
                raise DegenerateError(f"vertex {i} duplicates vertex {seen[v]}")
            seen[v] = i
        keep = set(extreme_point_indices(rep.vertices))
        for i in range(len(rep.vertices)):
            if i not in keep:
                raise DegenerateError(f"vertex {i} is not extreme (inside the hull of the others)")
        return rep

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def to_json(self) -> dict:
        return {"vertices": [[format_rational(x) for x in v] for v in self.vertices]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class HRep:
    """Inequalities ``a . x <= b``, each stored as a primitive integer pair."""

    inequalities: tuple[tuple[Vector, Fraction], ...]

    def contains(self, x: Sequence) -> bool:
        return all(sum(ai * xi for ai, xi in zip(a, x)) <= b for a, b in self.inequalities)

    def __len__(self) -> int:
        return len(self.inequalities)


# ---------------------------------------------------------------------------
# double description


def cone_rays(rows: Sequence[Sequence], dim: int | None = None) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : a . y >= 0 for a in rows}``.

    Incremental double description: start from a simplicial cone on the first
    ``dim`` independent rows, then add the remaining rows in input order.
    Rays are primitive integer vectors; a new ray is created from each
    adjacent (+, -) pair, adjacency decided combinatorially on the sets of
    active constraints.
    """
    int_rows = [primitive(integer_row(r)) for r in rows]
    if dim is None:
        dim = len(int_rows[0])
    if any(len(r) != dim for r in int_rows):
        raise DimensionError("cone rows of unequal length")
    basis = independent_subset(int_rows)
    if len(basis) < dim:
        raise DegenerateError("cone is not pointed (constraint rows do not span the space)")

    # simplicial start: rays are the columns of the inverse of the basis block
    rays: list[tuple[int, ...]] = []
    block = [int_rows[i] for i in basis]
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        col = solve(block, e)
        rays.append(primitive(integer_row(col)))
    # zero sets as bitmasks over row indices
    zeros = []
    for r in rays:
        z = 0
        for i in basis:
            if sum(a * b for a, b in zip(int_rows[i], r)) == 0:
                z |= 1 << i
        zeros.append(z)

    in_basis = set(basis)
    for idx, a in enumerate(int_rows):
        if idx in in_basis:
            continue
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << idx
        new_rays, new_zeros = [], []
        for p in pos:
            zp = zeros[p]
            for n in neg:
                common = zp & zeros[n]
                if common.bit_count() < dim - 2:
                    continue
                if any((zeros[k] & common) == common for k in range(len(rays)) if k != p and k != n):
                    continue
                vp, vn = vals[p], vals[n]
                r = primitive(tuple(vp * y - vn * x for x, y in zip(rays[p], rays[n])))
                new_rays.append(r)
                new_zeros.append(common | bit)
        keep = pos + zer
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zeros
    return sorted(rays)


def _full_dim_check(vertices: Sequence[Vector]) -> None:
    if affine_dim(vertices) != len(vertices[0]):
        raise DegenerateError("polytope is not full-dimensional in its ambient space")


def vrep_to_hrep(v: VRep) -> HRep:
    """Facets of ``conv(v.vertices)``; the polytope must be full-dimensional."""
    _full_dim_check(v.vertices)
    rows = [(Fraction(1),) + p for p in v.vertices]
    ineqs = []
    for ray in cone_rays(rows):
        b, a = ray[0], ray[1:]
        ineqs.append((tuple(Fraction(-x) for x in a), Fraction(b)))
    return HRep(tuple(sorted(ineqs)))


def hrep_to_vrep(h: HRep) -> VRep:
    """Vertices of the bounded region ``{x : a . x <= b}``."""
    if not h.inequalities:
        raise DegenerateError("empty H-representation")
    dim = len(h.inequalities[0][0])
    rows = [(b,) + tuple(-x for x in a) for a, b in h.inequalities]
    rows.append((Fraction(1),) + (Fraction(0),) * dim)
    verts = []
    for ray in cone_rays(rows):
        t = ray[0]
        if t == 0:
            raise DegenerateError("H-representation is unbounded")
        verts.append(tuple(Fraction(x, t) for x in ray[1:]))
    return VRep(tuple(sorted(verts)))


def double_description(rep: VRep | HRep) -> VRep | HRep:
    """Convert between vertex and facet descriptions."""
    return vrep_to_hrep(rep) if isinstance(rep, VRep) else hrep_to_vrep(rep)


# ---------------------------------------------------------------------------
# elementary geometry


def affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        raise DegenerateError("empty point set")
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def centroid(points: Sequence[Sequence]) -> Vector:
    if not points:
        raise DegenerateError("centroid of an empty set")
    n = len(points)
    return tuple(sum((rational(x) for x in col), Fraction(0)) / n for col in zip(*points))


def central_symmetry(points: Sequence[Sequence]) -> Vector | None:
    """Center ``c`` if the point set is invariant under ``x -> 2c - x``, else None.

    The only candidate is the vertex centroid: a point reflection that permutes
    the vertices fixes their mean.
    """
    c = centroid(points)
    pts = {tuple(rational(x) for x in p) for p in points}
    for p in pts:
        if tuple(2 * ci - pi for ci, pi in zip(c, p)) not in pts:
            return None
    return c


def affine_coordinates(points: Sequence[Sequence]) -> list[Vector]:
    """Project onto coordinates that are injective on the affine hull.

    Keeps the coordinate axes selected by a column basis of the difference
    matrix, so the result is full-dimensional and affinely equivalent to the input.
    """
    pts = [vector(p) for p in points]
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    if not diffs:
        return [()] * len(pts)
    cols = independent_subset(list(zip(*diffs)))
    return [tuple(p[j] for j in cols) for p in pts]


def extreme_point_indices(points: Sequence[Sequence]) -> list[int]:
    """Indices (first occurrence) of points that are not convex combinations of the others."""
    pts = [vector(p) for p in points]
    first: dict[Vector, int] = {}
    for i, p in enumerate(pts):
        first.setdefault(p, i)
    uniq = sorted(first.values())
    if len(uniq) <= 1:
        return uniq
    out = []
    dim = len(pts[0])
    for i in uniq:
        others = [pts[j] for j in uniq if j != i]
        A = [[o[k] for o in others] for k in range(dim)] + [[1] * len(others)]
        b = list(pts[i]) + [1]
        if not lp.feasible(A, b).optimal:
            out.append(i)
    return out


def extreme_points(points: Sequence[Sequence]) -> list[Vector]:
    """Deduplicated points that are extreme in their convex hull, in input order."""
    return [vector(points[i]) for i in extreme_point_indices(points)]


# ---------------------------------------------------------------------------


class Polytope:
    """A rational polytope given by its vertices, with a lazily computed H-representation."""

    def __init__(self, vrep: VRep | Iterable[Iterable]):
        self.vrep = vrep if isinstance(vrep, VRep) else VRep.of(vrep)

    @property
    def vertices(self) -> tuple[Vector, ...]:
        return self.vrep.vertices

    @cached_property
    def aff_dim(self) -> int:
        return affine_dim(self.vertices)

    @property
    def lin_dim(self) -> int:
        return self.aff_dim + 1

    @cached_property
    def hrep(self) -> HRep:
        """Facets in the affine-hull coordinates (equal to the ambient ones when full-dimensional)."""
        return vrep_to_hrep(VRep(tuple(affine_coordinates(self.vertices))))

    @cached_property
    def center(self) -> Vector | None:
        return central_symmetry(self.vertices)

    @property
    def centrally_symmetric(self) -> bool:
        return self.center is not None

    def __repr__(self) -> str:
        return f"Polytope(m={len(self.vertices)}, aff_dim={self.aff_dim})"


def minkowski_asymmetry(poly: Polytope | VRep) -> Fraction:
    """Minkowski measure of asymmetry, exact.

    Solves: minimize t over (t, d) with ``a . d <= t b + a . w`` for every facet
    ``a . x <= b`` and every vertex ``w``; ``d = (1 + t) c`` linearizes the
    covering condition ``-(w - c) in t (S - c)``. For a fixed facet only the
    vertex minimizing ``a . w`` can bind, so one row per facet gives the same
    feasible set.
    """
    if not isinstance(poly, Polytope):
        poly = Polytope(poly)
    if poly.aff_dim < 1:
        raise DegenerateError("asymmetry of a single point is undefined")
    pts = affine_coordinates(poly.vertices)
    facets = poly.hrep.inequalities
    n = len(pts[0])
    A_le, b_le = [], []
    for a, b in facets:
        A_le.append([-b] + list(a))
        b_le.append(min(sum(x * y for x, y in zip(a, w)) for w in pts))
    prog = lp.LinearProgram([1] + [0] * n, A_le=A_le, b_le=b_le, lower=[0] + [None] * n)
    out = lp.solve(prog)
    if not out.optimal:
        raise DegenerateError(f"asymmetry LP ended {out.status.value}")
    return out.value
