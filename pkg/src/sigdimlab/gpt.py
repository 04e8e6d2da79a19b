"""GPT layer: homogenized states, effects, extremal measurements, correlations.

States are embedded as ``(1, x)`` so that the unit effect is ``u = (1, 0, ..., 0)``
and every outcome probability is a dot product ``p = state . effect``. The
effect set is the full dual interval ``{e : 0 <= e . state <= 1}``
(no-restriction hypothesis).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DegenerateError, SymmetryError
from .exact import Vector, integer_row, primitive, rank
from .polytope import VRep, affine_coordinates, centroid, central_symmetry, cone_rays
from .symmetry import Permutation, SymmetryGroup, find_symmetries, orbits

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateSpace:
    vertices: tuple[Vector, ...]  # affine coordinates (full-dimensional)
    states: tuple[Vector, ...]    # homogenized (1, x)

    @property
    def m(self) -> int:
        return len(self.states)

    @property
    def lin_dim(self) -> int:
        return len(self.states[0])

    @property
    def aff_dim(self) -> int:
        return self.lin_dim - 1

    @property
    def unit(self) -> Vector:
        return (Fraction(1),) + (Fraction(0),) * self.aff_dim

    @cached_property
    def center(self) -> Vector | None:
        return central_symmetry(self.vertices)

    @property
    def centrally_symmetric(self) -> bool:
        return self.center is not None

    @cached_property
    def symmetry_vectors(self) -> list[Vector]:
        """States recentred on the vertex centroid: ``(1, x - c)``.

        Every isometry of the vertex set fixes the centroid, so Gram symmetries of
        these vectors are exactly the isometries of the polytope, and each one
        extends to a linear map of the homogenized space that fixes ``u``.
        """
        c = centroid(self.vertices)
        return [(Fraction(1),) + tuple(x - ci for x, ci in zip(v, c)) for v in self.vertices]


def homogenize(vrep: VRep | Iterable[Iterable]) -> StateSpace:
    """Embed ``x -> (1, x)`` after projecting onto the affine hull."""
    if not isinstance(vrep, VRep):
        vrep = VRep.of(vrep)
    pts = affine_coordinates(vrep.vertices)
    if len(set(pts)) != len(pts):
        raise DegenerateError("duplicate vertices")
    states = tuple((Fraction(1),) + p for p in pts)
    return StateSpace(tuple(pts), states)


@dataclass(frozen=True)
class Effect:
    vector: Vector
    values: tuple[Fraction, ...]  # (e . state_i)_i
    ray: bool = False             # lies on an extreme ray of the effect cone (a facet of the states)

    @property
    def trivial(self) -> bool:
        return all(v == 0 for v in self.values) or all(v == 1 for v in self.values)


def _evaluate(space: StateSpace, e: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((a * b for a, b in zip(e, s)), Fraction(0)) for s in space.states)


def extremal_effects(space: StateSpace) -> list[Effect]:
    """Vertices of ``{e : 0 <= e . state <= 1}``, sorted; 0 and u are included."""
    ell = space.lin_dim
    rows = [(Fraction(0),) + s for s in space.states]
    rows += [(Fraction(1),) + tuple(-x for x in s) for s in space.states]
    effects = []
    for ray in cone_rays(rows, ell + 1):
        t = ray[0]
        if t <= 0:
            raise DegenerateError("effect set is unbounded: states do not span")
        vec = tuple(Fraction(x, t) for x in ray[1:])
        values = _evaluate(space, vec)
        kernel = [s for s, v in zip(space.states, values) if v == 0]
        effects.append(Effect(vec, values, ray=bool(kernel) and rank(kernel) == ell - 1))
    effects.sort(key=lambda e: e.vector)
    return effects


@dataclass(frozen=True)
class Measurement:
    indices: tuple[int, ...]            # positions in the extremal-effect list, increasing
    coefficients: tuple[Fraction, ...]  # element j = coefficients[j] * effects[indices[j]]
    elements: tuple[Vector, ...]

    @property
    def n(self) -> int:
        return len(self.indices)


def extremal_measurements(space: StateSpace, effects: Sequence[Effect]) -> list[Measurement]:
    """All extremal measurements.

    A measurement is a set of pairwise distinct, linearly independent
    nontrivial extremal effects ``f_j``, each on an extreme ray of the effect
    cone, with ``u = sum_j a_j f_j`` for strictly positive ``a_j`` (unique by
    independence). Effect-polytope vertices off the extreme rays (present only
    for non centrally symmetric states) split into finer effects and are
    never elements of an extremal measurement. The search visits
    index-increasing independent sets depth first; a branch stops as soon as
    ``u`` enters the span, since any further independent effect would get
    coefficient zero.
    """
    ell = space.lin_dim
    u = (1,) + (0,) * (ell - 1)
    cand = [k for k, e in enumerate(effects) if e.ray and not e.trivial]
    prims: dict[int, tuple[int, ...]] = {}
    scales: dict[int, Fraction] = {}
    for k in cand:
        p = primitive(integer_row(effects[k].vector))
        prims[k] = p
        nz = next(x for x in effects[k].vector if x != 0)
        scales[k] = Fraction(next(x for x in p if x != 0)) / nz  # p = scale * vector

    found: list[Measurement] = []

    # reduced form of a vector relative to the chosen set F:
    #   scale * x = sum_t coef[t] * F_t + resid,  scale > 0, resid zero on pivot columns
    def extend(rep, g_rep, p):
        s, c, r = rep
        sg, cg, rg = g_rep
        a, b = rg[p], r[p]
        if b == 0:
            return s, c + [0], r
        s2 = a * s
        c2 = [a * x - b * y for x, y in zip(c, cg)] + [b * sg]
        r2 = [a * x - b * y for x, y in zip(r, rg)]
        if a < 0:
            s2, c2, r2 = -s2, [-x for x in c2], [-x for x in r2]
        g = math.gcd(s2, *c2, *r2)
        if g > 1:
            s2, c2, r2 = s2 // g, [x // g for x in c2], [x // g for x in r2]
        return s2, c2, r2

    def record(F, g, u_rep, g_rep, p):
        su, cu, ru = u_rep
        sg, cg, rg = g_rep
        beta = Fraction(ru[p], rg[p])
        if beta <= 0:
            return
        alphas = [(Fraction(x) - beta * y) / su for x, y in zip(cu, cg)]
        if any(a <= 0 for a in alphas):
            return
        alphas.append(beta * sg / su)
        idx = F + [g]
        coefs = tuple(a * scales[k] for a, k in zip(alphas, idx))
        elems = tuple(tuple(c * x for x in effects[k].vector) for c, k in zip(coefs, idx))
        found.append(Measurement(tuple(idx), coefs, elems))

    def node(F, u_rep, pool):
        ru = u_rep[2]
        for pos, (g, g_rep) in enumerate(pool):
            rg = g_rep[2]
            p = next((j for j, x in enumerate(rg) if x != 0), None)
            if p is None:
                continue
            a, b = rg[p], ru[p]
            if all(b * x == a * y for x, y in zip(rg, ru)):
                record(F, g, u_rep, g_rep, p)
                continue
            child = []
            for h, h_rep in pool[pos + 1:]:
                h2 = extend(h_rep, g_rep, p)
                if any(h2[2]):
                    child.append((h, h2))
            node(F + [g], extend(u_rep, g_rep, p), child)

    node([], (1, [], list(u)), [(k, (1, [], list(prims[k]))) for k in cand])

    unit = space.unit
    for meas in found:
        total = tuple(sum(col, Fraction(0)) for col in zip(*meas.elements))
        if total != unit:
            raise AssertionError(f"measurement {meas.indices} does not sum to the unit effect")
    found.sort(key=lambda ms: (ms.n, ms.indices))
    log.debug("%d extremal measurements from %d nontrivial effects", len(found), len(cand))
    return found


def state_symmetries(space: StateSpace) -> SymmetryGroup:
    return find_symmetries(space.symmetry_vectors)


def induced_effect_action(effects: Sequence[Effect], sigma: Permutation) -> Permutation:
    """Permutation ``tau`` of effects with ``values[tau(a)][sigma(i)] == values[a][i]``."""
    lookup = {e.values: k for k, e in enumerate(effects)}
    tau = []
    for e in effects:
        moved = [None] * len(sigma)
        for i, v in enumerate(e.values):
            moved[sigma[i]] = v
        k = lookup.get(tuple(moved))
        if k is None:
            raise SymmetryError("permutation does not map the effect set onto itself")
        tau.append(k)
    return tuple(tau)


@dataclass(frozen=True)
class MeasurementClass:
    representative: Measurement
    members: tuple[Measurement, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def measurement_classes(measurements: Sequence[Measurement], group: Iterable[Permutation],
                        effects: Sequence[Effect]) -> list[MeasurementClass]:
    """Orbits of measurements under the effect action induced by the state symmetries."""
    by_idx = {ms.indices: ms for ms in measurements}
    taus = [induced_effect_action(effects, s) for s in group]

    def act(tau, idx):
        return tuple(sorted(tau[k] for k in idx))

    key = lambda idx: (len(idx), idx)  # noqa: E731
    out = []
    for rep, members in orbits(taus, list(by_idx), act, key=key):
        out.append(MeasurementClass(by_idx[rep], tuple(by_idx[x] for x in members)))
    return out


@dataclass(frozen=True)
class CorrelationMatrix:
    p: tuple[tuple[Fraction, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.p), len(self.p[0]) if self.p else 0

    @property
    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, row in enumerate(self.p) for j, v in enumerate(row) if v > 0)

    def row_support(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.p[i]) if v > 0)


def correlation_matrix(space: StateSpace, elements: Sequence[Sequence] | Measurement) -> CorrelationMatrix:
    """``p[i][j] = state_i . element_j``; rows sum to one."""
    if isinstance(elements, Measurement):
        elements = elements.elements
    p = tuple(tuple(sum((a * b for a, b in zip(s, e)), Fraction(0)) for e in elements) for s in space.states)
    for i, row in enumerate(p):
        if any(v < 0 or v > 1 for v in row) or sum(row) != 1:
            raise DegenerateError(f"row {i} of the correlation matrix is not a probability vector")
    return CorrelationMatrix(p)
