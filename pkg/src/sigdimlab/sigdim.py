"""Signaling dimension of polytopic systems.

Driver: for every symmetry class of extremal measurements, take the
correlation matrix ``p`` of its representative, keep only its extreme rows,
and find the least ``d`` such that ``p`` is a convex combination of the
deterministic ``d``-message strategies that vanish wherever ``p`` vanishes.
The search runs between the central-symmetry dependent bounds; the upper
bound itself is never tested since it always suffices.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from . import lp
from .errors import DegenerateError
from .gpt import (CorrelationMatrix, Effect, Measurement, MeasurementClass, StateSpace,
                  correlation_matrix, extremal_effects, extremal_measurements,
                  measurement_classes, state_symmetries)
from .polytope import extreme_point_indices
from .symmetry import SymmetryGroup

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundsRecord:
    lower: int
    upper: int
    cs: bool


def bounds(space: StateSpace) -> BoundsRecord:
    """Central-symmetry dependent bounds on the signaling dimension.

    Centrally symmetric: ``2 <= sig.dim <= max(2, aff_dim)``; otherwise
    ``3 <= sig.dim <= lin_dim``.
    """
    if space.aff_dim < 1:
        raise DegenerateError("the state space is a single point")
    if space.centrally_symmetric:
        return BoundsRecord(2, max(2, space.aff_dim), True)
    return BoundsRecord(3, space.lin_dim, False)


def generic_bounds(space: StateSpace) -> BoundsRecord:
    """The symmetry-blind bounds ``2 <= sig.dim <= lin_dim``."""
    if space.aff_dim < 1:
        raise DegenerateError("the state space is a single point")
    return BoundsRecord(2, space.lin_dim, space.centrally_symmetric)


def sigdim_2d(space: StateSpace) -> int:
    """Closed form for two-dimensional state spaces: 2 if centrally symmetric, else 3."""
    if space.aff_dim != 2:
        raise DegenerateError(f"sigdim_2d needs aff_dim 2, got {space.aff_dim}")
    return 2 if space.centrally_symmetric else 3


# ---------------------------------------------------------------------------
# classical strategies


def classical_vertices(p: CorrelationMatrix, d: int) -> Iterator[tuple[int, ...]]:
    """Stream every assignment ``f`` (row -> column) with ``p[i][f(i)] > 0`` and at most ``d`` distinct columns.

    Assignments come in lexicographic order of ``(f(0), f(1), ...)``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    supports = [p.row_support(i) for i in range(len(p.p))]
    m = len(supports)
    f = [0] * m
    counts: dict[int, int] = {}

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            yield tuple(f)
            return
        for j in supports[i]:
            new = j not in counts
            if new and len(counts) == d:
                continue
            counts[j] = counts.get(j, 0) + 1
            f[i] = j
            yield from rec(i + 1)
            counts[j] -= 1
            if not counts[j]:
                del counts[j]

    yield from rec(0)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    row = [1] + [0] * k  # S(0, .)
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def vertex_count(m: int, n: int, d: int) -> int:
    """Number of vertices of the m-input/n-output classical polytope with d messages."""
    if min(m, n, d) < 1:
        raise ValueError("m, n, d must be >= 1")
    return sum(math.factorial(k) * math.comb(n, k) * stirling2(m, k) for k in range(1, d + 1))


# ---------------------------------------------------------------------------
# simulability


@dataclass(frozen=True)
class SimulationCertificate:
    d: int
    strategies: tuple[tuple[int, ...], ...]  # strategy k sends row i to column strategies[k][i]
    weights: tuple[Fraction, ...]

    def matrix(self, shape: tuple[int, int]) -> tuple[tuple[Fraction, ...], ...]:
        m, n = shape
        acc = [[Fraction(0)] * n for _ in range(m)]
        for f, w in zip(self.strategies, self.weights):
            for i, j in enumerate(f):
                acc[i][j] += w
        return tuple(tuple(r) for r in acc)

    def verify(self, p: CorrelationMatrix) -> bool:
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            return False
        if any(len(set(f)) > self.d for f in self.strategies):
            return False
        return self.matrix(p.shape) == p.p


def reduce_rows(p: CorrelationMatrix) -> CorrelationMatrix:
    """Keep the distinct rows of ``p`` that are extreme points of the row set."""
    return CorrelationMatrix(tuple(p.p[i] for i in extreme_point_indices(p.p)))


def simulable(p: CorrelationMatrix, d: int) -> Optional[SimulationCertificate]:
    """Certificate that ``p`` lies in the d-message classical polytope, or None."""
    m, n = p.shape
    supports = [p.row_support(i) for i in range(m)]
    # one equation per support entry except the last of each row (row sums are implied)
    row_of: dict[tuple[int, int], int] = {}
    target: list[Fraction] = [Fraction(1)]
    for i, sup in enumerate(supports):
        for j in sup[:-1]:
            row_of[(i, j)] = len(target)
            target.append(p.p[i][j])
    strategies: list[tuple[int, ...]] = []
    columns: list[lp.Column] = []
    for f in classical_vertices(p, d):
        strategies.append(f)
        rows = [0]
        for i, j in enumerate(f):
            r = row_of.get((i, j))
            if r is not None:
                rows.append(r)
        columns.append((tuple(rows), None))
    if not columns:
        return None
    t0 = time.perf_counter()
    out = lp.nonnegative_combination(columns, target)
    log.debug("simulable d=%d: %dx%d matrix, %d strategies, %d pivots, %.2fs -> %s",
              d, m, n, len(columns), out.pivots, time.perf_counter() - t0, out.status.value)
    if not out.optimal:
        return None
    used = [(strategies[k], w) for k, w in enumerate(out.x) if w > 0]
    cert = SimulationCertificate(d, tuple(f for f, _ in used), tuple(w for _, w in used))
    if not cert.verify(p):
        raise lp.CertificateError("simulation certificate does not reproduce p")
    return cert


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True)
class ClassResult:
    representative: Measurement
    class_size: int
    p: CorrelationMatrix            # row-reduced correlation matrix
    d: int                          # least sufficient d
    certificate: Optional[SimulationCertificate]  # None when d was fixed by the upper bound
    tested: tuple[tuple[int, bool], ...] = ()


@dataclass
class SigDimReport:
    value: int
    bounds: BoundsRecord
    classes: list[ClassResult] = field(default_factory=list)
    method: str = "pipeline"
    group_order: Optional[int] = None
    n_effects: Optional[int] = None
    n_measurements: Optional[int] = None
    seconds: float = 0.0

    @property
    def n_classes(self) -> Optional[int]:
        return len(self.classes) if self.method == "pipeline" else None


@dataclass
class SystemAnalysis:
    """Everything the driver computes about a state space, built lazily."""

    space: StateSpace
    use_symmetry: bool = True
    _effects: Optional[list[Effect]] = None
    _measurements: Optional[list[Measurement]] = None
    _group: Optional[SymmetryGroup] = None
    _classes: Optional[list[MeasurementClass]] = None

    @property
    def effects(self) -> list[Effect]:
        if self._effects is None:
            self._effects = extremal_effects(self.space)
        return self._effects

    @property
    def measurements(self) -> list[Measurement]:
        if self._measurements is None:
            self._measurements = extremal_measurements(self.space, self.effects)
        return self._measurements

    @property
    def group(self) -> SymmetryGroup:
        if self._group is None:
            self._group = state_symmetries(self.space)
        return self._group

    @property
    def classes(self) -> list[MeasurementClass]:
        if self._classes is None:
            if self.use_symmetry:
                self._classes = measurement_classes(self.measurements, self.group, self.effects)
            else:
                self._classes = [MeasurementClass(ms, (ms,)) for ms in self.measurements]
        return self._classes


def minimal_d(space: StateSpace, meas: Measurement, bnd: BoundsRecord, class_size: int = 1) -> ClassResult:
    """Least d in [lower, upper] for one measurement; the upper bound is taken without testing."""
    p = reduce_rows(correlation_matrix(space, meas))
    tested = []
    d = bnd.lower
    while d < bnd.upper:
        cert = simulable(p, d)
        tested.append((d, cert is not None))
        if cert is not None:
            return ClassResult(meas, class_size, p, d, cert, tuple(tested))
        d += 1
    return ClassResult(meas, class_size, p, bnd.upper, None, tuple(tested))


def _minimal_d_job(args):
    return minimal_d(*args)


def signaling_dimension(space: StateSpace, *, use_symmetry: bool = True, shortcut_2d: bool = True,
                        tight_bounds: bool = True, jobs: int = 1,
                        analysis: Optional[SystemAnalysis] = None) -> SigDimReport:
    """Exact signaling dimension of a rational polytopic state space.

    ``shortcut_2d`` answers aff_dim 2 in closed form; ``tight_bounds=False``
    searches the symmetry-blind range ``[2, lin_dim]`` instead of the
    central-symmetry dependent one (used to cross-check the bounds).
    """
    t0 = time.perf_counter()
    bnd = bounds(space) if tight_bounds else generic_bounds(space)
    if shortcut_2d and space.aff_dim == 2:
        return SigDimReport(sigdim_2d(space), bounds(space), method="closed-form 2D",
                            seconds=time.perf_counter() - t0)
    an = analysis or SystemAnalysis(space, use_symmetry)
    classes = an.classes
    work = [(space, c.representative, bnd, c.size) for c in classes]
    if bnd.lower >= bnd.upper:
        results = [ClassResult(c.representative, c.size, reduce_rows(correlation_matrix(space, c.representative)),
                               bnd.upper, None) for c in classes]
    elif jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_minimal_d_job, work))
    else:
        results = [minimal_d(*w) for w in work]
    value = max((r.d for r in results), default=bnd.lower)
    if not bnd.lower <= value <= bnd.upper:
        raise AssertionError(f"sig.dim {value} outside bounds [{bnd.lower}, {bnd.upper}]")
    return SigDimReport(value, bounds(space), results,
                        group_order=an.group.order if use_symmetry else None,
                        n_effects=len(an.effects), n_measurements=len(an.measurements),
                        seconds=time.perf_counter() - t0)
