"""Exact rational linear programming.

Two-phase revised simplex over sparse integer columns. Basis inverse, primal
values and duals are Fractions; pricing runs on integers by clearing the
common denominator of the duals, so a column's reduced cost costs a handful
of integer additions. Every outcome carries a certificate that is re-checked
exactly before it is returned: a primal point plus a dual solution with equal
objective (Optimal), or a Farkas vector (Infeasible).

Wide problems price through a dense int64 matrix product; the product is
used only when a bound on its magnitude shows it cannot overflow, and the
pure-Python loop takes over otherwise, so the result is exact either way.

Pivot rule: Dantzig's most-negative reduced cost. Phase 1 starts from the
identity basis, so the lexicographic ratio test applies and prevents cycling.
Phase 2 starts from wherever phase 1 left off (after artificials are driven
out, which can break lexicographic positivity), so it switches to Bland's
smallest-index rule after each degenerate pivot until progress is strict
again; Bland's rule cannot cycle from any starting basis.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, SigDimError
from .exact import Vector, lcm_of_denominators, rational

log = logging.getLogger(__name__)

# A sparse column: (row indices, integer values) or (row indices, None) for all-ones.
Column = tuple[tuple[int, ...], Optional[tuple[int, ...]]]


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class CertificateError(SigDimError):
    """An LP certificate failed exact re-verification (indicates a solver bug)."""


@dataclass(frozen=True)
class LinearProgram:
    """minimize ``objective . x`` s.t. ``A_eq x = b_eq``, ``A_le x <= b_le``, ``x >= lower``.

    ``lower=None`` means every variable is nonnegative; a ``None`` entry inside
    ``lower`` makes that variable free.
    """

    objective: Sequence
    A_eq: Sequence[Sequence] = ()
    b_eq: Sequence = ()
    A_le: Sequence[Sequence] = ()
    b_le: Sequence = ()
    lower: Optional[Sequence] = None

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    value: Optional[Fraction] = None
    x: Optional[Vector] = None
    # Dual multipliers (Optimal): one per equality row, one (<= 0) per inequality row.
    dual_eq: Optional[Vector] = None
    dual_le: Optional[Vector] = None
    # Farkas certificate (Infeasible): y (free) on equalities, z >= 0 on inequalities.
    farkas_eq: Optional[Vector] = None
    farkas_le: Optional[Vector] = None
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# ---------------------------------------------------------------------------
# simplex engine on  A x = b, x >= 0, b >= 0, A integer and sparse by column


_DENSE_MIN_COLS = 512
_INT64_SAFE = 2 ** 62


class _Engine:
    def __init__(self, cols: Sequence[Column], b: Sequence[Fraction], nrows: int):
        self.cols = cols
        self.K = len(cols)
        self.R = nrows
        self.b = list(b)
        one, zero = Fraction(1), Fraction(0)
        # artificial column K+i is the i-th unit vector
        self.basis = [self.K + i for i in range(nrows)]
        self.binv = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)]
        self.xb = list(self.b)
        self.is_basic = bytearray(self.K)
        self.pivots = 0
        self.dense = None
        if self.K >= _DENSE_MIN_COLS:
            self.dense = np.zeros((self.K, nrows), dtype=np.int64)
            l1 = 0
            for j, (rows, vals) in enumerate(cols):
                if vals is None:
                    self.dense[j, list(rows)] = 1
                    l1 = max(l1, len(rows))
                else:
                    self.dense[j, list(rows)] = vals
                    l1 = max(l1, sum(abs(v) for v in vals))
            self.l1max = l1

    def column(self, j: int) -> Column:
        if j >= self.K:
            return (j - self.K,), (1,)
        return self.cols[j]

    def duals(self, cost_of) -> list[Fraction]:
        y = [Fraction(0)] * self.R
        for i, bj in enumerate(self.basis):
            c = cost_of(bj)
            if c:
                row = self.binv[i]
                for r in range(self.R):
                    if row[r]:
                        y[r] += c * row[r]
        return y

    def entering_column(self, j: int) -> list[Fraction]:
        rows, vals = self.column(j)
        binv = self.binv
        d = [Fraction(0)] * self.R
        if vals is None:
            for i in range(self.R):
                bi = binv[i]
                s = 0
                for r in rows:
                    s += bi[r]
                d[i] = s
        else:
            for i in range(self.R):
                bi = binv[i]
                s = 0
                for r, v in zip(rows, vals):
                    s += v * bi[r]
                d[i] = s
        return d

    def price(self, y: list[Fraction], cost: Sequence[int], bland: bool) -> int:
        """Index of the entering structural column, or -1 when no reduced cost is negative."""
        D = lcm_of_denominators(y)
        yi = [int(v * D) for v in y]
        g = math.gcd(D, *yi)
        if g > 1:
            D, yi = D // g, [v // g for v in yi]
        if self.dense is not None:
            j = self._price_dense(yi, D, cost, bland)
            if j is not None:
                return j
        get = yi.__getitem__
        basic = self.is_basic
        best, best_j = 0, -1
        for j, (rows, vals) in enumerate(self.cols):
            if basic[j]:
                continue
            if vals is None:
                s = sum(map(get, rows))
            else:
                s = 0
                for r, v in zip(rows, vals):
                    s += v * yi[r]
            rc = cost[j] * D - s if cost else -s
            if rc < best:
                if bland:
                    return j
                best, best_j = rc, j
        return best_j

    def _price_dense(self, yi: list[int], D: int, cost: Sequence[int], bland: bool) -> Optional[int]:
        """Vectorized pricing; None when int64 could overflow."""
        ymax = max(map(abs, yi), default=0)
        cmax = max(map(abs, cost), default=0) if cost else 0
        if ymax * self.l1max + cmax * D >= _INT64_SAFE:
            return None
        rc = -(self.dense @ np.array(yi, dtype=np.int64))
        if cost:
            rc += np.array(cost, dtype=np.int64) * D
        rc[np.frombuffer(self.is_basic, dtype=np.uint8).astype(bool)] = 0
        if bland:
            neg = np.flatnonzero(rc < 0)
            return int(neg[0]) if len(neg) else -1
        j = int(np.argmin(rc))
        return j if rc[j] < 0 else -1

    def pivot(self, i: int, j: int, d: list[Fraction]) -> None:
        piv = d[i]
        binv, xb = self.binv, self.xb
        prow = [x / piv for x in binv[i]]
        binv[i] = prow
        theta = xb[i] / piv
        xb[i] = theta
        for k in range(self.R):
            if k != i and d[k]:
                f = d[k]
                row = binv[k]
                binv[k] = [a - f * b if b else a for a, b in zip(row, prow)]
                xb[k] -= f * theta
        old = self.basis[i]
        if old < self.K:
            self.is_basic[old] = 0
        self.basis[i] = j
        self.is_basic[j] = 1
        self.pivots += 1

    def run(self, cost: Sequence[int], art_cost: int, lexicographic: bool = False) -> bool:
        """Optimize from the current basis. False means unbounded.

        With ``lexicographic`` the rows ``(x_B, B^-1)`` must start
        lexicographically positive; ratio ties then go to the lexicographically
        least row, which keeps them positive and rules out cycling, so Dantzig
        pricing is used throughout. Otherwise a degenerate pivot switches to
        Bland's rule until the next strict improvement.
        """

        def cost_of(j: int) -> int:
            return art_cost if j >= self.K else (cost[j] if cost else 0)

        bland = False
        while True:
            y = self.duals(cost_of)
            j = self.price(y, cost, bland)
            if j < 0:
                return True
            d = self.entering_column(j)
            leave, best, ties = -1, None, []
            for i in range(self.R):
                if d[i] > 0:
                    ratio = self.xb[i] / d[i]
                    if best is None or ratio < best:
                        best, leave, ties = ratio, i, [i]
                    elif ratio == best:
                        ties.append(i)
                        if self.basis[i] < self.basis[leave]:
                            leave = i
            if leave < 0:
                return False
            if lexicographic:
                if len(ties) > 1:
                    leave = min(ties, key=lambda i: [x / d[i] for x in self.binv[i]])
            else:
                bland = best == 0
            self.pivot(leave, j, d)

    def drive_out_artificials(self) -> None:
        """Pivot zero-valued artificials out of the basis where the row allows it."""
        for i in range(self.R):
            if self.basis[i] < self.K:
                continue
            j = self._first_nonzero(self.binv[i])
            if j >= 0:
                self.pivot(i, j, self.entering_column(j))
            # otherwise no structural column reaches row i: the row is redundant
            # and its artificial stays basic at zero forever

    def _first_nonzero(self, row: list[Fraction]) -> int:
        """Least nonbasic structural column with a nonzero entry in ``row . A``."""
        D = lcm_of_denominators(row)
        ri = [int(v * D) for v in row]
        g = math.gcd(*ri)
        if g > 1:
            ri = [v // g for v in ri]
        if self.dense is not None and max(map(abs, ri)) * self.l1max < _INT64_SAFE:
            s = self.dense @ np.array(ri, dtype=np.int64)
            s[np.frombuffer(self.is_basic, dtype=np.uint8).astype(bool)] = 0
            nz = np.flatnonzero(s)
            return int(nz[0]) if len(nz) else -1
        get = ri.__getitem__
        for j, (rows, vals) in enumerate(self.cols):
            if self.is_basic[j]:
                continue
            if vals is None:
                s = sum(map(get, rows))
            else:
                s = sum(v * ri[r] for r, v in zip(rows, vals))
            if s:
                return j
        return -1

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.K
        for i, j in enumerate(self.basis):
            if j < self.K:
                x[j] = self.xb[i]
        return x


def _solve_standard(cols: Sequence[Column], b: Sequence[Fraction], nrows: int,
                    cost: Optional[Sequence[int]]):
    """Solve min cost.x, A x = b (b >= 0), x >= 0. Returns (status, x, y, engine)."""
    eng = _Engine(cols, b, nrows)
    eng.run(None, 1, lexicographic=True)
    infeas = sum((eng.xb[i] for i, j in enumerate(eng.basis) if j >= eng.K), Fraction(0))
    if infeas > 0:
        y = eng.duals(lambda j: 1 if j >= eng.K else 0)
        return Status.INFEASIBLE, None, y, eng
    eng.drive_out_artificials()
    if not eng.run(cost, 0):
        return Status.UNBOUNDED, None, None, eng
    cost_of = (lambda j: 0 if j >= eng.K else cost[j]) if cost else (lambda j: 0)
    return Status.OPTIMAL, eng.primal(), eng.duals(cost_of), eng


# ---------------------------------------------------------------------------
# dense front end


def _as_matrix(rows, ncols: int, name: str) -> list[list[Fraction]]:
    out = []
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise DimensionError(f"{name} row {i} has {len(r)} entries, expected {ncols}")
        out.append([rational(x) for x in r])
    return out


def solve(lp: LinearProgram) -> LPOutcome:
    """Exact optimum of ``lp`` or an exact certificate of infeasibility/unboundedness."""
    n = lp.nvars
    c = [rational(x) for x in lp.objective]
    A_eq = _as_matrix(lp.A_eq, n, "A_eq")
    A_le = _as_matrix(lp.A_le, n, "A_le")
    b_eq = [rational(x) for x in lp.b_eq]
    b_le = [rational(x) for x in lp.b_le]
    if len(b_eq) != len(A_eq) or len(b_le) != len(A_le):
        raise DimensionError("right-hand side length does not match constraint rows")
    if lp.lower is None:
        lower: list[Optional[Fraction]] = [Fraction(0)] * n
    else:
        if len(lp.lower) != n:
            raise DimensionError(f"lower has {len(lp.lower)} entries, expected {n}")
        lower = [None if v is None else rational(v) for v in lp.lower]

    rows = A_eq + A_le
    rhs = b_eq + b_le
    n_eq = len(A_eq)
    R = len(rows)

    # standard-form variables: x_j = l_j + x'_j, or x_j = x+_j - x-_j when free
    var_cols: list[list[tuple[int, int]]] = []  # per original var: (std index, sign)
    std_cost: list[Fraction] = []
    for j in range(n):
        if lower[j] is None:
            var_cols.append([(len(std_cost), 1), (len(std_cost) + 1, -1)])
            std_cost += [c[j], -c[j]]
        else:
            var_cols.append([(len(std_cost), 1)])
            std_cost.append(c[j])
    n_struct = len(std_cost)

    shifted = []
    for r in range(R):
        shifted.append(rhs[r] - sum(rows[r][j] * lower[j] for j in range(n) if lower[j]))
    sign = [1 if shifted[r] >= 0 else -1 for r in range(R)]
    row_scale = [lcm_of_denominators(rows[r]) for r in range(R)]

    entries: list[list[tuple[int, int]]] = [[] for _ in range(n_struct)]
    for r in range(R):
        k = sign[r] * row_scale[r]
        for j in range(n):
            a = rows[r][j]
            if a:
                for sj, sg in var_cols[j]:
                    entries[sj].append((r, int(sg * k * a)))
    for r in range(n_eq, R):
        entries.append([(r, sign[r] * row_scale[r])])
        std_cost.append(Fraction(0))
    cols: list[Column] = [(tuple(r for r, _ in e), tuple(v for _, v in e)) for e in entries]
    b_std = [sign[r] * row_scale[r] * shifted[r] for r in range(R)]
    Lc = lcm_of_denominators(std_cost)
    cost_int = [int(v * Lc) for v in std_cost]

    status, xs, y, eng = _solve_standard(cols, b_std, R, cost_int if any(cost_int) else None)

    if status is Status.INFEASIBLE:
        w = [sign[r] * row_scale[r] * y[r] for r in range(R)]
        out = LPOutcome(Status.INFEASIBLE, farkas_eq=tuple(-v for v in w[:n_eq]),
                        farkas_le=tuple(-v for v in w[n_eq:]), pivots=eng.pivots)
    elif status is Status.UNBOUNDED:
        out = LPOutcome(Status.UNBOUNDED, pivots=eng.pivots)
    else:
        x = []
        for j in range(n):
            v = sum((sg * xs[sj] for sj, sg in var_cols[j]), Fraction(0))
            x.append(v + (lower[j] or 0))
        w = [Fraction(sign[r] * row_scale[r]) * y[r] / Lc for r in range(R)]
        value = sum((cj * xj for cj, xj in zip(c, x)), Fraction(0))
        out = LPOutcome(Status.OPTIMAL, value=value, x=tuple(x), dual_eq=tuple(w[:n_eq]),
                        dual_le=tuple(w[n_eq:]), pivots=eng.pivots)
    verify(lp, out)
    return out


def verify(lp: LinearProgram, out: LPOutcome) -> None:
    """Re-check an outcome's certificate in exact arithmetic; raise CertificateError if it fails."""
    n = lp.nvars
    c = [rational(x) for x in lp.objective]
    A_eq = [[rational(x) for x in r] for r in lp.A_eq]
    A_le = [[rational(x) for x in r] for r in lp.A_le]
    b_eq = [rational(x) for x in lp.b_eq]
    b_le = [rational(x) for x in lp.b_le]
    lower = [Fraction(0)] * n if lp.lower is None else [None if v is None else rational(v) for v in lp.lower]

    def combo(y_eq, y_le):
        return [sum(y_eq[r] * A_eq[r][j] for r in range(len(A_eq)))
                + sum(y_le[r] * A_le[r][j] for r in range(len(A_le))) for j in range(n)]

    if out.status is Status.OPTIMAL:
        x = out.x
        for r, row in enumerate(A_eq):
            if sum(a * v for a, v in zip(row, x)) != b_eq[r]:
                raise CertificateError(f"equality row {r} violated")
        for r, row in enumerate(A_le):
            if sum(a * v for a, v in zip(row, x)) > b_le[r]:
                raise CertificateError(f"inequality row {r} violated")
        for j in range(n):
            if lower[j] is not None and x[j] < lower[j]:
                raise CertificateError(f"variable {j} below its bound")
        if any(v > 0 for v in out.dual_le):
            raise CertificateError("inequality dual has wrong sign")
        g = combo(out.dual_eq, out.dual_le)
        dual_value = sum((a * b for a, b in zip(out.dual_eq, b_eq)), Fraction(0))
        dual_value += sum((a * b for a, b in zip(out.dual_le, b_le)), Fraction(0))
        for j in range(n):
            red = c[j] - g[j]
            if lower[j] is None:
                if red != 0:
                    raise CertificateError(f"dual infeasible at free variable {j}")
            else:
                if red < 0:
                    raise CertificateError(f"dual infeasible at variable {j}")
                dual_value += lower[j] * red
        if dual_value != out.value:
            raise CertificateError(f"duality gap: primal {out.value}, dual {dual_value}")
    elif out.status is Status.INFEASIBLE:
        y, z = out.farkas_eq, out.farkas_le
        if any(v < 0 for v in z):
            raise CertificateError("Farkas multipliers on inequalities must be >= 0")
        g = combo(y, z)
        bound = sum((a * b for a, b in zip(y, b_eq)), Fraction(0)) + sum((a * b for a, b in zip(z, b_le)), Fraction(0))
        lhs = Fraction(0)
        for j in range(n):
            if lower[j] is None:
                if g[j] != 0:
                    raise CertificateError("Farkas combination nonzero on a free variable")
            else:
                if g[j] < 0:
                    raise CertificateError("Farkas combination negative on a bounded variable")
                lhs += g[j] * lower[j]
        if not lhs > bound:
            raise CertificateError("Farkas vector does not certify infeasibility")


def feasible(A_eq: Sequence[Sequence], b_eq: Sequence, nonneg: bool = True) -> LPOutcome:
    """Feasibility of ``A_eq x = b_eq`` (with ``x >= 0`` when ``nonneg``), zero objective."""
    if not A_eq:
        raise DimensionError("feasible() needs at least one equality row")
    n = len(A_eq[0])
    lower = None if nonneg else [None] * n
    return solve(LinearProgram([0] * n, A_eq, b_eq, lower=lower))


def nonnegative_combination(columns: Sequence[Column], target: Sequence[Fraction]) -> LPOutcome:
    """Find ``x >= 0`` with ``sum_k x_k columns[k] = target``.

    Columns are sparse integer columns (see :data:`Column`); this is the entry
    point for large 0/1 systems such as convex decompositions. Infeasible
    outcomes carry a Farkas vector ``y`` with ``y . column <= 0`` for every
    column and ``y . target > 0``.
    """
    R = len(target)
    target = [rational(t) for t in target]
    sign = [1 if t >= 0 else -1 for t in target]
    if any(s < 0 for s in sign):
        cols = []
        for rows, vals in columns:
            vv = vals if vals is not None else (1,) * len(rows)
            cols.append((rows, tuple(sign[r] * v for r, v in zip(rows, vv))))
    else:
        cols = list(columns)
    b = [s * t for s, t in zip(sign, target)]
    status, xs, y, eng = _solve_standard(cols, b, R, None)
    if status is Status.INFEASIBLE:
        w = tuple(-sign[r] * y[r] for r in range(R))
        out = LPOutcome(Status.INFEASIBLE, farkas_eq=w, pivots=eng.pivots)
        _check_sparse_farkas(columns, target, w)
        return out
    x = tuple(xs)
    _check_sparse_solution(columns, target, x)
    return LPOutcome(Status.OPTIMAL, value=Fraction(0), x=x, pivots=eng.pivots)


def _sparse_apply(columns: Sequence[Column], x: Sequence[Fraction], R: int) -> list[Fraction]:
    acc = [Fraction(0)] * R
    for (rows, vals), xk in zip(columns, x):
        if not xk:
            continue
        if vals is None:
            for r in rows:
                acc[r] += xk
        else:
            for r, v in zip(rows, vals):
                acc[r] += v * xk
    return acc


def _check_sparse_solution(columns, target, x) -> None:
    if any(v < 0 for v in x):
        raise CertificateError("negative weight in nonnegative combination")
    if _sparse_apply(columns, x, len(target)) != list(target):
        raise CertificateError("nonnegative combination does not reproduce the target")


def _check_sparse_farkas(columns, target, w) -> None:
    D = lcm_of_denominators(w)
    wi = [int(v * D) for v in w]
    for rows, vals in columns:
        vv = vals if vals is not None else (1,) * len(rows)
        if sum(v * wi[r] for r, v in zip(rows, vv)) < 0:
            raise CertificateError("Farkas vector positive on a column")
    if not sum(a * b for a, b in zip(w, target)) < 0:
        raise CertificateError("Farkas vector does not separate the target")

