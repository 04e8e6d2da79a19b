"""Label permutations that preserve a Gram matrix.

A permutation ``s`` of point labels is a symmetry when
``p[i] . p[j] == p[s[i]] . p[s[j]]`` for every pair; the points are related
by an orthogonal map exactly when this holds. The search is a depth-first
branch and bound over ordered prefixes: a prefix whose partial Gram matrix
differs from the reference one is cut, and once a prefix reaches the rank
``d`` of the set, the remaining labels are forced by sorting them on their
inner products with the prefix.

All comparisons are on integerized points, so the search does additions and
multiplications only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

from .errors import DegenerateError, SymmetryError
from .exact import integerize, independent_subset

Permutation = tuple[int, ...]
T = TypeVar("T", bound=Hashable)


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a o b``: apply ``b`` first, then ``a``."""
    return tuple(a[i] for i in b)


def inverse(a: Permutation) -> Permutation:
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def is_gram_symmetry(points: Sequence[Sequence], perm: Permutation) -> bool:
    n = len(points)
    for i in range(n):
        for j in range(i, n):
            if _ip(points[i], points[j]) != _ip(points[perm[i]], points[perm[j]]):
                return False
    return True


def _ip(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class SymmetryGroup:
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return len(self.elements[0])

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, perm) -> bool:
        return tuple(perm) in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def verify(self) -> None:
        """Check that the element set is a group.

        Greedily picks generators from the set and closes them by breadth-first
        right multiplication; every product must stay inside the set and the
        closure must exhaust it. A finite set containing the identity and equal
        to the closure of its generators is a group. Cost is
        O(order * #generators) products, with #generators <= log2(order).
        """
        elems = self._set
        if len(elems) != len(self.elements):
            raise SymmetryError("duplicate permutations in symmetry group")
        e = identity(self.degree)
        if e not in elems:
            raise SymmetryError("identity missing from symmetry group")
        gens: list[Permutation] = []
        reached = {e}
        for s in self.elements:
            if s in reached:
                continue
            gens.append(s)
            frontier = list(reached)
            while frontier:
                nxt = []
                for a in frontier:
                    for g in gens:
                        b = compose(a, g)
                        if b not in reached:
                            if b not in elems:
                                raise SymmetryError(f"group not closed: {a} o {g}")
                            reached.add(b)
                            nxt.append(b)
                frontier = nxt
        if len(reached) != len(elems):
            raise SymmetryError("closure of the generators does not exhaust the set")


def basis_prefix(points: Sequence[Sequence]) -> tuple[list[int], int]:
    """Relabeling ``order`` (new position -> old label) putting ``d`` independent points first.

    The independent points are picked greedily in input order; the rest
    follow in :func:`order` canonical order relative to that prefix.
    """
    if not points or all(all(x == 0 for x in p) for p in points):
        raise DegenerateError("points span the zero space")
    ints, _ = integerize(points)
    prefix = independent_subset(ints)
    rest = [i for i in range(len(ints)) if i not in set(prefix)]
    rest = order([ints[i] for i in prefix], rest, ints)
    return prefix + rest, len(prefix)


def _profile(p, prefix):
    return tuple(_ip(p, q) for q in prefix)


def order(prefix: Sequence[Sequence], pool: Sequence[int], points: Sequence[Sequence]) -> list[int]:
    """Sort the labels in ``pool`` by their inner products with the prefix points.

    A spanning prefix makes these profiles injective on distinct points;
    equal profiles raise :class:`DegenerateError`.
    """
    keyed = sorted((_profile(points[i], prefix), i) for i in pool)
    for (a, _), (b, _) in zip(keyed, keyed[1:]):
        if a == b:
            raise DegenerateError("two points share an inner-product profile: prefix does not span")
    return [i for _, i in keyed]


def _search(ref: Sequence[Sequence], d: int, target: Sequence[Sequence], first_only: bool) -> list[list[int]]:
    """Label sequences ``t`` over ``target`` whose Gram matrix equals that of ``ref``.

    ``ref`` must be in canonical order (``d`` spanning points first, the rest
    sorted by profile). Returns ``t`` with ``t[k]`` the target label matched to
    reference position ``k``.
    """
    m = len(ref)
    gref = [[_ip(ref[i], ref[j]) for j in range(m)] for i in range(m)]
    gt = [[_ip(target[i], target[j]) for j in range(m)] for i in range(m)]
    found: list[list[int]] = []
    chosen: list[int] = []
    used = [False] * m

    def node() -> bool:
        k = len(chosen)
        if k < d:
            for v in range(m):
                if used[v]:
                    continue
                row = gt[v]
                ref_row = gref[k]
                if row[v] != ref_row[k]:
                    continue
                if any(row[chosen[i]] != ref_row[i] for i in range(k)):
                    continue
                chosen.append(v)
                used[v] = True
                stop = node()
                used[v] = False
                chosen.pop()
                if stop:
                    return True
            return False
        # leaf: the remaining labels are forced by their profile order
        pool = [v for v in range(m) if not used[v]]
        prefix_pts = [target[v] for v in chosen]
        keyed = sorted((_profile(target[v], prefix_pts), v) for v in pool)
        if any(a[0] == b[0] for a, b in zip(keyed, keyed[1:])):
            return False
        t = chosen + [v for _, v in keyed]
        for i in range(d, m):
            gi, ri = gt[t[i]], gref[i]
            if any(gi[t[j]] != ri[j] for j in range(m)):
                return False
        found.append(t)
        return first_only

    node()
    return found


def find_symmetries(points: Sequence[Sequence], verify: bool = True) -> SymmetryGroup:
    """All label permutations preserving the Gram matrix of ``points``.

    ``perm[i]`` is the label that point ``i`` is sent to.
    """
    if len(set(map(tuple, points))) != len(points):
        raise DegenerateError("points must be pairwise distinct")
    relabel, d = basis_prefix(points)
    ints, _ = integerize(points)
    canon = [ints[i] for i in relabel]
    perms = []
    for t in _search(canon, d, canon, first_only=False):
        perm = [0] * len(points)
        for k, tk in enumerate(t):
            perm[relabel[k]] = relabel[tk]
        perms.append(tuple(perm))
    group = SymmetryGroup(tuple(sorted(perms)))
    if verify:
        group.verify()
    return group


def brute_force_symmetries(points: Sequence[Sequence]) -> SymmetryGroup:
    """Reference oracle: test all m! permutations."""
    return SymmetryGroup(tuple(p for p in permutations(range(len(points))) if is_gram_symmetry(points, p)))


def congruent(a: Sequence[Sequence], b: Sequence[Sequence]) -> Permutation | None:
    """A correspondence ``s`` with ``a[i] . a[j] == b[s[i]] . b[s[j]]``, or None.

    Inputs are compared as given (no rescaling).
    """
    if len(a) != len(b):
        return None
    if not a:
        return ()
    if all(all(x == 0 for x in p) for p in a):
        return tuple(range(len(a))) if all(all(x == 0 for x in p) for p in b) else None
    relabel, d = basis_prefix(a)
    canon = [a[i] for i in relabel]
    hits = _search(canon, d, b, first_only=True)
    if not hits:
        return None
    perm = [0] * len(a)
    for k, tk in enumerate(hits[0]):
        perm[relabel[k]] = tk
    return tuple(perm)


def orbits(group: Iterable[Permutation], items: Sequence[T], action: Callable[[Permutation, T], T],
           key: Callable[[T], object] | None = None) -> list[tuple[T, list[T]]]:
    """Partition ``items`` into orbits; each orbit is ``(representative, members)``.

    The representative is the least member under ``key`` (identity if None).
    """
    elems = list(group)
    ordered = sorted(items, key=key) if key else sorted(items)
    universe = set(ordered)
    seen: set = set()
    out = []
    for x in ordered:
        if x in seen:
            continue
        orbit = {x}
        for g in elems:
            y = action(g, x)
            if y not in universe:
                raise SymmetryError(f"action maps {x!r} outside the item set")
            orbit.add(y)
        seen |= orbit
        members = sorted(orbit, key=key) if key else sorted(orbit)
        out.append((x, members))
    return out
