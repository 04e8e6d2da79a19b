from __future__ import annotations

from collections import Counter
from fractions import Fraction as F
from itertools import combinations, permutations

import pytest

from sigdimlab import lp
from sigdimlab.errors import SymmetryError
from sigdimlab.exact import independent_subset, rank, solve
from sigdimlab.gpt import (correlation_matrix, extremal_effects, extremal_measurements, homogenize,
                           induced_effect_action, measurement_classes, state_symmetries)
from sigdimlab.polytope import VRep, extreme_points, vrep_to_hrep
from sigdimlab.solids import generate_solid
from sigdimlab.symmetry import compose, identity

SEGMENT = [(0,), (1,)]
SQUARE = [(1, 0), (0, 1), (-1, 0), (0, -1)]
TRIANGLE = [(0, 0), (1, 0), (0, 1)]
PRISM = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)]


def space(x):
    return homogenize(generate_solid(x) if isinstance(x, str) else x)


# --- homogenize ---------------------------------------------------------------

def test_square_states():
    s = space(SQUARE)
    assert s.m == 4 and s.lin_dim == 3 and s.unit == (1, 0, 0)
    assert s.states[0] == (1, 1, 0)


def test_octahedron_states():
    s = space("octahedron")
    assert s.m == 6 and len(s.states[0]) == 4


@pytest.mark.parametrize("name", ["cube", "triakis-tetrahedron", "hyperoctahedron:5", "tetrakis-hexahedron"])
def test_unit_effect_is_one_on_every_state(name):
    s = space(name)
    assert all(sum(a * b for a, b in zip(s.unit, w)) == 1 for w in s.states)


def test_embedded_polytope_projects_to_affine_hull():
    s = space([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert s.aff_dim == 2 and s.lin_dim == 3


# --- effects -------------------------------------------------------------------

def _brute_effect_vertices(s):
    """Vertices of {e : 0 <= e.w <= 1} by solving every ell-subset of tight constraints."""
    ell = s.lin_dim
    cons = [(w, 0) for w in s.states] + [(w, 1) for w in s.states]
    found = set()
    for sub in combinations(cons, ell):
        x = solve([c[0] for c in sub], [c[1] for c in sub])
        if x is not None and all(0 <= sum(a * b for a, b in zip(x, w)) <= 1 for w in s.states):
            found.add(x)
    return found


@pytest.mark.parametrize("pts", [SEGMENT, SQUARE, TRIANGLE, PRISM, "octahedron", "cube"])
def test_effects_match_brute_force_vertices(pts):
    s = space(pts)
    effs = extremal_effects(s)
    assert {e.vector for e in effs} == _brute_effect_vertices(s)
    zero = (0,) * s.lin_dim
    assert zero in {e.vector for e in effs} and s.unit in {e.vector for e in effs}
    for e in effs:
        assert e.values == tuple(sum(a * b for a, b in zip(e.vector, w)) for w in s.states)
        assert all(0 <= v <= 1 for v in e.values)


def test_bit_has_two_nontrivial_effects():
    effs = extremal_effects(space(SEGMENT))
    assert sum(not e.trivial for e in effs) == 2


def _positive_multiple(e, f):
    k = next((y / x for x, y in zip(e, f) if x), None)
    return k is not None and k > 0 and all(k * x == y for x, y in zip(e, f))


@pytest.mark.parametrize("pts", [SQUARE, TRIANGLE, PRISM, "octahedron", "truncated-tetrahedron",
                                 "triakis-tetrahedron"])
def test_ray_effects_are_facet_functionals(pts):
    s = space(pts)
    # facet a.x <= b becomes the functional (b, -a), nonnegative on the states
    facets = [(b,) + tuple(-x for x in a) for a, b in vrep_to_hrep(VRep(s.vertices)).inequalities]
    for e in extremal_effects(s):
        if not e.trivial:
            assert e.ray == any(_positive_multiple(e.vector, f) for f in facets)


# --- measurements --------------------------------------------------------------

def _brute_measurements(s, effs):
    cand = [k for k, e in enumerate(effs) if e.ray and not e.trivial]
    ell, out = s.lin_dim, set()
    for n in range(2, ell + 1):
        for sub in combinations(cand, n):
            vecs = [effs[k].vector for k in sub]
            if rank(vecs) < n:
                continue
            M = [[v[r] for v in vecs] for r in range(ell)]
            rows = independent_subset(M)
            a = solve([M[r] for r in rows], [s.unit[r] for r in rows])
            if all(sum(M[r][j] * a[j] for j in range(n)) == s.unit[r] for r in range(ell)) and all(x > 0 for x in a):
                out.add(sub)
    return out


@pytest.mark.parametrize("pts,count", [(SEGMENT, 1), (SQUARE, 2), (TRIANGLE, 1), ("cube", 3), ("octahedron", 6),
                                       ("truncated-tetrahedron", 6), ("triakis-tetrahedron", 93),
                                       ("cuboctahedron", 41), (PRISM, None)])
def test_measurements_match_subset_enumeration(pts, count):
    s = space(pts)
    effs = extremal_effects(s)
    ms = extremal_measurements(s, effs)
    assert {m.indices for m in ms} == _brute_measurements(s, effs)
    if count is not None:
        assert len(ms) == count
    for m in ms:
        assert tuple(sum(col) for col in zip(*m.elements)) == s.unit
        assert all(c > 0 for c in m.coefficients) and 2 <= m.n <= s.lin_dim
        p = correlation_matrix(s, m)
        assert all(0 <= x <= 1 for row in p.p for x in row)


def _padded_columns(target, others, n, ell):
    cols = []
    for a in others:
        zero = (F(0),) * ell
        for slots in permutations(range(n), a.n):
            mat = [zero] * n
            for el, slot in zip(a.elements, slots):
                mat[slot] = el
            flat = [x for el in mat for x in el]
            if flat != target:
                cols.append(flat)
    return cols


@pytest.mark.parametrize("pts", [SQUARE, TRIANGLE, PRISM, "octahedron", "cube"])
def test_no_measurement_is_a_mixture_of_others(pts):
    s = space(pts)
    ms = extremal_measurements(s, extremal_effects(s))
    for m in ms:
        target = [x for el in m.elements for x in el]
        cols = _padded_columns(target, [a for a in ms if a.n <= m.n], m.n, s.lin_dim)
        if not cols:
            continue
        A = [[1] * len(cols)] + [list(r) for r in zip(*cols)]
        assert not lp.feasible(A, [1] + target).optimal


@pytest.mark.parametrize("n", [3, 4])
def test_hypercube_measurements_have_two_outcomes(n):
    s = space(f"hypercube:{n}")
    ms = extremal_measurements(s, extremal_effects(s))
    assert len(ms) == n and all(m.n == 2 for m in ms)


# --- induced action and classes -------------------------------------------------

def test_identity_induces_identity_and_fixes_constants():
    s = space("octahedron")
    effs = extremal_effects(s)
    assert induced_effect_action(effs, identity(s.m)) == identity(len(effs))
    zero = next(k for k, e in enumerate(effs) if all(v == 0 for v in e.values))
    unit = next(k for k, e in enumerate(effs) if all(v == 1 for v in e.values))
    for g in state_symmetries(s):
        tau = induced_effect_action(effs, g)
        assert tau[zero] == zero and tau[unit] == unit


def test_octahedron_coordinate_swap_moves_facet_effects():
    s = space("octahedron")
    effs = extremal_effects(s)
    verts = list(s.vertices)
    swapped = tuple(verts.index((v[1], v[0], v[2])) for v in verts)
    tau = induced_effect_action(effs, swapped)
    for k, e in enumerate(effs):
        moved = effs[tau[k]].vector
        assert moved == (e.vector[0], e.vector[2], e.vector[1], e.vector[3])


def test_non_symmetry_has_no_induced_action():
    s = space(TRIANGLE + [(1, 1)])  # unit square
    effs = extremal_effects(s)
    with pytest.raises(SymmetryError):
        induced_effect_action(effs, (1, 0, 2, 3))   # swaps one edge's ends, fixes the opposite edge


@pytest.mark.parametrize("name", ["octahedron", "truncated-tetrahedron"])
def test_induced_action_is_a_homomorphism(name):
    s = space(name)
    effs = extremal_effects(s)
    group = list(state_symmetries(s))
    taus = {g: induced_effect_action(effs, g) for g in group}
    for a in group[::5]:
        for b in group[::3]:
            assert taus[compose(a, b)] == compose(taus[a], taus[b])


@pytest.mark.parametrize("name,total,classes", [("octahedron", 6, 2), ("cuboctahedron", 41, 6),
                                                ("hyperoctahedron:4", 48, 3), ("cube", 3, 1)])
def test_measurement_classes(name, total, classes):
    s = space(name)
    effs = extremal_effects(s)
    ms = extremal_measurements(s, effs)
    cls = measurement_classes(ms, state_symmetries(s), effs)
    assert len(ms) == total and len(cls) == classes
    assert sum(c.size for c in cls) == total


# --- correlation matrices --------------------------------------------------------

def test_trivial_measurement_gives_ones_column():
    s = space(SQUARE)
    assert correlation_matrix(s, [s.unit]).p == ((1,),) * 4


def test_bit_measurement_is_identity():
    s = space(SEGMENT)
    effs = extremal_effects(s)
    ms = extremal_measurements(s, effs)
    assert sorted(correlation_matrix(s, ms[0]).p) == [(0, 1), (1, 0)]


def test_octahedron_two_outcome_rows():
    s = space("octahedron")
    ms = [m for m in extremal_measurements(s, extremal_effects(s)) if m.n == 2]
    p = correlation_matrix(s, ms[0])
    assert p.shape == (6, 2) and all(sum(r) == 1 for r in p.p)
    assert len(extreme_points(p.p)) <= 3


def test_measurement_counts_by_outcomes_on_hyperoctahedron():
    s = space("hyperoctahedron:4")
    ms = extremal_measurements(s, extremal_effects(s))
    assert Counter(m.n for m in ms) == Counter({2: 8, 4: 24, 5: 16})
