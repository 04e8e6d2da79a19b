from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigdimlab.errors import DimensionError, ParseError
from sigdimlab.exact import (format_rational, gram, independent_subset, integerize, rank, rational,
                             solve, transpose)
from sigdimlab.gpt import homogenize
from sigdimlab.solids import generate_solid

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)
nonzero = fractions.filter(lambda q: q != 0)


def small_matrix(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(fractions, min_size=c, max_size=c), min_size=1, max_size=max_rows))


# --- scalars -------------------------------------------------------------

def test_rational_parses_strings_and_ints():
    assert rational("3/6") == F(1, 2)
    assert rational(" -4 ") == F(-4)
    assert rational(7) == F(7)
    assert format_rational(F(-3, 4)) == "-3/4"
    assert format_rational(F(5)) == "5"


@pytest.mark.parametrize("bad", ["1/0", "0.5", "abc", "", "1/-2", 0.5, True, None])
def test_rational_rejects_malformed(bad):
    with pytest.raises(ParseError):
        rational(bad)


@given(fractions, nonzero)
def test_addition_and_division_invert(a, b):
    assert (a + b) - b == a
    assert (a * b) / b == a


@given(fractions)
def test_rationals_stay_reduced(a):
    q = rational(format_rational(a))
    assert q == a and q.denominator > 0


# --- gram ----------------------------------------------------------------

def test_gram_examples():
    assert gram([(1, 0), (0, 1)]) == ((1, 0), (0, 1))
    assert gram([(1, 0), (0, 1), (-1, 0)]) == ((1, 0, -1), (0, 1, 0), (-1, 0, 1))


def test_gram_unchanged_by_quarter_turn():
    square = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    turned = [(-y, x) for x, y in square]
    assert gram(square) == gram(turned)


def test_gram_rejects_ragged_input():
    with pytest.raises(DimensionError):
        gram([(1, 0), (1, 2, 3)])


@given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=1, max_size=6), st.randoms())
def test_gram_is_permutation_equivariant(points, rnd):
    perm = list(range(len(points)))
    rnd.shuffle(perm)
    g = gram(points)
    gp = gram([points[k] for k in perm])
    assert all(gp[i][j] == g[perm[i]][perm[j]] for i in range(len(perm)) for j in range(len(perm)))


@given(st.lists(st.lists(fractions, min_size=2, max_size=2), min_size=1, max_size=6))
def test_integerized_gram_is_integral(points):
    ints, s = integerize(points)
    assert all(x.denominator == 1 for row in gram(ints) for x in row)
    assert [tuple(s * x for x in p) for p in ints] == [tuple(F(x) for x in p) for p in points]


# --- rank ----------------------------------------------------------------

def test_rank_examples():
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank(homogenize(generate_solid("octahedron")).states) == 4


@given(small_matrix())
def test_rank_of_transpose(mat):
    assert rank(mat) == rank(transpose(mat))


@given(small_matrix(), st.data())
def test_rank_under_row_scaling(mat, data):
    ks = data.draw(st.lists(nonzero, min_size=len(mat), max_size=len(mat)))
    assert rank([[k * x for x in row] for row, k in zip(mat, ks)]) == rank(mat)


@given(small_matrix())
def test_independent_subset_size_is_rank(mat):
    idx = independent_subset(mat)
    assert len(idx) == rank(mat) == rank([mat[i] for i in idx])


# --- integerize ----------------------------------------------------------

def test_integerize_examples():
    assert integerize([(F(1, 2), 0), (0, F(1, 3))]) == ([(3, 0), (0, 2)], F(1, 6))
    assert integerize([(1, 2), (3, -4)]) == ([(1, 2), (3, -4)], F(1))
    _, s = integerize(generate_solid("triakis-tetrahedron").vertices)
    assert s == F(1, 5)


@settings(max_examples=50)
@given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(fractions, min_size=3, max_size=3))
def test_solve_returns_exact_solution_or_none(mat, rhs):
    x = solve(mat, rhs)
    if rank(mat) < 3:
        assert x is None
    else:
        assert all(sum(a * b for a, b in zip(row, x)) == r for row, r in zip(mat, rhs))
