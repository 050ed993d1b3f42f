import itertools
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from diskconf.forests import (CohomClass, OrderedForest, component_profile, count_forests, enumerate_forests,
                              kernel_ladder_n4, rank_of_classes, shared_vertex_difference, top_kernel_element)
from diskconf.linalg import bareiss_det, integer_rank, solve_rational


def test_forest_validation():
    with pytest.raises(ValueError):
        OrderedForest(3, ((2, 1),))
    with pytest.raises(ValueError):
        OrderedForest(3, ((1, 3), (2, 3)))
    with pytest.raises(ValueError):
        OrderedForest(0)


def test_edges_sorted_by_head():
    g = OrderedForest(4, ((1, 4), (1, 2)))
    assert g.edges == ((1, 2), (1, 4))
    assert g.parent(4) == 1 and g.parent(3) is None


@pytest.mark.parametrize("n", range(1, 7))
def test_counts_are_stirling_numbers(n):
    # unsigned Stirling numbers of the first kind, computed independently
    for j in range(n):
        expected = abs(sympy.functions.combinatorial.numbers.stirling(n, n - j, kind=1))
        assert len(enumerate_forests(n, j)) == expected == count_forests(n, j)


def test_total_is_factorial():
    assert sum(len(enumerate_forests(5, j)) for j in range(5)) == math.factorial(5)


def test_enumeration_distinct_and_sorted():
    fs = enumerate_forests(5, 3)
    assert len(set(fs)) == len(fs)
    assert [g.edges for g in fs] == sorted(g.edges for g in fs)


def test_json_roundtrip():
    for g in enumerate_forests(4, 2):
        assert OrderedForest.from_json(g.to_json()) == g


def test_components_and_profile():
    g = OrderedForest(5, ((1, 2), (3, 4)))
    assert g.components() == [{1, 2}, {3, 4}, {5}]
    assert component_profile(g).parts == (2, 2)


def test_class_arithmetic():
    a = CohomClass.basis(OrderedForest(3, ((1, 2),)))
    b = CohomClass.basis(OrderedForest(3, ((1, 3),)))
    assert (a - a).terms == {}
    assert (a + b - b) == a
    with pytest.raises(ValueError):
        a + CohomClass.basis(OrderedForest(4, ((1, 2),)))


def test_kernel_elements():
    t = OrderedForest(4, ((1, 2), (2, 3), (3, 4)))
    k = top_kernel_element(t)
    assert k.degree == 2 and sorted(k.terms.values()) == [-1, 1, 1]
    d = shared_vertex_difference(OrderedForest(4, ((1, 2), (1, 3))))
    assert d.degree == 1 and len(d.terms) == 2
    with pytest.raises(ValueError):
        shared_vertex_difference(OrderedForest(4, ((1, 2), (3, 4))))


@pytest.mark.parametrize("r,dims", [(0.2, (0, 0, 0, 0)), (0.3, (0, 0, 6, 6)), (0.4, (0, 5, 11, 6)),
                                    (0.5, (1, 6, 11, 6))])
def test_ladder(r, dims):
    assert kernel_ladder_n4(r) == dims


def test_ladder_monotone():
    prev = (0, 0, 0, 0)
    for r in [0.1 * k for k in range(1, 11)]:
        cur = kernel_ladder_n4(r)
        assert all(c >= p for c, p in zip(cur, prev))
        prev = cur


def test_top_degree_kernel_is_everything():
    # at large radius the top kernel is all of H^3, which has rank 6
    assert rank_of_classes(CohomClass.basis(g) for g in enumerate_forests(4, 3)) == 6


int_matrices = st.integers(1, 5).flatmap(
    lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k))


@given(int_matrices)
def test_bareiss_matches_sympy(m):
    assert bareiss_det(m) == sympy.Matrix(m).det()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_matches_sympy(m):
    assert integer_rank(m) == sympy.Matrix(m).rank()


def test_solve_rational():
    m = [[2, 1], [1, 3]]
    x = solve_rational(m, [3, 5])
    assert x == [sympy.Rational(4, 5), sympy.Rational(7, 5)]
    with pytest.raises(ZeroDivisionError):
        solve_rational([[1, 2], [2, 4]], [1, 2])
