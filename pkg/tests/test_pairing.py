import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from diskconf.forests import OrderedForest, enumerate_forests
from diskconf.pairing import (PairingMatrix, Permutation, dual_basis_matrix, dual_expansion, dual_expansion_by_solve,
                              pair_expansion, pairing_forest_qn, pairing_hhat, permutations_fixing_one)


def test_permutation_basics():
    s = Permutation((2, 3, 1))
    assert s(1) == 2 and s.inverse()(2) == 1
    assert s.compose(s.inverse()) == Permutation.identity(3)
    assert s.sign() == 1 and Permutation((2, 1, 3)).sign() == -1
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


@given(st.permutations(list(range(1, 7))))
def test_sign_matches_sympy(images):
    p = sympy.combinatorics.Permutation([i - 1 for i in images])
    assert Permutation(tuple(images)).sign() == p.signature()


def _brute_pairing(g, sigma):
    # direct reading of the definition: the forest pairs to sign(sigma) exactly
    # when sigma keeps every edge increasing
    ok = all(sigma.images[i - 1] < sigma.images[j - 1] for i, j in g.edges)
    return sigma.sign() if ok else 0


@pytest.mark.parametrize("n", [3, 4])
def test_pairing_matches_definition(n):
    for g in enumerate_forests(n, n - 1):
        for s in permutations_fixing_one(n):
            assert pairing_forest_qn(g, s) == _brute_pairing(g, s)


@pytest.mark.parametrize("n", range(2, 7))
def test_matrix_unimodular_against_sympy(n):
    m = dual_basis_matrix(n)
    assert m.size == sympy.factorial(n - 1)
    d = m.det()
    assert abs(d) == 1
    if n <= 5:
        assert d == sympy.Matrix(m.entries).det()


def test_matrix_size_cap():
    with pytest.raises(OverflowError):
        dual_basis_matrix(8)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_dual_expansion_is_dual(n):
    rows = enumerate_forests(n, n - 1)
    for g in rows:
        coeffs = dual_expansion(g)
        assert [pair_expansion(h, coeffs) for h in rows] == [int(h == g) for h in rows]


@pytest.mark.parametrize("n", [3, 4])
def test_recursion_matches_linear_solve(n):
    for g in enumerate_forests(n, n - 1):
        assert dual_expansion(g) == dual_expansion_by_solve(g)


def test_matrix_serialisation(tmp_path):
    m = dual_basis_matrix(4)
    again = PairingMatrix.from_json(m.to_json())
    assert again.rows == m.rows and again.entries == m.entries
    lines = m.to_csv().strip().splitlines()
    assert len(lines) == 7


def test_hhat_pairing_values():
    # only forests containing the edge a -> b see the swap, with sign set by its position
    for g in enumerate_forests(4, 2):
        for a, b in itertools.combinations(range(1, 5), 2):
            v = pairing_hhat(g, a, b)
            if (a, b) not in g.edges:
                assert v == 0
            else:
                assert v == (1 if g.edges[1] == (a, b) else -1)
    with pytest.raises(ValueError):
        pairing_hhat(enumerate_forests(4, 3)[0], 1, 2)
