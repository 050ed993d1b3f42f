import itertools

import numpy as np
import pytest

from diskconf.degree import ResolutionError, constant_family, edge_angles, numeric_degree_oracle, qn_family
from diskconf.forests import OrderedForest, enumerate_forests
from diskconf.geometry.constructions import hhat_family
from diskconf.pairing import Permutation, pairing_forest_qn, pairing_hhat, permutations_fixing_one


def _spin(direction):
    # disk 2 circles disk 1 at the given winding number
    def f(thetas):
        t = np.asarray(thetas, dtype=float).reshape(-1)
        c = np.zeros((len(t), 2, 2))
        c[:, 0] = [-0.3, 0.0]
        c[:, 1, 0] = -0.3 + 0.5 * np.cos(2 * np.pi * direction * t)
        c[:, 1, 1] = 0.5 * np.sin(2 * np.pi * direction * t)
        return c
    return f


@pytest.mark.parametrize("w", [1, -1, 2])
def test_winding_numbers(w):
    g = OrderedForest(2, ((1, 2),))
    assert numeric_degree_oracle(_spin(w), g, grid=64) == w


def test_constant_family_has_degree_zero():
    c = np.array([[0.0, 0.0], [0.5, 0.1], [-0.4, 0.3]])
    for g in enumerate_forests(3, 2):
        assert numeric_degree_oracle(constant_family(c), g, grid=8) == 0


def test_edge_angles_shape():
    c = np.array([[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]])
    a = edge_angles(c, OrderedForest(3, ((1, 2), (1, 3))))
    np.testing.assert_allclose(a, [[0.0, 0.25]])


def test_coarse_grid_is_refused():
    with pytest.raises(ResolutionError):
        numeric_degree_oracle(qn_family(3, None), enumerate_forests(3, 2)[0], grid=3)


def test_empty_forest_rejected():
    with pytest.raises(ValueError):
        numeric_degree_oracle(qn_family(3), OrderedForest(3), grid=8)


@pytest.mark.parametrize("n", [3, 4])
def test_oracle_matches_closed_form(n):
    for g in enumerate_forests(n, n - 1):
        for s in permutations_fixing_one(n):
            assert numeric_degree_oracle(qn_family(n, s), g, grid=24) == pairing_forest_qn(g, s)


def test_oracle_matches_swap_pairings():
    for g in enumerate_forests(4, 2):
        for a, b in itertools.combinations(range(1, 5), 2):
            got = numeric_degree_oracle(hhat_family(a, b), g, grid=32, check_centers=False)
            assert got == pairing_hhat(g, a, b)
