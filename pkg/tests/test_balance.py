import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diskconf.balance import (StressGraph, check_config, classify_small_radius, contact_graph, diameter_config,
                              enclosing_ball_of_tree, equilibrium_matrix, is_balanced, is_diameter,
                              search_balanced, square_config, tree_length)
from diskconf.geometry import DiskConfig


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_diameter_is_balanced(n):
    g, res = check_config(diameter_config(n, 0.13))
    assert res.balanced
    assert len(g.pairs) == n - 1 and len(g.boundary) == 2
    assert all(w >= 1 - 1e-9 for w in res.weights)


def test_square_is_balanced():
    g, res = check_config(square_config())
    assert res.balanced and len(g.pairs) == 4 and len(g.boundary) == 4


def test_loose_config_not_balanced():
    c = DiskConfig(np.array([[-0.3, 0.0], [0.3, 0.0]]), 0.2)
    g, res = check_config(c)
    assert g.num_edges == 0 and not res.balanced


def test_one_sided_contact_not_balanced():
    # a disk resting on the wall alone cannot be in equilibrium
    c = DiskConfig(np.array([[0.7, 0.0], [-0.2, 0.0]]), 0.3)
    g, res = check_config(c)
    assert g.boundary == [0] and not res.balanced


def test_equilibrium_matrix_against_hand_computation():
    c = diameter_config(2)
    g = contact_graph(c)
    A = equilibrium_matrix(g)
    # columns: pair (1,2), wall at disk 1, wall at disk 2
    assert A.shape == (4 + 2, 3)
    w = np.ones(3)
    assert np.abs(A @ w).max() < 1e-12
    np.testing.assert_allclose(A[:2, 0], [-1, 0])


def test_residual_tolerance():
    c = diameter_config(3)
    c.centers[1, 1] += 1e-4           # break the collinearity but keep contacts
    g = contact_graph(c, tol=1e-3)
    assert not is_balanced(g).balanced


def test_search_finds_reference_configs():
    hits = search_balanced(3, 1 / 3, trials=200, seed=0)
    assert hits and all(is_diameter(h) for h in hits)
    sq = search_balanced(4, 1 / (1 + math.sqrt(2)), trials=300, seed=0)
    assert sq and all(check_config(h)[1].balanced for h in sq)


@pytest.mark.parametrize("n", [3, 4])
def test_search_empty_below_threshold(n):
    assert search_balanced(n, 1 / n - 0.01, trials=500, seed=1) == []


def test_classification():
    rep = classify_small_radius(3, [diameter_config(3), square_config()])
    assert rep[0]["label"] == "diameter"
    assert rep[1]["label"] == "above threshold"
    fake = DiskConfig(np.array([[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]]), 0.2)
    assert classify_small_radius(3, [fake])[0]["violation"]


points = st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(points, st.randoms(use_true_random=False))
def test_tree_ball(pts, rnd):
    k = len(pts)
    edges = [(i, rnd.randrange(i)) for i in range(1, k)]
    c, R = enclosing_ball_of_tree(pts, edges)
    assert R <= tree_length(pts, edges) / 2 + 1e-9
    # every point of every edge lies in the ball
    p = np.asarray(pts, dtype=float)
    t = np.linspace(0, 1, 11)[:, None]
    for i, j in edges:
        seg = p[i] + t * (p[j] - p[i])
        assert np.linalg.norm(seg - c, axis=1).max() <= R + 1e-9
    if not edges:
        assert R == 0


def test_tree_ball_rejects_non_tree():
    with pytest.raises(ValueError):
        enclosing_ball_of_tree([[0, 0], [1, 0], [2, 0]], [(0, 1)])
