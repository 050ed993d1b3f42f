import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.distance import pdist

from diskconf.geometry import (DiskConfig, SegConfig, angle_of, build_hhat, build_kn, build_kn_batch,
                               build_matching_family, build_qn, build_qn_batch, config_from_json, d_exact,
                               d_value, ell, ell_exact, embed_scaled, half_inclusion, pack_disks, rotate,
                               seg_tau, segment_distance, segments_valid_batch, tau, tau_batch)
from diskconf.geometry.constructions import (bound_calculators, matching_angles, partition_inclusion, qn_angles)
from diskconf.geometry.packing import smallest_enclosing_circle

angles = st.floats(0.0, 1.0, allow_nan=False, exclude_max=True)


# ---- sequences ----

def test_d_and_ell_values():
    assert d_value(1) == 2.0
    assert d_value(3) == pytest.approx(2.9)
    assert ell(3) == pytest.approx(40 / 29)
    assert d_exact(3) == Fraction(29, 10)
    assert ell_exact(2) == Fraction(8, 5)


def test_ell_floor_sequence_against_exact():
    for n in range(1, 12):
        assert ell(n) == pytest.approx(float(ell_exact(n)), rel=1e-14)
        # d_n^2 grows by at least 2 each step
        assert float(d_exact(n)) ** 2 >= 4 + 2 * (n - 1) - 1e-12


# ---- tau and configurations ----

def test_tau_against_pdist(rng):
    for n in (2, 3, 5):
        c = rng.uniform(-0.6, 0.6, (n, 2))
        expected = min(pdist(c).min() / 2, (1 - np.linalg.norm(c, axis=1)).min())
        assert tau(c) == pytest.approx(expected, abs=1e-15)
        assert tau_batch(c[None])[0] == pytest.approx(expected, abs=1e-15)


def test_tau_rejects_coincident():
    with pytest.raises(ValueError):
        tau([[0.1, 0.0], [0.1, 0.0]])


def test_disk_config_validity_and_json():
    c = DiskConfig(np.array([[-0.5, 0.0], [0.5, 0.0]]), 0.5, {1: 0.25})
    assert c.is_valid()
    again = config_from_json(c.to_json())
    assert np.array_equal(again.centers, c.centers) and again.radius == c.radius and again.angles == c.angles
    bad = DiskConfig(np.array([[-0.4, 0.0], [0.4, 0.0]]), 0.5)
    assert not bad.is_valid() and bad.violations()


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_segment_distance_against_sampling(x1, y1, x2, y2):
    p1, q1 = np.array([0.0, 0.0]), np.array([1.0, 0.0])
    p2, q2 = np.array([x1, y1]), np.array([x2, y2])
    t = np.linspace(0, 1, 801)
    a = p1 + t[:, None] * (q1 - p1)
    b = p2 + t[:, None] * (q2 - p2)
    sampled = np.min(np.linalg.norm(a[:, None] - b[None], axis=2))
    d = float(segment_distance(p1, q1, p2, q2))
    assert d <= sampled + 1e-12
    assert d >= sampled - 2.5e-3


def test_seg_tau_simple():
    # one segment through the origin fits up to length 2
    assert seg_tau(np.zeros((1, 2)), [0.0]) == pytest.approx(2.0, abs=1e-8)


# ---- k_n ----

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_kn_valid_on_random_angles(n, rng):
    th = rng.uniform(0, 1, (300, n))
    centers, L = build_kn_batch(th)
    assert L == pytest.approx(ell(n))
    assert segments_valid_batch(centers, th, L).all()


def test_kn_is_tight():
    c = build_kn([0.1, 0.35])
    assert seg_tau(c.centers, c.angles) == pytest.approx(ell(2), abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.lists(angles, min_size=1, max_size=4))
def test_kn_property(th):
    c = build_kn(th)
    assert c.is_valid()
    np.testing.assert_allclose(c.directions, np.stack([np.cos(2 * np.pi * np.array(th)),
                                                       np.sin(2 * np.pi * np.array(th))], 1), atol=1e-12)


# ---- q_n ----

@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_qn_tau_exact(n, rng):
    th = rng.uniform(0, 1, (500, n - 1))
    c = build_qn_batch(th)
    t = tau_batch(c)
    assert np.abs(t - 1.0 / n).max() < 1e-12
    assert np.abs(np.mod(qn_angles(c) - th + 0.5, 1) - 0.5).max() < 1e-12


def test_qn_edge_angles():
    c = build_qn([0.1, 0.6])
    # disk k sits on the ray of its angle relative to the medium disk holding 1..k-1
    assert angle_of(c.centers[2] - (-(1 / 3) * np.array([math.cos(1.2 * math.pi), math.sin(1.2 * math.pi)]))) \
        == pytest.approx(0.6)
    assert c.angles == {1: 0.1, 2: 0.6}


# ---- matching and swap families ----

@pytest.mark.parametrize("j,r", [(1, 0.5), (2, 0.25), (3, 0.2)])
def test_matching_family(j, r, rng):
    for _ in range(50):
        th = rng.uniform(0, 1, j)
        c = build_matching_family(j, r, th)
        assert c.is_valid()
        assert np.abs(np.mod(matching_angles(c) - th + 0.5, 1) - 0.5).max() < 1e-12


def test_matching_too_big():
    with pytest.raises(ValueError):
        build_matching_family(3, 0.3, [0, 0, 0])


@pytest.mark.parametrize("a,b", list(itertools.combinations(range(1, 5), 2)))
def test_hhat_valid(a, b):
    g = np.linspace(0, 1, 24, endpoint=False)
    worst = min(tau(build_hhat(a, b, t1, t2).centers) for t1 in g for t2 in g)
    assert worst >= 1 / 3 - 1e-12
    c = build_hhat(a, b, 0.2, 0.7)
    v = c.centers[b - 1] - c.centers[a - 1]
    assert angle_of(v) == pytest.approx(0.7, abs=1e-12)


# ---- embeddings ----

def test_half_inclusion():
    x = build_qn([0.3])
    y = build_qn([0.8])
    c = half_inclusion(x, y, [1, 3], 4)
    assert c.radius == pytest.approx(0.25) and c.is_valid()
    np.testing.assert_allclose(c.centers[0], np.array([-0.5, 0]) + 0.5 * x.centers[0])
    np.testing.assert_allclose(c.centers[1], np.array([0.5, 0]) + 0.5 * y.centers[0])


def test_embed_rejects_bad_input():
    x = build_qn([0.3])
    with pytest.raises(ValueError):
        embed_scaled(x, (0.8, 0), 0.5, [1, 2])
    with pytest.raises(ValueError):
        embed_scaled(x, (0, 0), 0.5, [1, 1])


def test_partition_inclusion():
    parts = [build_qn([0.1, 0.2]), build_qn([0.4])]
    c = partition_inclusion(parts, [[1, 3, 5], [2, 4]], 0.2)
    assert c.n == 5 and c.radius == pytest.approx(0.2)
    assert c.is_valid()


def test_bound_calculators():
    b = bound_calculators((3, 2))
    assert b["r_min_lower"] == pytest.approx(1 / math.sqrt(13))
    assert b["r_max_upper"] == pytest.approx(min(1 / 3, 1 / math.sqrt(5)))
    assert b["r_min_lower"] <= b["r_max_upper"]
    assert bound_calculators(()) ["r_min_lower"] == math.inf


# ---- packing ----

def test_pack_equal_triples():
    lay = pack_disks([1.0, 1.0, 1.0])
    assert lay.R == pytest.approx(1 + 2 / math.sqrt(3), abs=1e-6)
    assert lay.check() and lay.bound_holds()


def test_pack_validates():
    with pytest.raises(ValueError):
        pack_disks([0.5, 1.0])
    with pytest.raises(ValueError):
        pack_disks([1.0, -0.1])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.05, 1.0), min_size=1, max_size=6))
def test_pack_property(radii):
    radii = sorted(radii, reverse=True)
    lay = pack_disks(radii)
    assert lay.check()
    assert lay.R ** 2 <= 2 * sum(r * r for r in radii) + 1e-9


def test_enclosing_circle_against_brute_force(rng):
    centers = rng.uniform(-1, 1, (5, 2))
    radii = rng.uniform(0.05, 0.3, 5)
    z, R = smallest_enclosing_circle(centers, radii)
    gx = np.linspace(-1.5, 1.5, 301)
    pts = np.stack(np.meshgrid(gx, gx), -1).reshape(-1, 2)
    brute = (np.linalg.norm(pts[:, None] - centers[None], axis=2) + radii).max(1).min()
    assert R <= brute + 1e-9
    assert R >= brute - 0.011
