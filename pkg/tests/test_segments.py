import math

import numpy as np
import pytest

from diskconf.geometry import SegConfig, seg_tau
from diskconf.segments import (PoseGrid, TrapParams, _blocked, collinear_fits, collinear_obstruction,
                               hourglass_params, max_perpendicular_length, midpoint_box_sets,
                               perpendicular_fits, radial_surjectivity_demo, trap_certify)


# ---- perpendicular pair ----

def test_perpendicular_threshold():
    L = max_perpendicular_length(1e-6)
    assert abs(L - 1.6) <= 1e-6


def test_perpendicular_fits_monotone():
    assert perpendicular_fits(1.5)
    assert not perpendicular_fits(1.7)


def test_explicit_perpendicular_pair():
    # horizontal chord low in the disk plus a vertical segment above it
    L = 1.59
    h = L / 2
    y = -math.sqrt(1 - h * h)
    c = SegConfig(np.array([[0.0, y], [0.0, y + 1e-3 + L / 2]]), np.array([0.0, 0.25]), L)
    assert c.is_valid()
    assert not SegConfig(c.centers, c.angles, 1.61).is_valid()


# ---- hourglass parameters ----

@pytest.mark.parametrize("r,delta", [(1.5, 0.2), (1.1, 0.05), (1.9, 1.0), (1.01, 0.5)])
def test_hourglass_inequalities(r, delta):
    p = hourglass_params(r, delta)
    q = p.a / p.b
    assert 2 * q < delta / 2
    assert 2 * math.sqrt(q * q + 1) < 2 * r
    assert math.hypot(p.a + q, p.b + 1) < r
    assert 0 < p.b < 1


def test_hourglass_rejects():
    with pytest.raises(ValueError):
        hourglass_params(1.0, 0.1)
    with pytest.raises(ValueError):
        hourglass_params(1.5, 0.0)


def test_obstacle_points():
    p = TrapParams(0.1, 0.5, 1.5, 0.2)
    pts = p.points(-0.35, 0.35)
    assert sorted(set(np.round(pts[:, 0], 12))) == [-0.3, -0.1, 0.1, 0.3]
    assert set(pts[:, 1]) == {0.5, -0.5}


# ---- swept-region collision test against exact point membership ----

def _exact(params, cx, cy, th, move, half, k=80):
    ks = np.arange(-k, k)
    ox = np.concatenate([(2 * ks + 1) * params.a] * 2)
    oy = np.concatenate([np.full(len(ks), params.b), np.full(len(ks), -params.b)])
    rx = ox[None] - cx[:, None]
    ry = oy[None] - cy[:, None]
    if move[0] == "rot":
        off = np.mod(np.arctan2(ry, rx) - th[:, None], math.pi)
        return ((np.hypot(rx, ry) <= half) & (off <= move[1])).any(1)
    mx, my = move
    ux, uy = np.cos(th)[:, None], np.sin(th)[:, None]
    det = ux * my - uy * mx
    s = (rx * my - ry * mx) / det
    t = (ux * ry - uy * rx) / det
    return ((np.abs(s) <= half) & (t >= 0) & (t <= 1)).any(1)


@pytest.mark.parametrize("move", [(0.005, 0.0), (-0.005, 0.0), (0.0, 0.005), (0.0, -0.005),
                                  ("rot", math.radians(1.0)), ("rot", math.radians(3.0))])
def test_sweep_test_is_exact(move, rng):
    p = hourglass_params(1.5, 0.2)
    n = 5000
    cx = rng.uniform(-0.1, 0.1, n)
    cy = rng.uniform(-0.6, 0.6, n)
    th = rng.uniform(0.05, math.pi - 0.05, n)
    got = _blocked(p, cx, cy, th, move, 0.75)
    want = _exact(p, cx, cy, th, move, 0.75)
    assert got.sum() > 50
    assert np.array_equal(got, want)


# ---- trap certification ----

def test_trap_certified():
    p = hourglass_params(1.5, 0.2)
    cert = trap_certify(p, PoseGrid())
    assert cert.certified
    assert not cert.reached_horizontal
    assert cert.x_extent[1] - cert.x_extent[0] < 0.2
    assert cert.reached > 100


def test_no_obstacles_escapes():
    p = hourglass_params(1.5, 0.2)
    cert = trap_certify(p, PoseGrid(), with_obstacles=False)
    assert cert.reached_horizontal and not cert.certified


def test_coarse_grid_insufficient():
    p = hourglass_params(1.5, 0.1)
    cert = trap_certify(p, PoseGrid(dx=0.005))
    assert cert.status == "insufficient" and not cert.certified


def test_wrong_width_not_certified():
    # parameters chosen for a wide strip fail the width check for a narrow one
    p = hourglass_params(1.5, 0.4)
    cert = trap_certify(p, PoseGrid(dx=0.005), delta=0.05)
    assert not cert.params_ok and not cert.certified


def test_midpoint_box_without_certification():
    m = midpoint_box_sets(0.1, certify=False)
    assert [s.name for s in m.strips] == ["middle", "upper", "lower"]
    assert m.eps1 == pytest.approx(0.1 / 3) and m.eps2 == pytest.approx(0.2 / 3)
    assert len(m.points) > 0
    assert np.hypot(m.points[:, 0], m.points[:, 1]).max() < 1
    for s in m.strips:
        h = (s.y_high - s.y_low) / 2
        assert h < s.r < 1
        assert s.params.ok()
    with pytest.raises(ValueError):
        midpoint_box_sets(0.3)


# ---- small pieces ----

def test_radial_demo():
    c = radial_surjectivity_demo([0.0, 0.3, 0.6], 0.5)
    assert c.is_valid()
    with pytest.raises(ValueError):
        radial_surjectivity_demo([0.1, 1.1], 0.5)


def test_collinear():
    for k in range(1, 6):
        r = collinear_obstruction(k)
        assert collinear_fits(k, r) and not collinear_fits(k, r * 1.001)
