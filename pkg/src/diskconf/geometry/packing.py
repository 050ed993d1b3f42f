"""Greedy incremental packing of disks with descending radii.

Disk k goes into free space inside the current enclosing circle when a
candidate spot exists.  Otherwise it is placed tangent to the outside of the
enclosing circle and the layout is recentred on a new enclosing circle, whose
radius is at most R + r_k <= 2R.  That growth rate is what the covering
argument needs for R^2 <= 36 * sum r_i^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

_GRID_CAP = 4000
_CIRCLE_SAMPLES = 48


@dataclass
class PackedLayout:
    radii: np.ndarray
    centers: np.ndarray
    R: float

    def overlaps(self, tol: float = 1e-9) -> list[tuple[int, int]]:
        out = []
        k = len(self.radii)
        for i in range(k):
            d = np.linalg.norm(self.centers[i + 1:] - self.centers[i], axis=1)
            for j in np.nonzero(d < self.radii[i + 1:] + self.radii[i] - tol)[0]:
                out.append((i, i + 1 + int(j)))
        return out

    def contained(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.linalg.norm(self.centers, axis=1) + self.radii <= self.R + tol))

    def bound_holds(self) -> bool:
        return self.R ** 2 <= 36.0 * float(np.sum(self.radii ** 2)) + 1e-12

    def check(self, tol: float = 1e-9) -> bool:
        return not self.overlaps(tol) and self.contained(tol) and self.bound_holds()

    def to_json(self) -> dict:
        return {
            "radii": [float(r) for r in self.radii],
            "centers": [[float(x), float(y)] for x, y in self.centers],
            "R": float(self.R),
        }


def _circle_intersections(c1, r1, c2, r2):
    d = float(np.linalg.norm(c2 - c1))
    if d == 0.0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = np.sqrt(max(r1 * r1 - a * a, 0.0))
    e = (c2 - c1) / d
    base = c1 + a * e
    perp = np.array([-e[1], e[0]])
    return [base + h * perp, base - h * perp]


def _candidates(centers, radii, rk, R):
    """Tangency candidates for a disk of radius rk inside the circle of radius R."""
    inner = R - rk
    pts = [np.zeros(2)]
    offsets = radii + rk
    ring = np.linspace(0.0, 2 * np.pi, _CIRCLE_SAMPLES, endpoint=False)
    ring = np.stack([np.cos(ring), np.sin(ring)], axis=1)
    origin = np.zeros(2)
    for i, (c, s) in enumerate(zip(centers, offsets)):
        pts.extend(_circle_intersections(c, s, origin, inner))
        pts.extend(c + s * ring)
        for j in range(i):
            pts.extend(_circle_intersections(c, s, centers[j], offsets[j]))
    step = max(rk / 4.0, 2 * inner / np.sqrt(_GRID_CAP))
    g = np.arange(-inner, inner + step / 2, step)
    gx, gy = np.meshgrid(g, g)
    pts.extend(np.stack([gx.ravel(), gy.ravel()], axis=1))
    return np.array(pts)


def _enclosing_radius(centers, radii, z):
    return float(np.max(np.linalg.norm(centers - z, axis=1) + radii))


def smallest_enclosing_circle(centers, radii) -> tuple[np.ndarray, float]:
    """Smallest circle containing the given disks (epigraph form, SLSQP)."""
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    z0 = centers.mean(axis=0)
    x0 = np.array([z0[0], z0[1], _enclosing_radius(centers, radii, z0)])

    def cons(x):
        return x[2] - np.linalg.norm(centers - x[:2], axis=1) - radii

    def cons_jac(x):
        d = x[:2] - centers
        nd = np.linalg.norm(d, axis=1)
        nd[nd == 0] = 1.0
        jac = np.empty((len(centers), 3))
        jac[:, :2] = -d / nd[:, None]
        jac[:, 2] = 1.0
        return jac

    res = minimize(lambda x: x[2], x0, jac=lambda x: np.array([0.0, 0.0, 1.0]), method="SLSQP",
                   constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                   options={"ftol": 1e-14, "maxiter": 200})
    z = res.x[:2] if np.all(np.isfinite(res.x)) else z0
    zr = _enclosing_radius(centers, radii, z)
    r0 = _enclosing_radius(centers, radii, z0)
    return (z, zr) if zr <= r0 else (z0, r0)


def pack_disks(radii, tol: float = 1e-12) -> PackedLayout:
    r = np.asarray(radii, dtype=float).reshape(-1)
    if len(r) == 0:
        raise ValueError("need at least one radius")
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    if np.any(np.diff(r) > 0):
        raise ValueError("radii must be sorted in descending order")
    centers = np.zeros((1, 2))
    R = float(r[0])
    for k in range(1, len(r)):
        rk = r[k]
        placed = centers
        cand = _candidates(placed, r[:k], rk, R)
        fits = np.linalg.norm(cand, axis=1) + rk <= R + tol
        gaps = np.linalg.norm(cand[:, None, :] - placed[None, :, :], axis=2) - (r[:k] + rk)
        fits &= gaps.min(axis=1) >= -tol
        if fits.any():
            good = cand[fits]
            pick = good[np.argmin(np.linalg.norm(good, axis=1))]
            centers = np.vstack([centers, pick])
            continue
        # no room inside: take the clear spot nearest the origin, recentre on
        # the smallest enclosing circle, and keep it only if it beats the
        # tangent-outside placement (which gives exactly R + rk)
        clear = cand[gaps.min(axis=1) >= -tol]
        u = np.array([1.0, 0.0])
        fallback = (R + rk, np.vstack([centers, (R + rk) * u]) - rk * u)
        best = fallback
        if len(clear):
            p = clear[np.argmin(np.linalg.norm(clear, axis=1))]
            trial = np.vstack([centers, p])
            z, newR = smallest_enclosing_circle(trial, r[:k + 1])
            if newR < best[0]:
                best = (newR, trial - z)
        R, centers = best
    return PackedLayout(r, centers, R)
