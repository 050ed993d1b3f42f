"""Disk and segment configurations in the closed unit disk.

Angles are measured in turns (R/Z), so ``unit(theta)`` is the point at
``2*pi*theta`` radians on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def unit(theta):
    """Unit vector(s) at angle ``theta`` (turns); trailing axis of length 2."""
    t = 2.0 * np.pi * np.asarray(theta, dtype=float)
    return np.stack([np.cos(t), np.sin(t)], axis=-1)


def angle_of(v) -> np.ndarray:
    """Angle of vector(s) in turns, in [0, 1)."""
    v = np.asarray(v, dtype=float)
    return np.mod(np.arctan2(v[..., 1], v[..., 0]) / (2.0 * np.pi), 1.0)


def rotate(points, theta):
    c, s = math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta)
    p = np.asarray(points, dtype=float)
    return np.stack([c * p[..., 0] - s * p[..., 1], s * p[..., 0] + c * p[..., 1]], axis=-1)


def _pair_distances(centers: np.ndarray) -> np.ndarray:
    diff = centers[:, None, :] - centers[None, :, :]
    return np.sqrt((diff ** 2).sum(-1))


def tau(centers) -> float:
    """Largest radius for which disks about ``centers`` are disjoint and inside the unit disk."""
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    if len(c) == 0:
        raise ValueError("need at least one center")
    best = float((1.0 - np.hypot(c[:, 0], c[:, 1])).min())
    if len(c) > 1:
        d = _pair_distances(c)[np.triu_indices(len(c), 1)]
        if d.min() == 0.0:
            raise ValueError("coincident centers")
        best = min(best, float(d.min()) / 2.0)
    return best


@dataclass
class DiskConfig:
    """Labeled disk centers with a common radius.

    ``angles`` optionally records the parameter angle attached to an item
    (item index -> turns) by the construction that produced the config.
    """

    centers: np.ndarray
    radius: float
    angles: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        self.radius = float(self.radius)
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.centers)

    def violations(self, tol: float = DEFAULT_TOL) -> list[str]:
        out = []
        r = self.radius
        norms = np.hypot(self.centers[:, 0], self.centers[:, 1])
        for i in np.nonzero(norms > 1.0 - r + tol)[0]:
            out.append(f"disk {i + 1} leaves the unit disk by {norms[i] - (1 - r):.3g}")
        if self.n > 1:
            d = _pair_distances(self.centers)
            iu, ju = np.triu_indices(self.n, 1)
            bad = d[iu, ju] < 2 * r - tol
            for i, j in zip(iu[bad], ju[bad]):
                out.append(f"disks {i + 1} and {j + 1} overlap by {2 * r - d[i, j]:.3g}")
        return out

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return not self.violations(tol)

    def tau(self) -> float:
        return tau(self.centers)

    def to_json(self) -> dict:
        return {
            "kind": "disk",
            "radius_or_length": self.radius,
            "items": [
                {"center": [float(x), float(y)], "angle": self.angles.get(i)}
                for i, (x, y) in enumerate(self.centers)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiskConfig":
        if data.get("kind") != "disk":
            raise ValueError("not a disk configuration")
        items = data["items"]
        angles = {i: float(it["angle"]) for i, it in enumerate(items) if it.get("angle") is not None}
        return cls(np.array([it["center"] for it in items], dtype=float), float(data["radius_or_length"]), angles)


# ---- segments ----

def segment_distance(p1, q1, p2, q2) -> np.ndarray:
    """Distance between segments [p1, q1] and [p2, q2], broadcasting over leading axes."""
    p1, q1, p2, q2 = (np.asarray(a, dtype=float) for a in (p1, q1, p2, q2))
    d1 = q1 - p1
    d2 = q2 - p2

    def point_seg(p, a, d):
        dd = (d * d).sum(-1)
        t = np.where(dd > 0, ((p - a) * d).sum(-1) / np.where(dd > 0, dd, 1.0), 0.0)
        t = np.clip(t, 0.0, 1.0)
        return np.linalg.norm(p - (a + t[..., None] * d), axis=-1)

    best = np.minimum.reduce([
        point_seg(p1, p2, d2), point_seg(q1, p2, d2),
        point_seg(p2, p1, d1), point_seg(q2, p1, d1),
    ])

    def cross(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    # proper crossings have distance zero
    o1 = cross(d1, p2 - p1)
    o2 = cross(d1, q2 - p1)
    o3 = cross(d2, p1 - p2)
    o4 = cross(d2, q1 - p2)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    return np.where(crossing, 0.0, best)


def _contained_half_length(centers, dirs) -> np.ndarray:
    """Largest half-length t with center +- t*dir inside the closed unit disk."""
    cu = (centers * dirs).sum(-1)
    cc = (centers * centers).sum(-1)
    disc = np.maximum(cu * cu + 1.0 - cc, 0.0)
    return np.sqrt(disc) - np.abs(cu)


@dataclass
class SegConfig:
    """Labeled segments of common length; directions stored as angles in turns."""

    centers: np.ndarray
    angles: np.ndarray
    length: float

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        self.angles = np.asarray(self.angles, dtype=float).reshape(-1)
        self.length = float(self.length)
        if len(self.angles) != len(self.centers):
            raise ValueError("need one angle per center")
        if self.length < 0:
            raise ValueError("length must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def directions(self) -> np.ndarray:
        return unit(self.angles)

    def endpoints(self, shrink: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        h = max(self.length / 2.0 - shrink, 0.0)
        d = self.directions
        return self.centers - h * d, self.centers + h * d

    def violations(self, tol: float = DEFAULT_TOL) -> list[str]:
        out = []
        room = _contained_half_length(self.centers, self.directions)
        for i in np.nonzero(room < self.length / 2.0 - tol)[0]:
            out.append(f"segment {i + 1} leaves the unit disk")
        if self.n > 1:
            # touching at an endpoint is allowed up to tol, crossing is not
            a, b = self.endpoints(shrink=tol)
            iu, ju = np.triu_indices(self.n, 1)
            dist = segment_distance(a[iu], b[iu], a[ju], b[ju])
            for i, j in zip(iu[dist <= 0.0], ju[dist <= 0.0]):
                out.append(f"segments {i + 1} and {j + 1} intersect")
        return out

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return not self.violations(tol)

    def to_json(self) -> dict:
        return {
            "kind": "segment",
            "radius_or_length": self.length,
            "items": [
                {"center": [float(x), float(y)], "angle": float(t)}
                for (x, y), t in zip(self.centers, self.angles)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SegConfig":
        if data.get("kind") != "segment":
            raise ValueError("not a segment configuration")
        items = data["items"]
        return cls(
            np.array([it["center"] for it in items], dtype=float),
            np.array([it["angle"] for it in items], dtype=float),
            float(data["radius_or_length"]),
        )


def _segments_fit(centers, dirs, length) -> bool:
    h = length / 2.0
    if np.any(_contained_half_length(centers, dirs) < h):
        return False
    n = len(centers)
    if n < 2:
        return True
    iu, ju = np.triu_indices(n, 1)
    a, b = centers - h * dirs, centers + h * dirs
    return bool(np.all(segment_distance(a[iu], b[iu], a[ju], b[ju]) > 0.0))


def seg_tau(centers, angles, tol: float = 1e-9) -> float:
    """Supremal common length for which the segments are disjoint and inside the unit disk."""
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    dirs = unit(np.asarray(angles, dtype=float).reshape(-1))
    lo, hi = 0.0, 2.0
    if not _segments_fit(c, dirs, 0.0):
        return 0.0
    if _segments_fit(c, dirs, hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _segments_fit(c, dirs, mid):
            lo = mid
        else:
            hi = mid
    return lo


def config_from_json(data: Mapping):
    kind = data.get("kind")
    if kind == "disk":
        return DiskConfig.from_json(data)
    if kind == "segment":
        return SegConfig.from_json(data)
    raise ValueError(f"unknown configuration kind {kind!r}")


def tau_batch(centers) -> np.ndarray:
    """tau for a batch of center arrays (N, n, 2)."""
    c = np.asarray(centers, dtype=float)
    best = (1.0 - np.sqrt((c ** 2).sum(-1))).min(-1)
    n = c.shape[1]
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        d = np.sqrt(((c[:, iu] - c[:, ju]) ** 2).sum(-1)).min(-1)
        best = np.minimum(best, d / 2)
    return best


def segments_valid_batch(centers, angles, length: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """SegConfig.is_valid for a batch (N, n, 2) / (N, n)."""
    c = np.asarray(centers, dtype=float)
    dirs = unit(np.asarray(angles, dtype=float))
    ok = np.all(_contained_half_length(c, dirs) >= length / 2.0 - tol, axis=1)
    n = c.shape[1]
    if n > 1:
        h = max(length / 2.0 - tol, 0.0)
        a, b = c - h * dirs, c + h * dirs
        iu, ju = np.triu_indices(n, 1)
        dist = segment_distance(a[:, iu], b[:, iu], a[:, ju], b[:, ju])
        ok &= np.all(dist > 0.0, axis=1)
    return ok
