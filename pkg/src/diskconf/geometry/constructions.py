"""Recursive spinning families: k_n (segments), q_n (disks), the matching
family, the two-disk swap h_{a->b}, and scaled embeddings.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .configs import DiskConfig, SegConfig, angle_of, rotate, unit
from .packing import pack_disks


# ---- diameter and length sequences ----

def d_sequence(n: int) -> np.ndarray:
    """``d_1..d_n`` with d_1 = 2, d_k = d_{k-1} + 1/d_{k-1}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = np.empty(n)
    d = 2.0
    for k in range(n):
        out[k] = d
        d = d + 1.0 / d
    return out


def d_value(n: int) -> float:
    return float(d_sequence(n)[-1])


def ell(n: int) -> float:
    return 4.0 / d_value(n)


def d_exact(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be at least 1")
    d = Fraction(2)
    for _ in range(n - 1):
        d = d + 1 / d
    return d


def ell_exact(n: int) -> Fraction:
    return 4 / d_exact(n)


# ---- k_n ----

def build_kn_batch(angles) -> tuple[np.ndarray, float]:
    """Centers (N, n, 2) of k_n for a batch of angle tuples (N, n); returns (centers, length)."""
    th = np.atleast_2d(np.asarray(angles, dtype=float))
    N, n = th.shape
    if n < 1:
        raise ValueError("need at least one angle")
    lengths = 4.0 / d_sequence(n)
    centers = np.zeros((N, 1, 2))
    for k in range(1, n):
        rho = lengths[k] / lengths[k - 1]
        u = unit(th[:, k])
        v = np.stack([-u[:, 1], u[:, 0]], axis=1)  # left normal: the medium disk sits to the left
        med = (1.0 - rho) * v
        chord = (1.0 - 2.0 * rho) * v
        centers = np.concatenate([med[:, None, :] + rho * centers, chord[:, None, :]], axis=1)
    return centers, float(lengths[-1])


def build_kn(angles: Sequence[float]) -> SegConfig:
    th = np.asarray(angles, dtype=float).reshape(-1)
    centers, length = build_kn_batch(th[None, :])
    return SegConfig(centers[0], th.copy(), length)


# ---- q_n ----

def build_qn_batch(angles, n: int | None = None) -> np.ndarray:
    """Centers (N, n, 2) of q_n for angle tuples (N, n-1)."""
    th = np.asarray(angles, dtype=float)
    if th.ndim == 1:
        th = th[None, :]
    N, m = th.shape
    if n is not None and m != n - 1:
        raise ValueError(f"q_{n} takes {n - 1} angles")
    n = m + 1
    centers = np.zeros((N, 1, 2))
    for k in range(2, n + 1):
        u = unit(th[:, k - 2])
        s = (k - 1) / k
        med = -u / k
        centers = np.concatenate([med[:, None, :] + s * centers, (s * u)[:, None, :]], axis=1)
    return centers


def build_qn(angles: Sequence[float]) -> DiskConfig:
    th = [float(t) for t in angles]
    n = len(th) + 1
    centers = build_qn_batch(np.array(th).reshape(1, -1) if th else np.zeros((1, 0)))[0]
    return DiskConfig(centers, 1.0 / n, {k: th[k - 1] for k in range(1, n)})


def qn_angles(centers) -> np.ndarray:
    """Recover the q_n parameter angles from centers (n, 2) or a batch (N, n, 2)."""
    c = np.asarray(centers, dtype=float)
    single = c.ndim == 2
    c = c[None] if single else c.copy()
    N, n, _ = c.shape
    out = np.empty((N, n - 1))
    for k in range(n, 1, -1):
        s = (k - 1) / k
        u = c[:, k - 1] / s
        out[:, k - 2] = angle_of(u)
        med = -unit(out[:, k - 2]) / k
        c = (c[:, :k - 1] - med[:, None, :]) / s
    return out[0] if single else out


# ---- matching family ----

def _ring_layout(j: int, rad: float):
    if j == 1:
        return np.zeros((1, 2)), rad
    R = rad / math.sin(math.pi / j) + rad
    t = np.arange(j) / j
    return (R - rad) * unit(t), R


def matching_hosts(j: int, r: float) -> np.ndarray:
    """Centers of j disjoint medium disks of radius 2r inside the unit disk."""
    if j < 1 or r <= 0:
        raise ValueError("need j >= 1 and r > 0")
    layout = pack_disks([2.0 * r] * j)
    options = [(layout.R, layout.centers)]
    ring, R = _ring_layout(j, 2.0 * r)
    options.append((R, ring))
    R, centers = min(options, key=lambda o: o[0])
    if R > 1.0 + 1e-12:
        raise ValueError(f"{j} medium disks of radius {2 * r} do not fit in the unit disk")
    return centers


def build_matching_family(j: int, r: float, angles: Sequence[float], hosts=None) -> DiskConfig:
    th = [float(t) for t in angles]
    if len(th) != j:
        raise ValueError(f"need {j} angles")
    hosts = matching_hosts(j, r) if hosts is None else np.asarray(hosts, dtype=float)
    u = unit(np.array(th))
    centers = np.empty((2 * j, 2))
    centers[0::2] = hosts - r * u
    centers[1::2] = hosts + r * u
    return DiskConfig(centers, r, {2 * i + 1: th[i] for i in range(j)})


def matching_angles(c: DiskConfig) -> np.ndarray:
    return angle_of(c.centers[1::2] - c.centers[0::2])


# ---- the a -> b swap at radius 1/3 ----

_THIRD = 1.0 / 3.0
_FIXED = (2.0 / 3.0) * unit(np.array([1.0 / 12.0, -1.0 / 12.0]))
_RAMP = 0.05
_BULGE = 0.25


def _swap_pair(theta: float):
    """Disks of the spinning pair for direction theta, with the other two at _FIXED.

    For directions pointing right the second disk of the pair sits at the
    origin, for directions pointing left the first one does; near vertical
    the pair slides over, bulging left to clear the fixed disks.
    """
    p = theta % 1.0
    u = unit(theta)
    if abs(p - 0.25) <= _RAMP:
        s = (p - 0.25) / _RAMP
    elif abs(p - 0.75) <= _RAMP:
        s = -(p - 0.75) / _RAMP
    elif 0.25 < p < 0.75:
        s = 1.0
    else:
        s = -1.0
    mid = s * u / 3.0 - _BULGE * (1.0 - s * s) * np.array([1.0, 0.0])
    return mid - u / 3.0, mid + u / 3.0


def build_hhat(a: int, b: int, theta1: float, theta2: float) -> DiskConfig:
    """Four disks of radius 1/3; the a->b vector has angle theta2 and the
    other two disks are turned rigidly by theta1."""
    if not 1 <= a < b <= 4:
        raise ValueError("need 1 <= a < b <= 4")
    c, d = [k for k in range(1, 5) if k not in (a, b)]
    pa, pb = _swap_pair(theta2 - theta1)
    centers = np.empty((4, 2))
    centers[a - 1], centers[b - 1] = pa, pb
    centers[c - 1], centers[d - 1] = _FIXED
    centers = rotate(centers, theta1)
    return DiskConfig(centers, _THIRD, {c - 1: float(theta1), b - 1: float(theta2)})


def hhat_family(a: int, b: int):
    """Vectorised (theta1, theta2) -> centers map for the degree oracle."""
    def f(thetas):
        th = np.asarray(thetas, dtype=float).reshape(-1, 2)
        return np.stack([build_hhat(a, b, t1, t2).centers for t1, t2 in th])
    return f


# ---- scaled embeddings ----

def embed_scaled(inner: DiskConfig, host_center, scale: float, labels: Sequence[int], tol: float = 1e-12):
    """Map ``inner`` into the host disk of radius ``scale`` about ``host_center``.

    Returns ``({label: center}, radius)``; labels are 1-based targets for the
    inner disks in order.
    """
    host = np.asarray(host_center, dtype=float)
    if not 0 < scale <= 1:
        raise ValueError("scale must lie in (0, 1]")
    if np.linalg.norm(host) + scale > 1.0 + tol:
        raise ValueError("host disk is not contained in the unit disk")
    labels = list(labels)
    if len(labels) != inner.n or len(set(labels)) != len(labels):
        raise ValueError("labels must be an injection from the inner disks")
    placed = {lab: host + scale * x for lab, x in zip(labels, inner.centers)}
    return placed, inner.radius * scale


def assemble(n: int, parts) -> DiskConfig:
    """Combine ``(placement, radius)`` pieces covering labels 1..n into one config."""
    centers = np.full((n, 2), np.nan)
    radius = None
    for placed, rad in parts:
        if radius is not None and abs(rad - radius) > 1e-12:
            raise ValueError("pieces have different radii")
        radius = rad
        for lab, x in placed.items():
            if not np.isnan(centers[lab - 1, 0]):
                raise ValueError(f"label {lab} placed twice")
            centers[lab - 1] = x
    if np.isnan(centers).any():
        raise ValueError("some labels were not placed")
    return DiskConfig(centers, radius)


def half_inclusion(x: DiskConfig, y: DiskConfig, subset: Sequence[int], n: int) -> DiskConfig:
    """Half-scaled ``x`` (labels ``subset``) beside half-scaled ``y`` (the rest)."""
    subset = sorted(subset)
    rest = [k for k in range(1, n + 1) if k not in subset]
    if x.n != len(subset) or y.n != len(rest):
        raise ValueError("subset sizes do not match the configurations")
    if abs(x.radius - y.radius) > 1e-12:
        raise ValueError("x and y must have the same radius")
    left = embed_scaled(x, (-0.5, 0.0), 0.5, subset)
    right = embed_scaled(y, (0.5, 0.0), 0.5, rest)
    return assemble(n, [left, right])


def partition_inclusion(parts: Sequence[DiskConfig], blocks: Sequence[Sequence[int]], r: float) -> DiskConfig:
    """Scaled copies of ``parts[i]`` (each of radius 1/m_i) in medium disks of radius r*m_i."""
    if len(parts) != len(blocks):
        raise ValueError("one block of labels per part")
    sizes = [len(b) for b in blocks]
    for p, m in zip(parts, sizes):
        if p.n != m or abs(p.radius - 1.0 / m) > 1e-9:
            raise ValueError("each part must be a configuration of m_i disks of radius 1/m_i")
    order = sorted(range(len(parts)), key=lambda i: -sizes[i])
    layout = pack_disks([r * sizes[i] for i in order])
    if layout.R > 1.0 + 1e-12:
        raise ValueError(f"medium disks need enclosing radius {layout.R:.6g} > 1")
    pieces = []
    for slot, i in enumerate(order):
        pieces.append(embed_scaled(parts[i], layout.centers[slot], r * sizes[i], blocks[i]))
    return assemble(sum(sizes), pieces)


# ---- bound calculators ----

PACKING_CONSTANT = 1.0 / 6.0


def bound_calculators(profile) -> dict:
    """Radius bounds for a component profile (sizes of non-isolated components)."""
    parts = list(getattr(profile, "parts", profile))
    if not parts:
        return {"r_min_lower": math.inf, "r_max_upper": math.inf, "packing_constant": PACKING_CONSTANT}
    return {
        "r_min_lower": 1.0 / math.sqrt(sum(m * m for m in parts)),
        "r_max_upper": min(1.0 / max(parts), 1.0 / math.sqrt(sum(parts))),
        "packing_constant": PACKING_CONSTANT,
    }
