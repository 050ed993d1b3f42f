"""Numeric degree of a torus self-map obtained by composing a configuration
family T^j -> Conf_n with the angle map of a j-edge forest.

The torus is cut into Kuhn simplices on a uniform grid, the angle map is
interpolated linearly on each simplex (after lifting values near the first
vertex), and the signed preimages of a generic target value are counted.
"""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .forests import OrderedForest
from .geometry.configs import angle_of
from .geometry.constructions import build_qn_batch
from .pairing import Permutation


class ResolutionError(RuntimeError):
    """Raised when the sampling grid is too coarse to trust the count."""


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _wrap(x):
    return x - np.round(x)


def edge_angles(centers: np.ndarray, g: OrderedForest) -> np.ndarray:
    """Angles (turns) of x_j - x_i along the edges of g, in edge order."""
    i = np.array([a for a, _ in g.edges]) - 1
    j = np.array([b for _, b in g.edges]) - 1
    return angle_of(centers[..., j, :] - centers[..., i, :])


def numeric_degree_oracle(config_map: Callable, g: OrderedForest, grid: int = 24,
                          targets=None, check_centers: bool = True) -> int:
    """Degree of theta -> alpha_G(config_map(theta)) on the j-torus.

    ``config_map`` takes an array of angle tuples (M, j) in turns and returns
    centers (M, n, 2).  Two generic target values are used; they must agree.
    """
    j = g.num_edges
    if j == 0:
        raise ValueError("forest has no edges")
    axes = np.arange(grid) / grid
    mesh = np.stack(np.meshgrid(*([axes] * j), indexing="ij"), axis=-1).reshape(-1, j)
    centers = np.asarray(config_map(mesh), dtype=float)
    shape = (grid,) * j
    vals = edge_angles(centers, g).reshape(shape + (j,))

    if check_centers:
        c = centers.reshape(shape + centers.shape[1:])
        diff = c[..., :, None, :] - c[..., None, :, :]
        dist = np.sqrt((diff ** 2).sum(-1))
        n = dist.shape[-1]
        dist[..., np.arange(n), np.arange(n)] = np.inf
        half_gap = 0.5 * dist.min()
        for ax in range(j):
            step = np.linalg.norm(np.roll(c, -1, axis=ax) - c, axis=-1).max()
            if step >= half_gap:
                raise ResolutionError(
                    f"resolution insufficient: centers move {step:.3g} per grid step, half the minimum gap is {half_gap:.3g}")

    if targets is None:
        targets = [np.full(j, 0.1234567) + 0.0713 * np.arange(j), np.full(j, 0.6180339) - 0.0419 * np.arange(j)]
    degrees = [_count(vals, grid, j, np.asarray(t, dtype=float)) for t in targets]
    if len(set(degrees)) != 1:
        raise ResolutionError(f"resolution insufficient: target values give degrees {degrees}")
    return degrees[0]


def _count(vals: np.ndarray, grid: int, j: int, target: np.ndarray) -> int:
    total = 0
    base = vals
    for perm in itertools.permutations(range(j)):
        sign_perm = _perm_sign(perm)
        # vertex k of the simplex is base + e_{perm[0]} + ... + e_{perm[k-1]}
        verts = [base]
        cur = base
        for ax in perm:
            cur = np.roll(cur, -1, axis=ax)
            verts.append(cur)
        f0 = verts[0]
        lifted = [np.zeros_like(f0)] + [_wrap(v - f0) for v in verts[1:]]
        stack = np.stack(lifted, axis=-2)  # (..., j+1, j)
        spread = stack.max(axis=-2) - stack.min(axis=-2)
        if spread.max() >= 0.25:
            raise ResolutionError("resolution insufficient: angle map varies by a quarter turn inside one simplex")
        A = np.stack(lifted[1:], axis=-1)  # columns f(v_k) - f(v_0)
        rhs = _wrap(target - f0)
        A2 = A.reshape(-1, j, j)
        b2 = rhs.reshape(-1, j)
        det = np.linalg.det(A2)
        ok = np.abs(det) > 1e-300
        lam = np.zeros_like(b2)
        lam[ok] = np.linalg.solve(A2[ok], b2[ok][..., None])[..., 0]
        inside = ok & np.all(lam >= 0, axis=1) & (lam.sum(axis=1) <= 1)
        total += sign_perm * int(np.sign(det[inside]).sum())
    return total


def qn_family(n: int, sigma: Permutation | None = None) -> Callable:
    """q_n as a map of angle arrays, relabelled by sigma: (sigma . x)_i = x_{sigma(i)}."""
    idx = None if sigma is None else np.array(sigma.images) - 1

    def f(thetas):
        c = build_qn_batch(np.asarray(thetas, dtype=float).reshape(-1, n - 1))
        return c if idx is None else c[:, idx, :]
    return f


def constant_family(centers) -> Callable:
    c = np.asarray(centers, dtype=float)

    def f(thetas):
        m = np.asarray(thetas).reshape(len(thetas), -1).shape[0]
        return np.broadcast_to(c, (m,) + c.shape).copy()
    return f
