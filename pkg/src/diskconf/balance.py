"""Stress graphs of disk configurations and balance detection.

A configuration at radius r is balanced when its contact graph carries
positive edge weights whose outward forces cancel at every center (and, per
component, at the boundary).  Those are the critical configurations of the
tautological function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, least_squares

from .geometry.configs import DiskConfig, tau

CONTACT_TOL = 1e-6
RESIDUAL_TOL = 1e-8


@dataclass
class StressGraph:
    centers: np.ndarray
    radius: float
    pairs: list[tuple[int, int]]        # 0-based internal-internal contacts
    boundary: list[int]                 # 0-based disks touching the unit circle
    tol: float = CONTACT_TOL

    @property
    def boundary_points(self) -> np.ndarray:
        c = self.centers[self.boundary]
        return c / np.linalg.norm(c, axis=1, keepdims=True) if len(c) else np.zeros((0, 2))

    @property
    def num_edges(self) -> int:
        return len(self.pairs) + len(self.boundary)

    def components(self) -> list[list[int]]:
        n = len(self.centers)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.pairs:
            parent[find(i)] = find(j)
        touched = {i for e in self.pairs for i in e} | set(self.boundary)
        groups: dict[int, list[int]] = {}
        for v in sorted(touched):
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def to_json(self) -> dict:
        return {
            "pairs": [[i + 1, j + 1] for i, j in self.pairs],
            "boundary": [i + 1 for i in self.boundary],
            "boundary_points": [[float(x), float(y)] for x, y in self.boundary_points],
            "tol": self.tol,
        }


@dataclass
class BalanceResult:
    balanced: bool
    weights: list[float] = field(default_factory=list)
    residual: float = math.inf

    def to_json(self) -> dict:
        return {"balanced": self.balanced, "weights": [float(w) for w in self.weights],
                "residual": float(self.residual)}


def contact_graph(c: DiskConfig, tol: float = CONTACT_TOL) -> StressGraph:
    r = c.radius
    if r <= 0:
        raise ValueError("radius must be positive")
    x = c.centers
    n = len(x)
    pairs = []
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        d = np.linalg.norm(x[iu] - x[ju], axis=1)
        hit = np.abs(d - 2 * r) <= tol
        pairs = [(int(i), int(j)) for i, j in zip(iu[hit], ju[hit])]
    norms = np.linalg.norm(x, axis=1)
    boundary = [int(i) for i in np.nonzero((np.abs(norms - (1 - r)) <= tol) & (norms > 0))[0]]
    return StressGraph(x.copy(), r, pairs, boundary, tol)


def equilibrium_matrix(g: StressGraph) -> np.ndarray:
    """Rows: two force equations per center, then two boundary equations per component."""
    x = g.centers
    n = len(x)
    comps = g.components()
    m = g.num_edges
    A = np.zeros((2 * n + 2 * len(comps), m))
    for e, (i, j) in enumerate(g.pairs):
        u = (x[i] - x[j]) / np.linalg.norm(x[i] - x[j])
        A[2 * i:2 * i + 2, e] += u
        A[2 * j:2 * j + 2, e] -= u
    y = g.boundary_points
    where = {}
    for k, comp in enumerate(comps):
        for v in comp:
            where[v] = k
    off = len(g.pairs)
    for e, i in enumerate(g.boundary):
        A[2 * i:2 * i + 2, off + e] -= y[e]          # the wall pushes the disk inward
        k = where[i]
        A[2 * n + 2 * k:2 * n + 2 * k + 2, off + e] += y[e]  # outward force on the wall
    return A


def is_balanced(g: StressGraph, residual_tol: float = RESIDUAL_TOL) -> BalanceResult:
    m = g.num_edges
    if m == 0:
        return BalanceResult(False)
    A = equilibrium_matrix(g)
    res = linprog(np.ones(m), A_eq=A, b_eq=np.zeros(len(A)), bounds=[(1.0, None)] * m, method="highs")
    if res.status != 0:
        return BalanceResult(False)
    w = res.x
    residual = float(np.abs(A @ w).max())
    return BalanceResult(residual <= residual_tol, list(w), residual)


def check_config(c: DiskConfig, tol: float = CONTACT_TOL) -> tuple[StressGraph, BalanceResult]:
    g = contact_graph(c, tol)
    return g, is_balanced(g)


# ---- reference configurations ----

def diameter_config(n: int, angle: float = 0.0) -> DiskConfig:
    t = -1.0 + (2.0 * np.arange(1, n + 1) - 1.0) / n
    u = np.array([math.cos(2 * math.pi * angle), math.sin(2 * math.pi * angle)])
    return DiskConfig(t[:, None] * u[None, :], 1.0 / n)


def square_config() -> DiskConfig:
    r = 1.0 / (1.0 + math.sqrt(2.0))
    s = (1.0 - r) / math.sqrt(2.0)
    return DiskConfig(np.array([[s, s], [-s, s], [-s, -s], [s, -s]]), r)


# ---- enclosing ball of an embedded tree ----

def enclosing_ball_of_tree(points, edges) -> tuple[np.ndarray, float]:
    """Ball containing a straight-line tree with radius at most half its total length.

    Leaves are peeled one at a time; the ball of the remaining subtree and
    the ball around the leaf edge (which share the attaching vertex) are
    merged into the smallest ball containing both.
    """
    pts = np.asarray(points, dtype=float)
    edges = [tuple(e) for e in edges]
    if len(pts) == 0:
        raise ValueError("empty tree")
    if len(edges) != len(pts) - 1:
        raise ValueError("a tree on k vertices has k - 1 edges")
    if len(edges) == 0:
        return pts[0].copy(), 0.0
    adj: dict[int, set[int]] = {i: set() for i in range(len(pts))}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    # find a leaf, remove it, recurse
    leaf = next(v for v, nb in adj.items() if len(nb) == 1)
    (attach,) = adj[leaf]
    keep = [v for v in range(len(pts)) if v != leaf]
    index = {v: k for k, v in enumerate(keep)}
    sub_edges = [(index[i], index[j]) for i, j in edges if leaf not in (i, j)]
    c1, r1 = enclosing_ball_of_tree(pts[keep], sub_edges)
    c2 = 0.5 * (pts[leaf] + pts[attach])
    r2 = 0.5 * float(np.linalg.norm(pts[leaf] - pts[attach]))
    return _merge_balls(c1, r1, c2, r2)


def _merge_balls(c1, r1, c2, r2):
    d = float(np.linalg.norm(c2 - c1))
    if d + r2 <= r1:
        return c1, r1
    if d + r1 <= r2:
        return c2, r2
    R = 0.5 * (d + r1 + r2)
    c = c1 + (R - r1) * (c2 - c1) / d
    return c, R


def tree_length(points, edges) -> float:
    pts = np.asarray(points, dtype=float)
    return float(sum(np.linalg.norm(pts[i] - pts[j]) for i, j in edges))


# ---- search ----

def _constraint_values(x):
    """f_a for every pair (half distance) and every disk (distance to the wall); batched."""
    n = x.shape[1]
    iu, ju = np.triu_indices(n, 1)
    diff = x[:, iu, :] - x[:, ju, :]
    dist = np.sqrt((diff ** 2).sum(-1))
    norm = np.sqrt((x ** 2).sum(-1))
    return np.concatenate([dist / 2, 1.0 - norm], axis=1), diff, dist, norm, iu, ju


def _gradients(x, diff, dist, norm, iu, ju):
    """Gradient of each f_a with respect to all centers: (T, m, n, 2)."""
    T, n, _ = x.shape
    p = len(iu)
    G = np.zeros((T, p + n, n, 2))
    u = diff / np.maximum(dist, 1e-15)[..., None]
    ar = np.arange(p)
    G[:, ar, iu, :] = u / 2
    G[:, ar, ju, :] = -u / 2
    k = np.arange(n)
    G[:, p + k, k, :] = -x / np.maximum(norm, 1e-15)[..., None]
    return G


def _project_simplex(w):
    s = -np.sort(-w, axis=1)
    cs = np.cumsum(s, axis=1) - 1.0
    k = np.arange(1, w.shape[1] + 1)
    cond = s - cs / k > 0
    rho = cond.shape[1] - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = cs[np.arange(len(w)), rho] / (rho + 1)
    return np.maximum(w - theta[:, None], 0.0)


def _objective(x, w, r, lam, mu):
    f, diff, dist, norm, iu, ju = _constraint_values(x)
    G = _gradients(x, diff, dist, norm, iu, ju)
    force = np.einsum("ta,tanc->tnc", w, G)
    gap = f - r
    val = (force ** 2).sum((1, 2)) + lam * (w * gap ** 2).sum(1) + mu * (np.minimum(gap, 0) ** 2).sum(1)
    return val, f, G, force, gap


def search_balanced(n: int, r: float, trials: int = 1000, seed: int = 0, iters: int = 400,
                    batch: int = 2000, tol: float = CONTACT_TOL, dedupe: float = 1e-4) -> list[DiskConfig]:
    """Multistart search for balanced configurations at radius r.

    Each trial descends (projected gradient, batched over trials) on
    |sum_a w_a grad f_a|^2 + lam * sum_a w_a (f_a - r)^2 + mu * overlap^2
    with w on the simplex; a zero of this is a balanced configuration at r.
    Near-zero candidates are polished by least squares on their active
    contacts and then verified with contact_graph + is_balanced.  An empty
    result is evidence only.
    """
    if n < 2 or r <= 0:
        raise ValueError("need n >= 2 and r > 0")
    rng = np.random.default_rng(seed)
    hits: list[DiskConfig] = []
    lam, mu = 10.0, 100.0
    done = 0
    while done < trials:
        T = min(batch, trials - done)
        done += T
        rad = np.sqrt(rng.random((T, n))) * max(1.0 - r, 0.0)
        ang = rng.random((T, n)) * 2 * np.pi
        x = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=-1)
        m = n * (n - 1) // 2 + n
        w = np.full((T, m), 1.0 / m)
        step = np.full(T, 0.02)
        val, f, G, force, gap = _objective(x, w, r, lam, mu)
        for _ in range(iters):
            gw = 2 * np.einsum("tnc,tanc->ta", force, G) + lam * gap ** 2
            gx = np.einsum("ta,tanc->tnc", 2 * lam * w * gap + 2 * mu * np.minimum(gap, 0), G)
            gx += _force_grad(x, w, force)
            # per-trial backtracking: accept only steps that lower the objective
            x_new = _clip_to_disk(x - step[:, None, None] * gx)
            w_new = _project_simplex(w - step[:, None] * gw)
            val_new, f_new, G_new, force_new, gap_new = _objective(x_new, w_new, r, lam, mu)
            ok = val_new < val
            x[ok], w[ok], val[ok], f[ok], G[ok], force[ok], gap[ok] = (
                x_new[ok], w_new[ok], val_new[ok], f_new[ok], G_new[ok], force_new[ok], gap_new[ok])
            step = np.where(ok, np.minimum(step * 1.3, 0.5), step * 0.4)
        val, f, G, force, gap = _objective(x, w, r, lam, mu)
        for t in np.nonzero(val < 3e-4)[0]:
            if any(_same(DiskConfig(x[t], r), h, 1e-2) for h in hits):
                continue
            c = _polish(x[t], r, w[t], f[t], tol)
            if c is None:
                continue
            g, res = check_config(c, tol)
            if res.balanced and not any(_same(c, h, dedupe) for h in hits):
                hits.append(c)
    return hits


def _clip_to_disk(x):
    norm = np.sqrt((x ** 2).sum(-1, keepdims=True))
    return np.where(norm > 1.0, x / np.maximum(norm, 1e-300), x)


def _force_grad(x, w, force):
    """Gradient in x of |sum_a w_a grad f_a|^2 (exact, using the Hessians of the f_a)."""
    T, n, _ = x.shape
    iu, ju = np.triu_indices(n, 1)
    p = len(iu)
    out = np.zeros_like(x)
    diff = x[:, iu, :] - x[:, ju, :]
    dist = np.maximum(np.sqrt((diff ** 2).sum(-1)), 1e-12)
    u = diff / dist[..., None]
    # Hessian of |xi - xj|/2 w.r.t. xi is (I - u u^T)/(2 dist); block structure +H, -H
    dF = force[:, iu, :] - force[:, ju, :]
    proj = dF - (dF * u).sum(-1, keepdims=True) * u
    contrib = (w[:, :p] / (2 * dist))[..., None] * proj
    np.add.at(out, (slice(None), iu), 2 * contrib)
    np.add.at(out, (slice(None), ju), -2 * contrib)
    norm = np.maximum(np.sqrt((x ** 2).sum(-1)), 1e-12)
    v = x / norm[..., None]
    # Hessian of 1 - |x| is -(I - v v^T)/|x|
    F = force
    projb = F - (F * v).sum(-1, keepdims=True) * v
    out += 2 * (-(w[:, p:] / norm)[..., None] * projb)
    return out


def _polish(x0, r, w0, f, tol):
    """Newton-type polish of (centers, active weights) on the critical-point equations."""
    active = np.nonzero((w0 > 1e-4) | (np.abs(f - r) < 1e-3))[0]
    n = len(x0)

    def resid(z):
        x = z[:2 * n].reshape(1, n, 2)
        w = np.zeros((1, len(f)))
        w[0, active] = z[2 * n:]
        vals, diff, dist, norm, iu, ju = _constraint_values(x)
        G = _gradients(x, diff, dist, norm, iu, ju)
        force = np.einsum("ta,tanc->tnc", w, G)[0].ravel()
        return np.concatenate([vals[0, active] - r, force, [w.sum() - 1.0]])

    z0 = np.concatenate([x0.ravel(), np.maximum(w0[active], 1e-3)])
    sol = least_squares(resid, z0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=100)
    if np.abs(sol.fun).max() > 1e-9:
        return None
    c = DiskConfig(sol.x[:2 * n].reshape(n, 2), r)
    if not c.is_valid(tol):
        return None
    return c


def _same(a: DiskConfig, b: DiskConfig, tol: float) -> bool:
    """Equal up to rotation about the origin (labels kept)."""
    za = a.centers[:, 0] + 1j * a.centers[:, 1]
    zb = b.centers[:, 0] + 1j * b.centers[:, 1]
    k = int(np.argmax(np.abs(za)))
    if abs(za[k]) < 1e-12 or abs(abs(za[k]) - abs(zb[k])) > tol:
        return bool(np.abs(za - zb).max() < tol)
    rot = zb[k] / za[k]
    rot /= abs(rot)
    return bool(np.abs(za * rot - zb).max() < tol)


def is_diameter(c: DiskConfig, tol: float = 1e-6) -> bool:
    """All disks collinear on a line through the origin, tangent in a row, r = 1/n."""
    x = c.centers
    n = len(x)
    if abs(c.radius - 1.0 / n) > tol:
        return False
    k = int(np.argmax(np.linalg.norm(x, axis=1)))
    d = x[k] / np.linalg.norm(x[k])
    t = x @ d
    off = x - t[:, None] * d
    if np.abs(off).max() > tol:
        return False
    expected = -1.0 + (2.0 * np.arange(1, n + 1) - 1.0) / n
    return bool(np.abs(np.sort(t) - expected).max() <= tol)


def classify_small_radius(n: int, configs, tol: float = 1e-6) -> list[dict]:
    """Check each balanced config against the small-radius classification.

    At r <= 3/(2n+3) every balanced configuration should be k disks in a row
    on a diameter at r = 1/k (with any other disks free).  Anything else is
    reported as a violation.
    """
    threshold = 3.0 / (2 * n + 3)
    out = []
    for c in configs:
        if c.radius > threshold + tol:
            out.append({"radius": c.radius, "label": "above threshold", "violation": False})
            continue
        g = contact_graph(c, tol)
        label = "violation"
        for comp in g.components():
            k = len(comp)
            sub = DiskConfig(c.centers[comp], c.radius)
            if abs(c.radius - 1.0 / k) <= tol and is_diameter(sub, tol):
                label = "diameter"
                break
        out.append({"radius": c.radius, "label": label, "violation": label == "violation"})
    return out
