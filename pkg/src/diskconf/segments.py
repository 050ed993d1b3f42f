"""Segment obstructions: the perpendicular-fit threshold, hourglass traps
among point obstacles, and a grid motion planner that checks trapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .geometry.configs import SegConfig, unit


# ---- two perpendicular segments ----

def _perp_constraints(z, L):
    """Margins that must all be >= t for a separated, contained placement.

    z = (px, py, qx, qy, phi, c, t): segment A horizontal about p, segment B
    vertical about q, separating line {n(phi) . x = c}.  The common rotation
    is fixed since the problem is rotation invariant.
    """
    px, py, qx, qy, phi, c, t = z
    h = L / 2
    A = np.array([[px - h, py], [px + h, py]])
    B = np.array([[qx, qy - h], [qx, qy + h]])
    nv = np.array([math.cos(phi), math.sin(phi)])
    contain = 1.0 - np.sqrt((np.vstack([A, B]) ** 2).sum(1) + 1e-300)
    sep = np.concatenate([A @ nv - c, c - B @ nv])
    return np.concatenate([contain, sep]) - t


def perpendicular_margin(L: float, seed: int = 0, starts: int = 1000, refine: int = 6) -> tuple[float, np.ndarray]:
    """Best margin t for two perpendicular segments of length L (t >= 0 means they fit)."""
    rng = np.random.default_rng(seed)
    h = L / 2
    chord_y = -math.sqrt(max(1.0 - h * h, 0.0))
    seed_z = np.array([0.0, chord_y, 0.0, chord_y + h, -math.pi / 2, -chord_y, 0.0])
    # vectorised screening of random starts
    P = rng.uniform(-1, 1, (starts, 4))
    phi = rng.uniform(0, 2 * math.pi, starts)
    nv = np.stack([np.cos(phi), np.sin(phi)], 1)
    A = np.stack([P[:, :2] - [h, 0], P[:, :2] + [h, 0]], 1)
    B = np.stack([P[:, 2:] - [0, h], P[:, 2:] + [0, h]], 1)
    a_proj = np.einsum("skc,sc->sk", A, nv)
    b_proj = np.einsum("skc,sc->sk", B, nv)
    c = 0.5 * (a_proj.min(1) + b_proj.max(1))
    contain = 1 - np.linalg.norm(np.concatenate([A, B], 1), axis=2)
    score = np.minimum(contain.min(1), np.minimum(a_proj.min(1) - c, c - b_proj.max(1)))
    best_idx = np.argsort(-score)[:refine]
    inits = [seed_z] + [np.concatenate([P[i], [phi[i], c[i], score[i]]]) for i in best_idx]
    best_t, best_z = -np.inf, seed_z
    for z0 in inits:
        z0 = z0.copy()
        z0[6] = float(_perp_constraints(np.append(z0[:6], 0.0), L).min())
        res = minimize(lambda z: -z[6], z0, jac=lambda z: np.array([0, 0, 0, 0, 0, 0, -1.0]),
                       constraints=[{"type": "ineq", "fun": lambda z: _perp_constraints(z, L)}],
                       method="SLSQP", options={"ftol": 1e-15, "maxiter": 500})
        z = res.x
        t = float(_perp_constraints(np.append(z[:6], 0.0), L).min())
        if t > best_t:
            best_t, best_z = t, z
    return best_t, best_z


def perpendicular_fits(L: float, tol: float = 1e-12, seed: int = 0) -> bool:
    return perpendicular_margin(L, seed=seed)[0] >= -tol


def max_perpendicular_length(tolerance: float = 1e-6, seed: int = 0, lo: float = 1.0, hi: float = 2.0) -> float:
    """Bisection for the longest pair of perpendicular segments fitting disjointly in the unit disk."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if not perpendicular_fits(lo, seed=seed):
        raise RuntimeError(f"lower bracket {lo} is not feasible")
    if perpendicular_fits(hi, seed=seed):
        return hi
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if perpendicular_fits(mid, seed=seed):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---- hourglass traps ----

SAFETY = 0.9


@dataclass
class TrapParams:
    """Obstacles ((2k+1)a, +-b) in the strip |y| < 1 trapping segments of length r.

    ``center_y`` and ``scale`` place the canonical strip into the plane:
    canonical (x, y) maps to (scale * x, center_y + scale * y).
    """

    a: float
    b: float
    r: float
    delta: float
    center_y: float = 0.0
    scale: float = 1.0

    @property
    def ratio(self) -> float:
        return self.a / self.b

    def checks(self, delta: float | None = None) -> dict[str, bool]:
        d = self.delta if delta is None else delta
        q = self.ratio
        return {
            "width": 2 * q < d / 2,
            "diagonal": 2 * math.sqrt(q * q + 1) < 2 * self.r,
            "length": math.sqrt((self.a + q) ** 2 + (self.b + 1) ** 2) < self.r,
        }

    def ok(self, delta: float | None = None) -> bool:
        return all(self.checks(delta).values())

    def points(self, x_min: float, x_max: float) -> np.ndarray:
        """Obstacle points with canonical x in [x_min, x_max]."""
        k0 = math.floor((x_min / self.a - 1) / 2)
        k1 = math.ceil((x_max / self.a - 1) / 2)
        xs = (2 * np.arange(k0, k1 + 1) + 1) * self.a
        xs = xs[(xs >= x_min) & (xs <= x_max)]
        return np.concatenate([np.stack([xs, np.full_like(xs, self.b)], 1),
                               np.stack([xs, np.full_like(xs, -self.b)], 1)])

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "r": self.r, "delta": self.delta,
                "center_y": self.center_y, "scale": self.scale, "checks": self.checks()}


def hourglass_params(r: float, delta: float) -> TrapParams:
    """Pick a/b, then b, each strict inequality taken with a 10% margin."""
    if r <= 1:
        raise ValueError("segment length must exceed half the strip height (1)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    q = SAFETY * min(delta / 4, math.sqrt(r * r - 1))
    # sqrt((a + q)^2 + (b + 1)^2) < r with a = q b  <=>  (b + 1) sqrt(1 + q^2) < r
    b = min(SAFETY * (r / math.sqrt(1 + q * q) - 1), SAFETY)
    p = TrapParams(q * b, b, r, delta)
    if not p.ok():
        raise ArithmeticError(f"parameter choice failed its own checks: {p.checks()}")
    return p


@dataclass
class PoseGrid:
    dx: float = 0.005
    dtheta_deg: float = 1.0
    window: float | None = None      # half-width of the explored x-range; default delta
    max_nodes: int = 5_000_000       # budget on reached poses

    @property
    def dtheta(self) -> float:
        return math.radians(self.dtheta_deg)


@dataclass
class TrapCertificate:
    status: str                  # "trapped", "escaped", "insufficient", "budget"
    params_ok: bool
    checks: dict
    reached: int = 0
    x_extent: tuple[float, float] = (0.0, 0.0)
    y_extent: tuple[float, float] = (0.0, 0.0)
    theta_extent_deg: tuple[float, float] = (90.0, 90.0)
    reached_horizontal: bool = False
    left_strip: bool = False
    message: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "trapped" and self.params_ok

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["certified"] = self.certified
        return out


def _odd_multiple_in(lo, hi, a):
    """Is some (2k+1)a inside [lo, hi]?  Vectorised; empty intervals have lo > hi."""
    k_lo = np.ceil((lo / a - 1.0) / 2.0)
    k_hi = np.floor((hi / a - 1.0) / 2.0)
    return (lo <= hi) & (k_lo <= k_hi)


def _translate_hits_line(cx, cy, th, move, half, y0):
    """x-interval where the parallelogram swept by a translation meets the line y = y0."""
    ux, uy = np.cos(th) * half, np.sin(th) * half
    mx, my = move
    px = np.stack([cx - ux, cx + ux, cx + ux + mx, cx - ux + mx], 1)
    py = np.stack([cy - uy, cy + uy, cy + uy + my, cy - uy + my], 1)
    lo = np.full(len(cx), np.inf)
    hi = np.full(len(cx), -np.inf)
    for i in range(4):
        j = (i + 1) % 4
        yi, yj = py[:, i] - y0, py[:, j] - y0
        cross = yi * yj <= 0
        flat_edge = cross & (yi == yj)
        slope = np.where(yi == yj, 1.0, yi - yj)
        x = np.where(flat_edge, px[:, i], px[:, i] + (px[:, j] - px[:, i]) * yi / slope)
        lo = np.where(cross, np.minimum(lo, x), lo)
        hi = np.where(cross, np.maximum(hi, x), hi)
        lo = np.where(flat_edge, np.minimum(lo, px[:, j]), lo)
        hi = np.where(flat_edge, np.maximum(hi, px[:, j]), hi)
    return lo, hi


def _rotate_hits_line(cx, cy, th, dth, half, y0):
    """x-intervals where the bow-tie swept by rotating from th to th + dth meets y = y0.

    Returns two intervals (the sweep may wrap past a horizontal direction).
    """
    e = y0 - cy
    phi0 = np.mod(th, math.pi)
    phi1 = phi0 + dth
    out = []
    for lo_phi, hi_phi in ((phi0, np.minimum(phi1, math.pi)), (np.zeros_like(phi0), phi1 - math.pi)):
        valid = hi_phi >= lo_phi
        k = np.abs(e) / half
        s = np.arcsin(np.minimum(k, 1.0))
        a = np.maximum(lo_phi, s)
        b = np.minimum(hi_phi, math.pi - s)
        ok = valid & (k <= 1.0) & (a <= b) & (e != 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            xa = cx + e / np.tan(np.where(ok, a, 1.0))
            xb = cx + e / np.tan(np.where(ok, b, 1.0))
        lo = np.where(ok, np.minimum(xa, xb), np.inf)
        hi = np.where(ok, np.maximum(xa, xb), -np.inf)
        # the line through the center: the center itself, or the whole segment if horizontal
        on = valid & (e == 0)
        horiz = on & ((lo_phi == 0) | (hi_phi >= math.pi))
        lo = np.where(on, np.where(horiz, cx - half, cx), lo)
        hi = np.where(on, np.where(horiz, cx + half, cx), hi)
        out.append((lo, hi))
    return out


def _blocked(params, cx, cy, th, move, half):
    """Does the move sweep over one of the obstacles ((2k+1)a, +-b)?"""
    hit = np.zeros(len(cx), bool)
    for y0 in (params.b, -params.b):
        if move[0] == "rot":
            for lo, hi in _rotate_hits_line(cx, cy, th, move[1], half, y0):
                hit |= _odd_multiple_in(lo, hi, params.a)
        else:
            lo, hi = _translate_hits_line(cx, cy, th, move, half, y0)
            hit |= _odd_multiple_in(lo, hi, params.a)
    return hit


class _VisitedSet:
    """Set of flat pose indices: a dense bitmap for small grids, a sorted array otherwise."""

    DENSE_LIMIT = 60_000_000

    def __init__(self, size: int):
        self.dense = np.zeros(size, bool) if size <= self.DENSE_LIMIT else None
        self.sorted = np.zeros(0, np.int64)
        self.count = 0

    def __len__(self):
        return self.count

    def contains(self, f):
        if self.dense is not None:
            return self.dense[f]
        pos = np.searchsorted(self.sorted, f)
        return (pos < len(self.sorted)) & (self.sorted[np.minimum(pos, len(self.sorted) - 1)] == f)

    def add(self, f):
        self.count += len(f)
        if self.dense is not None:
            self.dense[f] = True
        else:
            self.sorted = np.union1d(self.sorted, f)

    def indices(self):
        return np.flatnonzero(self.dense) if self.dense is not None else self.sorted


def trap_certify(params: TrapParams, grid: PoseGrid | None = None, with_obstacles: bool = True,
                 delta: float | None = None, stop_on_escape: bool = True) -> TrapCertificate:
    """Breadth-first search over grid poses of a segment of length r in |y| < 1.

    Moves are single grid steps in x, y or angle; a move is allowed only if
    the swept region (a parallelogram or a pair of thin sectors) avoids every
    obstacle, so grid paths are genuine motions.  Reachability on the grid
    under-approximates true reachability: the certificate is evidence of
    trapping, not a proof.
    """
    grid = grid or PoseGrid()
    d = params.delta if delta is None else delta
    checks = params.checks(d)
    params_ok = all(checks.values())
    r, half = params.r, params.r / 2
    dx, dth = grid.dx, grid.dtheta
    if max(dx, half * dth) >= params.a and with_obstacles:
        return TrapCertificate("insufficient", params_ok, checks,
                               message=f"resolution insufficient: steps {dx:.3g}, {half * dth:.3g} vs a = {params.a:.3g}")
    window = d if grid.window is None else grid.window
    nx = int(round(window / dx))
    ny = int(math.floor(1.0 / dx))
    nk = int(round(180.0 / grid.dtheta_deg))
    shape = (2 * nx + 1, 2 * ny + 1, nk)
    def pose(ix, iy, ik):
        return (ix - nx) * dx, (iy - ny) * dx, ik * dth

    def free(ix, iy, ik):
        x, y, th = pose(ix, iy, ik)
        return np.abs(y) + half * np.abs(np.sin(th)) < 1.0

    def flat(ix, iy, ik):
        return (ix.astype(np.int64) * shape[1] + iy) * shape[2] + ik

    start = (nx, ny, int(round(90.0 / grid.dtheta_deg)))
    frontier = np.array([start], dtype=np.int64)
    visited = _VisitedSet(int(np.prod(shape, dtype=np.int64)))
    visited.add(flat(frontier[:, 0], frontier[:, 1], frontier[:, 2]))
    moves = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    edge_hit = False
    while len(frontier):
        if len(visited) > grid.max_nodes:
            return TrapCertificate("budget", params_ok, checks, reached=int(len(visited)),
                                   message=f"more than {grid.max_nodes} poses reached; search stopped")
        ix, iy, ik = frontier.T
        cx, cy, th = pose(ix, iy, ik)
        new = []
        for mx_, my_, mk in moves:
            jx, jy, jk = ix + mx_, iy + my_, (ik + mk) % nk
            inside = (jx >= 0) & (jx < shape[0]) & (jy >= 0) & (jy < shape[1])
            if not inside.all():
                edge_hit = edge_hit or bool(((jx < 0) | (jx >= shape[0]))[~inside].any())
            sel = np.nonzero(inside)[0]
            sel = sel[free(jx[sel], jy[sel], jk[sel])]
            sel = sel[~visited.contains(flat(jx[sel], jy[sel], jk[sel]))]
            if len(sel) == 0:
                continue
            if not with_obstacles:
                blocked = np.zeros(len(sel), bool)
            elif mk == 0:
                blocked = _blocked(params, cx[sel], cy[sel], th[sel], (mx_ * dx, my_ * dx), half)
            elif mk > 0:
                blocked = _blocked(params, cx[sel], cy[sel], th[sel], ("rot", dth), half)
            else:
                blocked = _blocked(params, cx[sel], cy[sel], th[sel] - dth, ("rot", dth), half)
            sel = sel[~blocked]
            if len(sel):
                new.append(np.stack([jx[sel], jy[sel], jk[sel]], 1))
        if not new:
            break
        if stop_on_escape:
            got = np.concatenate(new)
            if np.any(got[:, 2] == 0):
                pts = np.unique(got, axis=0)
                visited.add(flat(pts[:, 0], pts[:, 1], pts[:, 2])[~visited.contains(flat(pts[:, 0], pts[:, 1], pts[:, 2]))])
                break
        pts = np.unique(np.concatenate(new), axis=0)
        f = flat(pts[:, 0], pts[:, 1], pts[:, 2])
        fresh = ~visited.contains(f)
        frontier = pts[fresh]
        visited.add(f[fresh])

    idx = np.stack(np.unravel_index(visited.indices(), shape), 1)
    xs = (idx[:, 0] - nx) * dx
    ys = (idx[:, 1] - ny) * dx
    ks = idx[:, 2]
    degs = ks * grid.dtheta_deg
    # angles measured as deviation from vertical, in (-90, 90]
    dev = np.mod(degs - 90.0 + 90.0, 180.0) - 90.0
    reached_horizontal = bool(np.any(ks == 0))
    left = bool(np.any(np.abs(xs) >= d / 2)) or edge_hit
    status = "escaped" if (reached_horizontal or left) else "trapped"
    return TrapCertificate(
        status, params_ok, checks, reached=int(len(idx)),
        x_extent=(float(xs.min()), float(xs.max())), y_extent=(float(ys.min()), float(ys.max())),
        theta_extent_deg=(float(90 + dev.min()), float(90 + dev.max())),
        reached_horizontal=reached_horizontal, left_strip=left,
    )


# ---- the three-strip construction ----

@dataclass
class StripTrap:
    name: str
    y_low: float
    y_high: float
    r: float
    params: TrapParams
    points: np.ndarray
    certificate: TrapCertificate | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name, "y_low": self.y_low, "y_high": self.y_high, "r": self.r,
            "params": self.params.to_json(), "num_points": int(len(self.points)),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


@dataclass
class MidpointBox:
    eps: float
    eps1: float
    eps2: float
    r: float
    strips: list[StripTrap] = field(default_factory=list)

    @property
    def points(self) -> np.ndarray:
        return np.vstack([s.points for s in self.strips])

    def to_json(self) -> dict:
        return {"eps": self.eps, "eps1": self.eps1, "eps2": self.eps2, "r": self.r,
                "strips": [s.to_json() for s in self.strips],
                "num_points": int(len(self.points))}


def _strip_trap(name, y_low, y_high, delta, certify, grid):
    h = (y_high - y_low) / 2
    center = (y_high + y_low) / 2
    r = (h + 1) / 2          # any length in (h, 1) works; take the midpoint
    p = hourglass_params(r / h, delta / h)
    p.center_y, p.scale = center, h
    pts = p.points(-1.0 / h, 1.0 / h)
    world = np.stack([h * pts[:, 0], center + h * pts[:, 1]], 1)
    world = world[np.hypot(world[:, 0], world[:, 1]) < 1.0]
    cert = None
    if certify:
        g = grid or PoseGrid(dx=0.5 * p.a, dtheta_deg=math.degrees(0.5 * p.a / (p.r / 2)), max_nodes=2_000_000)
        cert = trap_certify(p, g)
    return StripTrap(name, y_low, y_high, r, p, world, cert)


def midpoint_box_sets(eps: float, certify: bool = True, grid: PoseGrid | None = None) -> MidpointBox:
    if not 0 < eps < 0.25:
        raise ValueError("eps must lie in (0, 1/4)")
    e1, e2 = eps / 3, 2 * eps / 3
    h_mid = math.sqrt(1 - e1 * e1)
    strips = [
        _strip_trap("middle", -h_mid, h_mid, e2 - e1, certify, grid),
        _strip_trap("upper", -0.5 + eps, 1.0, eps - e2, certify, grid),
        _strip_trap("lower", -1.0, 0.5 - eps, eps - e2, certify, grid),
    ]
    r = max(s.r for s in strips)
    return MidpointBox(eps, e1, e2, r, strips)


# ---- small pieces ----

def radial_surjectivity_demo(angles, r: float) -> SegConfig:
    """Segments pointing radially outward at the given (distinct) angles."""
    th = np.asarray(angles, dtype=float).reshape(-1)
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    gap = np.abs(np.mod(th[:, None] - th[None, :] + 0.5, 1.0) - 0.5)
    np.fill_diagonal(gap, 1.0)
    if (gap < 1e-12).any():
        raise ValueError("angles must be pairwise distinct")
    u = unit(th)
    return SegConfig((1.0 - r / 2) * u, th.copy(), r)


def collinear_obstruction(k: int) -> float:
    if k < 1:
        raise ValueError("k must be at least 1")
    return 1.0 / k


def collinear_fits(k: int, radius: float) -> bool:
    """Can k disjoint disks of this radius sit with collinear centers in the unit disk?"""
    # the line through the centers is at best a diameter; the disks use 2k*radius of it
    return 2 * k * radius <= 2.0
