"""The ten acceptance checks, shared by the test suite and ``verify all``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .balance import check_config, contact_graph, diameter_config, search_balanced, square_config
from .degree import numeric_degree_oracle, qn_family
from .forests import enumerate_forests, kernel_ladder_n4
from .geometry import (DiskConfig, build_kn_batch, build_qn_batch, ell_exact, pack_disks,
                       segments_valid_batch, tau, tau_batch)
from .geometry.constructions import qn_angles
from .pairing import dual_basis_matrix, pairing_forest_qn, permutations_fixing_one
from .segments import hourglass_params, max_perpendicular_length, trap_certify


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        late = "" if self.seconds < self.budget else f" (over time budget {self.budget:g}s)"
        return f"[{tag}] {self.number:2d}. {self.name}: {self.detail} [{self.seconds:.2f}s]{late}"


def c1_unimodular():
    dets = {n: dual_basis_matrix(n).det() for n in range(2, 7)}
    return all(abs(d) == 1 for d in dets.values()), f"dets {dets}"


def c2_oracle(grid: int = 24):
    mism = 0
    total = 0
    for n in (3, 4):
        for g in enumerate_forests(n, n - 1):
            for s in permutations_fixing_one(n):
                total += 1
                if numeric_degree_oracle(qn_family(n, s), g, grid=grid) != pairing_forest_qn(g, s):
                    mism += 1
    return mism == 0, f"{total - mism}/{total} pairs agree"


def c3_lengths():
    exact = ell_exact(1) == 2 and ell_exact(2) == Fraction(8, 5)
    n = 10 ** 6
    d = np.empty(n)
    d[0] = 2.0
    # plain loop keeps the float recursion identical to d_sequence
    v = 2.0
    for k in range(1, n):
        v = v + 1.0 / v
        d[k] = v
    idx = np.arange(1, n + 1)
    bounds = bool(np.all((2 * (idx + 1) <= d ** 2) & (d ** 2 <= 3 * (idx + 1))))
    ell = 4.0 / d[:1000]
    rho = ell[1:] / ell[:-1]
    closure = float(np.abs(ell[1:] - 4 * np.sqrt(rho * (1 - rho))).max())
    ok = exact and 4.0 / d[0] == 2.0 and 4.0 / d[1] == 1.6 and bounds and closure < 1e-10
    return ok, f"l1=2, l2=1.6 exact: {exact}; bounds up to 1e6: {bounds}; closure err {closure:.2e}"


def c4_perpendicular():
    L = max_perpendicular_length(1e-6)
    return abs(L - 1.6) <= 1e-4, f"threshold {L:.8f}"


def c5_ladder():
    want = {0.2: (0, 0, 0, 0), 0.3: (0, 0, 6, 6), 0.4: (0, 5, 11, 6), 0.5: (1, 6, 11, 6)}
    got = {r: kernel_ladder_n4(r) for r in want}
    return got == want, f"{got}"


def c6_balance(seed: int = 0):
    worst = 0.0
    ok = True
    for n in range(2, 9):
        _, res = check_config(diameter_config(n))
        ok &= res.balanced and res.residual < 1e-8
        worst = max(worst, res.residual)
    _, sq = check_config(square_config())
    ok &= sq.balanced
    rng = np.random.default_rng(seed)
    empty = 0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        rad = np.sqrt(rng.random(n)) * 0.9
        ang = rng.random(n) * 2 * np.pi
        x = np.stack([rad * np.cos(ang), rad * np.sin(ang)], 1)
        c = DiskConfig(x, 0.5 * tau(x))
        if contact_graph(c).num_edges == 0:
            empty += 1
    ok &= empty == 100
    return ok, f"diameters n=2..8 residual <= {worst:.1e}, square balanced {sq.balanced}, {empty}/100 contact-free"


def c7_search(trials: int = 10_000, seed: int = 0):
    found = {n: len(search_balanced(n, 1.0 / n - 0.01, trials, seed=seed)) for n in (3, 4, 5)}
    return all(v == 0 for v in found.values()), f"hits per n {found} over {trials} trials (evidence only)"


def c8_packing(seed: int = 0):
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 31))
        r = np.sort(rng.uniform(0.05, 1.0, k) * rng.choice([1.0, 0.1]))[::-1]
        lay = pack_disks(r)
        bad += not lay.check()
        worst = max(worst, lay.R ** 2 / float(np.sum(r ** 2)))
    return bad == 0, f"{100 - bad}/100 layouts valid, max R^2/sum r^2 = {worst:.3f} (bound 36)"


def c9_trap():
    p = hourglass_params(1.5, 0.2)
    cert = trap_certify(p)
    neg = trap_certify(p, with_obstacles=False)
    ok = p.ok() and cert.certified and not cert.reached_horizontal and neg.reached_horizontal
    return ok, (f"inequalities {p.checks()}; trapped x in [{cert.x_extent[0]:.3f}, {cert.x_extent[1]:.3f}], "
                f"angle in [{cert.theta_extent_deg[0]:.0f}, {cert.theta_extent_deg[1]:.0f}] deg; "
                f"no obstacles reaches horizontal: {neg.reached_horizontal}")


def c10_constructions(samples: int = 10_000, seed: int = 0):
    rng = np.random.default_rng(seed)
    ok = True
    notes = []
    for n in range(1, 6):
        th = rng.random((samples, n))
        centers, length = build_kn_batch(th)
        valid = segments_valid_batch(centers, th, length)
        ok &= bool(valid.all())
        notes.append(f"k{n}:{int(valid.sum())}")
    worst_tau = 0.0
    worst_angle = 0.0
    for n in range(2, 9):
        th = rng.random((samples, n - 1))
        centers = build_qn_batch(th)
        err = np.abs(tau_batch(centers) - 1.0 / n)
        worst_tau = max(worst_tau, float(err.max()))
        back = qn_angles(centers)
        diff = np.abs(np.mod(back - th + 0.5, 1.0) - 0.5)
        worst_angle = max(worst_angle, float(diff.max()))
    ok &= worst_tau < 1e-9 and worst_angle < 1e-12
    return ok, f"valid k_n {' '.join(notes)} of {samples}; q_n |tau - 1/n| <= {worst_tau:.1e}, angle err {worst_angle:.1e}"


CRITERIA: list[tuple[int, str, Callable, float]] = [
    (1, "dual-basis unimodularity", c1_unimodular, 10),
    (2, "pairing oracle agreement", c2_oracle, 60),
    (3, "length recursion", c3_lengths, 5),
    (4, "perpendicular threshold", c4_perpendicular, 60),
    (5, "n=4 kernel ladder", c5_ladder, 1),
    (6, "balance witnesses", c6_balance, 10),
    (7, "balance nonexistence evidence", c7_search, 300),
    (8, "packing bound", c8_packing, 30),
    (9, "trap certification", c9_trap, 300),
    (10, "construction validity", c10_constructions, 60),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn, budget in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # report, don't crash the whole suite
                passed, detail = False, f"error: {exc!r}"
            return CriterionResult(num, name, bool(passed), detail, time.perf_counter() - t0, budget)
    raise KeyError(number)


def run_all(numbers=None, echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    out = []
    for num, *_ in CRITERIA:
        if numbers and num not in numbers:
            continue
        res = run_criterion(num)
        if echo:
            echo(res.line())
        out.append(res)
    return out
