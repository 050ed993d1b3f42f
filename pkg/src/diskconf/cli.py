"""Command-line entry point: ``diskconf <group> <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import balance, forests, pairing, segments
from .degree import ResolutionError, numeric_degree_oracle, qn_family
from .geometry import (DiskConfig, build_hhat, build_kn, build_matching_family, build_qn, config_from_json,
                       d_value, ell, embed_scaled, pack_disks, seg_tau, tau)
from .svg import disk_svg, segment_svg, trap_svg


class CheckFailed(Exception):
    """A verified property did not hold (exit code 1)."""


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(" ", "").split(",") if t]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def parse_forest(text: str, n: int) -> forests.OrderedForest:
    """``"1-2,1-3"`` or ``"1->2,1->3"`` or a JSON forest."""
    text = text.strip()
    if text.startswith("{"):
        return forests.OrderedForest.from_json(json.loads(text))
    edges = []
    for part in text.split(","):
        if part.strip():
            i, j = part.replace("->", "-").split("-")
            edges.append((int(i), int(j)))
    return forests.OrderedForest(n, tuple(edges))


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


class Output:
    def __init__(self, args):
        self.args = args
        self.paths: list[str] = []

    def emit(self, data, csv_text: str | None = None):
        out = getattr(self.args, "out", None)
        if out and out.endswith(".csv") and csv_text is not None:
            text = csv_text
        else:
            text = json.dumps(_clean(data), indent=2, sort_keys=True, allow_nan=False) + "\n"
        if out:
            _write_atomic(out, text)
            self.paths.append(out)
        else:
            sys.stdout.write(text)

    def svg(self, text: str):
        path = getattr(self.args, "svg", None)
        if path:
            _write_atomic(path, text)
            self.paths.append(path)


# ---- forests ----

def cmd_forests_enumerate(args, out):
    fs = forests.enumerate_forests(args.n, args.j)
    out.emit({"n": args.n, "j": args.j, "count": len(fs), "forests": [g.to_json() for g in fs]})


def cmd_forests_ladder(args, out):
    dims = forests.kernel_ladder_n4(args.r)
    out.emit({"r": args.r, "kernel_dims": list(dims)})


# ---- pairing ----

def cmd_pairing_matrix(args, out):
    m = pairing.dual_basis_matrix(args.n)
    det = m.det()
    data = m.to_json()
    data["det"] = det
    out.emit(data, csv_text=m.to_csv())
    if abs(det) != 1:
        raise CheckFailed(f"determinant {det} is not +-1")


def cmd_pairing_expand(args, out):
    g = parse_forest(args.forest, args.n)
    coeffs = pairing.dual_expansion(g)
    rows = pairing.enumerate_forests(g.n, g.n - 1)
    pairs = [pairing.pair_expansion(h, coeffs) for h in rows]
    indicator = [1 if h == g else 0 for h in rows]
    data = {"forest": g.to_json(),
            "coefficients": [{"perm": list(s.images), "coeff": a} for s, a in sorted(coeffs.items(), key=lambda kv: kv[0].images)],
            "pairings": pairs, "kronecker": pairs == indicator}
    out.emit(data)
    if pairs != indicator:
        raise CheckFailed("expansion does not pair to the indicator vector")


def cmd_pairing_oracle(args, out):
    g = parse_forest(args.forest, args.n)
    sigma = pairing.Permutation(tuple(_ints(args.perm))) if args.perm else pairing.Permutation.identity(args.n)
    deg = numeric_degree_oracle(qn_family(args.n, sigma), g, grid=args.grid)
    exact = pairing.pairing_forest_qn(g, sigma)
    out.emit({"forest": g.to_json(), "perm": list(sigma.images), "numeric_degree": deg, "pairing": exact,
              "agree": deg == exact})
    if deg != exact:
        raise CheckFailed(f"numeric degree {deg} differs from pairing {exact}")


# ---- geometry ----

def cmd_geometry_ell(args, out):
    out.emit({"n": args.n, "d": d_value(args.n), "ell": ell(args.n)})


def cmd_geometry_kn(args, out):
    c = build_kn(_floats(args.angles))
    out.emit({"config": c.to_json(), "valid": c.is_valid(args.tol), "seg_tau": seg_tau(c.centers, c.angles)})
    out.svg(segment_svg(c))


def cmd_geometry_qn(args, out):
    c = build_qn(_floats(args.angles) if args.angles else [])
    out.emit({"config": c.to_json(), "valid": c.is_valid(args.tol), "tau": tau(c.centers)})
    out.svg(disk_svg(c))


def cmd_geometry_matching(args, out):
    c = build_matching_family(args.j, args.r, _floats(args.angles))
    out.emit({"config": c.to_json(), "valid": c.is_valid(args.tol), "tau": tau(c.centers)})
    out.svg(disk_svg(c))


def cmd_geometry_hhat(args, out):
    c = build_hhat(args.a, args.b, args.theta1, args.theta2)
    out.emit({"config": c.to_json(), "valid": c.is_valid(args.tol), "tau": tau(c.centers)})
    out.svg(disk_svg(c))


def cmd_geometry_pack(args, out):
    radii = sorted(_floats(args.radii), reverse=True)
    lay = pack_disks(radii)
    data = lay.to_json()
    data["bound_holds"] = lay.bound_holds()
    data["valid"] = lay.check()
    out.emit(data)
    if not lay.check():
        raise CheckFailed("packed layout violates its invariants")


def cmd_geometry_embed(args, out):
    inner = _read_config(args.inner)
    if not isinstance(inner, DiskConfig):
        raise ValueError("embed needs a disk configuration")
    placed, radius = embed_scaled(inner, _floats(args.center), args.scale, _ints(args.labels))
    out.emit({"radius": radius, "placed": {str(k): [float(v[0]), float(v[1])] for k, v in sorted(placed.items())}})


# ---- balance ----

def _read_config(path: str):
    with open(path) as fh:
        data = json.load(fh)
    if "config" in data and "kind" not in data:
        data = data["config"]
    return config_from_json(data)


def _load_disk_config(args) -> DiskConfig:
    if args.diameter:
        return balance.diameter_config(args.diameter)
    if args.square:
        return balance.square_config()
    if not args.config:
        raise ValueError("give --config FILE, --diameter N or --square")
    c = _read_config(args.config)
    if not isinstance(c, DiskConfig):
        raise ValueError("balance needs a disk configuration")
    return c


def cmd_balance_check(args, out):
    c = _load_disk_config(args)
    g, res = balance.check_config(c, args.tol)
    out.emit({"config": c.to_json(), "edges": g.to_json(), **res.to_json()})
    out.svg(disk_svg(c, g))


def cmd_balance_search(args, out):
    hits = balance.search_balanced(args.n, args.r, args.trials, seed=args.seed)
    out.emit({"n": args.n, "r": args.r, "trials": args.trials, "seed": args.seed,
              "found": [h.to_json() for h in hits]})


def cmd_balance_classify(args, out):
    with open(args.configs) as fh:
        data = json.load(fh)
    items = data["found"] if isinstance(data, dict) and "found" in data else data
    configs = [config_from_json(d) for d in items]
    report = balance.classify_small_radius(args.n, configs)
    out.emit({"n": args.n, "threshold": 3.0 / (2 * args.n + 3), "report": report})
    if any(r["violation"] for r in report):
        raise CheckFailed("a balanced configuration below the threshold is not a diameter")


# ---- segments ----

def cmd_segments_rcrit2(args, out):
    L = segments.max_perpendicular_length(args.tol, seed=args.seed)
    out.emit({"tolerance": args.tol, "threshold": L})


def cmd_segments_hourglass(args, out):
    p = segments.hourglass_params(args.r, args.delta)
    out.emit(p.to_json())
    out.svg(trap_svg(p))


def cmd_segments_trap(args, out):
    p = segments.hourglass_params(args.r, args.delta)
    grid = segments.PoseGrid(dx=args.dx, dtheta_deg=args.dtheta)
    cert = segments.trap_certify(p, grid, with_obstacles=not args.no_obstacles,
                                 delta=args.check_delta)
    out.emit({"params": p.to_json(), "certificate": cert.to_json()})
    out.svg(trap_svg(p, cert))
    if not args.no_obstacles and not cert.certified:
        raise CheckFailed(f"trap not certified: {cert.status} {cert.message}")


def cmd_segments_midpointbox(args, out):
    m = segments.midpoint_box_sets(args.eps, certify=not args.no_certify)
    out.emit(m.to_json())


def cmd_verify_all(args, out):
    from .acceptance import run_all
    numbers = _ints(args.only) if args.only else None
    results = run_all(numbers, echo=lambda s: print(s, file=sys.stderr, flush=True))
    out.emit({"results": [{"number": r.number, "name": r.name, "passed": r.ok, "detail": r.detail}
                          for r in results]})
    if not all(r.ok for r in results):
        raise CheckFailed("some acceptance criteria failed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diskconf", description=__doc__)
    def common():
        # built fresh per subcommand: parent actions are shared, so set_defaults
        # on one subcommand would otherwise leak into the others
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--out", help="write the JSON (or .csv) result here instead of stdout")
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--tol", type=float, default=1e-9)
        c.add_argument("--trials", type=int, default=1000)
        c.add_argument("--svg", help="also write an SVG picture")
        c.add_argument("--report", help="write a run report (JSON) here")
        return c

    groups = ap.add_subparsers(dest="group", required=True)

    def add(group, name, fn, help_text):
        p = group.add_parser(name, parents=[common()], help=help_text)
        p.set_defaults(func=fn)
        return p

    g = groups.add_parser("forests").add_subparsers(dest="cmd", required=True)
    p = add(g, "enumerate", cmd_forests_enumerate, "list ordered forests")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p = add(g, "ladder", cmd_forests_ladder, "kernel dimensions for n = 4")
    p.add_argument("--r", type=float, required=True)

    g = groups.add_parser("pairing").add_subparsers(dest="cmd", required=True)
    p = add(g, "matrix", cmd_pairing_matrix, "dual-basis pairing matrix")
    p.add_argument("--n", type=int, required=True)
    p = add(g, "expand", cmd_pairing_expand, "dual element of a forest in the torus basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forest", required=True, help='edges like "1-2,1-3"')
    p = add(g, "oracle", cmd_pairing_oracle, "numeric degree against the closed form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forest", required=True)
    p.add_argument("--perm", help="images of 1..n, e.g. 1,3,2")
    p.add_argument("--grid", type=int, default=24)

    g = groups.add_parser("geometry").add_subparsers(dest="cmd", required=True)
    p = add(g, "ell", cmd_geometry_ell, "diameter and length sequences")
    p.add_argument("--n", type=int, required=True)
    p = add(g, "kn", cmd_geometry_kn, "segment family k_n")
    p.add_argument("--angles", required=True, help="comma-separated angles in turns")
    p = add(g, "qn", cmd_geometry_qn, "disk family q_n")
    p.add_argument("--angles", default="", help="n-1 comma-separated angles in turns")
    p = add(g, "matching", cmd_geometry_matching, "j spinning pairs")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--angles", required=True)
    p = add(g, "hhat", cmd_geometry_hhat, "a -> b swap family at r = 1/3")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--theta2", type=float, default=0.0)
    p = add(g, "pack", cmd_geometry_pack, "greedy disk packing")
    p.add_argument("--radii", required=True)
    p = add(g, "embed", cmd_geometry_embed, "scaled copy of a configuration")
    p.add_argument("--inner", required=True, help="disk configuration JSON file")
    p.add_argument("--center", required=True)
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--labels", required=True)

    g = groups.add_parser("balance").add_subparsers(dest="cmd", required=True)
    for name, fn, text in (("check", cmd_balance_check, "contact graph and balance test"),):
        p = add(g, name, fn, text)
        p.add_argument("--config")
        p.add_argument("--diameter", type=int)
        p.add_argument("--square", action="store_true")
        p.set_defaults(tol=balance.CONTACT_TOL)
    p = add(g, "search", cmd_balance_search, "multistart search for balanced configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p = add(g, "classify", cmd_balance_classify, "check hits against the small-radius classification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--configs", required=True, help="JSON list of configs or a search result")

    g = groups.add_parser("segments").add_subparsers(dest="cmd", required=True)
    p = add(g, "rcrit2", cmd_segments_rcrit2, "longest perpendicular pair")
    p.set_defaults(tol=1e-6)
    p = add(g, "hourglass", cmd_segments_hourglass, "trap parameters")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p = add(g, "trap", cmd_segments_trap, "grid search certificate of trapping")
    p.add_argument("--r", type=float, default=1.5)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--check-delta", type=float, help="strip width to check against (default: delta)")
    p.add_argument("--dx", type=float, default=0.005)
    p.add_argument("--dtheta", type=float, default=1.0, help="angle step in degrees")
    p.add_argument("--no-obstacles", action="store_true")
    p = add(g, "midpointbox", cmd_segments_midpointbox, "three-strip obstacle set")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--no-certify", action="store_true")

    g = groups.add_parser("verify").add_subparsers(dest="cmd", required=True)
    p = add(g, "all", cmd_verify_all, "run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = Output(args)
    t0 = time.perf_counter()
    status = 0
    summary = "ok"
    try:
        args.func(args, out)
    except CheckFailed as exc:
        status, summary = 1, str(exc)
        print(f"check failed: {exc}", file=sys.stderr)
    except (ValueError, KeyError, ResolutionError, OverflowError, OSError) as exc:
        status, summary = 2, str(exc)
        print(f"error: {exc}", file=sys.stderr)
    if args.report:
        params = {k: v for k, v in vars(args).items() if k not in ("func", "report")}
        report = {"command": f"{args.group} {args.cmd}", "parameters": params, "seed": args.seed,
                  "outputs": out.paths, "wall_time": time.perf_counter() - t0,
                  "status": "pass" if status == 0 else "fail", "summary": summary}
        _write_atomic(args.report, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
