"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 degeneracy.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Sequence

from . import __version__
from . import io
from .analysis import (
    ContinuityReport,
    curvature_analysis,
    g1_check,
    network_edges,
    objective,
    offset,
    optimize_scales,
    pn_verify,
    ridge_detect,
    tessellate,
)
from .analysis.curvature import EPS_RIDGE, RESOLUTION
from .errors import DegeneracyError, InputError, NonAdjacentError
from .patchwork import EPS_POLE, interpolate
from .polypn import pn_solutions

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


def _map(fn: Callable, items: Sequence, jobs: int) -> List:
    """Order-preserving map, optionally over a process pool."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _outdir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {out}: {exc}") from exc
    return out


def _verify_patches(cells, patches, samples: int, tol: float, jobs: int):
    """PN certificates per patch and G1 reports per interior edge."""
    certs = _map(pn_verify, patches, jobs)
    by_cell = dict(zip(cells, patches))
    edges = []
    for a, b, edge in network_edges(cells):
        try:
            rep = g1_check(by_cell[a], by_cell[b], edge, samples=samples, tol=tol)
        except NonAdjacentError:
            # neighbours in the bundle that no longer meet: a failed check
            rep = ContinuityReport(edge, samples, False, False, math.inf, math.inf, tol)
        rep.label = f"{a}-{b}"
        edges.append(rep)
    return certs, edges


def _write_meshes(out: Path, cells, patches, res: int, suffix: str = "") -> None:
    for cell, p in zip(cells, patches):
        io.export_obj(tessellate(p, res), out / f"patch_{cell[0]}_{cell[1]}{suffix}.obj")


def _report_verification(args, certs, edges) -> bool:
    ok = True
    for c in certs:
        _say(args, f"{c.patch_id}: {c.verdict} (grid {c.grid_shape[0]}x{c.grid_shape[1]})")
        ok &= c.ok
    for e in edges:
        _say(args, f"edge {e.label}: {'G1' if e.passed else 'NOT G1'} "
                   f"(dx={e.max_position_deviation:.3g}, angle={e.max_normal_angle:.3g})")
        ok &= e.passed
    return ok


def cmd_interpolate(args) -> int:
    grid = io.load_grid(args.input, check_pole=False)
    rotation = None
    if args.auto_rotate:
        grid, rotation = io.auto_rotate(grid, args.eps_pole, args.rotation_tol)
    grid.check_pole(args.eps_pole)
    if args.scales:
        grid = grid.with_scales(io.load_scales(args.scales))
    network, patches = interpolate(grid)
    cells = network.cells
    plist = [patches[c] for c in cells]
    out = _outdir(args.output)
    entries = [io.BundleEntry(c, patches[c], network.patches[c].tensor) for c in cells]
    bundle = io.PatchBundle(entries, io.make_provenance(grid, rotation))
    io.export_bundle(bundle, out / "bundle.json")
    _write_meshes(out, cells, plist, args.samples)
    certs, edges = _verify_patches(cells, plist, args.g1_samples, args.tol, args.jobs)
    ok = _report_verification(args, certs, edges)
    io.export_report(
        {"patches": len(cells), "ferguson_curves": network.ferguson_count,
         "certificates": certs, "continuity": edges},
        out / "report.json",
    )
    _say(args, f"{len(cells)} patches, {network.ferguson_count} boundary cubics -> {out}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_offset(args) -> int:
    bundle = io.load_bundle(args.bundle)
    d = io.parse_number(args.distance, "--distance")
    if d < 0:
        raise InputError("--distance must be non-negative; use --side to choose the direction")
    side = "+" if args.side == "plus" else "-"
    entries = [io.BundleEntry(e.cell, offset(e.patch, d, side), e.coons) for e in bundle.entries]
    prov = dict(bundle.provenance)
    prov["offset"] = io.fmt(d if side == "+" else -d)
    out = _outdir(args.output)
    io.export_bundle(io.PatchBundle(entries, prov), out / "bundle.json")
    _write_meshes(out, [e.cell for e in entries], [e.patch for e in entries], args.samples)
    _say(args, f"offset {len(entries)} patches by {args.side} {d} -> {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    bundle = io.load_bundle(args.bundle)
    certs, edges = _verify_patches(bundle.cells, bundle.patches, args.g1_samples, args.tol, args.jobs)
    ok = _report_verification(args, certs, edges)
    if args.report:
        io.export_report({"certificates": certs, "continuity": edges, "passed": ok}, args.report)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_analyze(args) -> int:
    bundle = io.load_bundle(args.bundle)
    reports, grids = [], []
    for p in bundle.patches:
        grid = curvature_analysis(p, args.resolution)
        rep = ridge_detect(grid, args.ridge_eps)
        grids.append(grid)
        reports.append(rep)
        finite = grid.detM[~grid.degenerate]
        rng = f"[{finite.min():.4g}, {finite.max():.4g}]" if finite.size else "n/a"
        _say(args, f"{rep.patch_id}: {rep.verdict}; det M in {rng}; {len(rep.flags)} flags")
    obj = objective(bundle.patches)
    _say(args, f"objective: {obj.value:.6g} ({obj.nonfinite} non-finite samples)")
    if args.output:
        samples = {
            g.patch_id: [
                {"u": s.u, "v": s.v, "detM": s.detM, "eigenvalues": list(s.eigenvalues),
                 "K": s.gaussK, "degenerate": s.degenerate}
                for s in g.samples()
            ]
            for g in grids
        }
        io.export_report(
            {"ridges": reports, "objective": obj.value, "nonfinite": obj.nonfinite,
             "resolution": args.resolution, "samples": samples},
            args.output,
        )
    return EXIT_OK


def _bounds(text: str):
    try:
        lo, hi = (float(Fraction(t)) for t in text.split(","))
    except ValueError as exc:
        raise InputError(f"--bounds expects lo,hi, got {text!r}") from exc
    return lo, hi


def cmd_optimize(args) -> int:
    grid = io.load_grid(args.input, eps_pole=args.eps_pole)
    res = optimize_scales(grid, _bounds(args.bounds), budget=args.budget, resolution=args.resolution)
    out = Path(args.output)
    io.export_report({"tangent_scales": io.scales_to_json(res.scales), **res.as_dict()}, out)
    _say(args, f"objective {res.objective_before:.6g} -> {res.objective_after:.6g} "
               f"after {res.evaluations} evaluations"
               + (" (budget exhausted)" if res.budget_exhausted else "") + f"; scales -> {out}")
    return EXIT_OK


def cmd_pnsolve(args) -> int:
    N = io.load_field(args.field)
    rep = pn_solutions(N, args.ell)
    rows, cols = rep.system.shape
    _say(args, f"system: {rows} equations x {cols} unknowns (k={rep.system.k}, ell={args.ell})")
    _say(args, f"nullspace dimension: {rep.nullspace_dim}; degenerate basis pairs: {rep.degenerate}")
    results = []
    ok = True
    for n, s in enumerate(rep.surfaces):
        cert = pn_verify(s.to_patch(f"surface_{n}"))
        ok &= cert.ok
        _say(args, f"surface_{n}: f = {s.f}; {cert.verdict}")
        results.append({
            "x": [io.poly_to_json(c) for c in s.x],
            "f": io.poly_to_json(s.f),
            "certificate": cert,
        })
    if args.output:
        io.export_report({**rep.as_dict(), "results": results}, args.output)
    if not rep.surfaces:
        _say(args, "no surface with cross(x_u, x_v) != 0 at this degree")
        return EXIT_DEGENERATE
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pnpatch", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-q", "--quiet", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common_verify(p):
        p.add_argument("--g1-samples", type=int, default=101)
        p.add_argument("--tol", type=float, default=1e-12, help="floating-point tolerance for G1")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for certification")

    p = sub.add_parser("interpolate", help="grid file -> bundle, meshes and reports")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--samples", type=int, default=16, help="mesh resolution per patch")
    p.add_argument("--scales")
    p.add_argument("--auto-rotate", action="store_true")
    p.add_argument("--rotation-tol", type=float, default=io.ROTATION_TOL,
                   help="accuracy of the rational rotation; coarser values give smaller numbers")
    p.add_argument("--eps-pole", type=float, default=EPS_POLE)
    common_verify(p)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("offset", help="offset every patch of a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--distance", required=True)
    p.add_argument("--side", choices=("plus", "minus"), default="plus")
    p.add_argument("--output", required=True)
    p.add_argument("--samples", type=int, default=16)
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("verify", help="exact PN certificates and G1 report")
    p.add_argument("--bundle", required=True)
    p.add_argument("--report")
    common_verify(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="curvature samples and ridge report")
    p.add_argument("--bundle", required=True)
    p.add_argument("--resolution", type=int, default=RESOLUTION)
    p.add_argument("--ridge-eps", type=float, default=EPS_RIDGE)
    p.add_argument("--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", help="tune tangent scales against ridges")
    p.add_argument("--input", required=True)
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--bounds", default="0.25,2")
    p.add_argument("--resolution", type=int, default=24)
    p.add_argument("--eps-pole", type=float, default=EPS_POLE)
    p.add_argument("--output", default="scales.json")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("pnsolve", help="polynomial PN surfaces for a Pythagorean field")
    p.add_argument("--field", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_pnsolve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
