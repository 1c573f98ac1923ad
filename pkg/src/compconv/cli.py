"""Command-line front end.

Exit codes: 0 success, 2 invalid input or usage, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import bench, cct, features, io, metrics, restore
from .errors import NumericalError, ValidationError
from .grid import Padding, SampleField, TransformParams
from .moreau import squared_distance_transform

SCHEME_CHOICES = ("moreau", "iter-moreau", "oberman", "biconj",
                  "moreau-parabola", "moreau-iterative", "biconjugate")


def _common(p, need_in=True):
    p.add_argument("--in", dest="inp", required=need_in, help="input grid file")
    p.add_argument("--out", help="output grid file")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--format", choices=io.FORMATS, help="override the format guessed from extensions")


def _transform_flags(p, lam_default=None, lam_required=True):
    p.add_argument("--lambda", dest="lam", type=float, default=lam_default,
                   required=lam_required and lam_default is None)
    p.add_argument("--tau", type=float)
    p.add_argument("--level-m", dest="level_m", type=float)
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default="moreau")
    p.add_argument("--pad", type=int, default=0, help="mirror-padding width in cells")
    p.add_argument("--dual-h", dest="dual_h", type=float, default=1e-3, help="dual slope spacing (biconj)")
    p.add_argument("--stencil-radius", type=int, default=1, help="stencil radius (oberman)")
    p.add_argument("--tol", type=float, help="L2 stopping tolerance (oberman)")
    p.add_argument("--max-iters", type=int)
    p.add_argument("--boundary", choices=("truncate", "extend"), default="truncate")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="compconv", description="Compensated convex transforms on grids")
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("cct", help="lower/upper/mixed transforms").add_subparsers(dest="op", required=True)
    for name in ("lower", "upper", "mixed-ul", "mixed-lu"):
        p = g.add_parser(name)
        _common(p)
        _transform_flags(p)

    g = sub.add_parser("feature", help="feature maps").add_subparsers(dest="op", required=True)
    for name in ("ridge", "valley", "edge", "sr", "sv", "se", "d2", "corner", "intersect", "mma"):
        p = g.add_parser(name)
        _common(p, need_in=False)
        _transform_flags(p)
        p.add_argument("--mask", help="set K (nonzero cells); defaults to --in")
        if name == "intersect":
            p.add_argument("--markers", help="CSV of local-maximum marker cells")
            p.add_argument("--rho", type=float, default=0.5, help="marker level relative to the max")
    p = g.add_parser("suplevel")
    _common(p)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--relative", action="store_true", help="threshold is a fraction of the map max")

    g = sub.add_parser("restore", help="interpolation and restoration").add_subparsers(dest="op", required=True)
    for name, lam in (("denoise", None), ("inpaint", 15.0), ("interp", None), ("smooth-interp", None)):
        p = g.add_parser(name)
        _common(p)
        _transform_flags(p, lam_default=lam, lam_required=name != "denoise")
        p.add_argument("--mask", help="noise/damage mask, or the sample set for interp")
        p.add_argument("--ref", help="clean reference for PSNR and relative errors")
        if name == "denoise":
            p.set_defaults(pad=2)

    g = sub.add_parser("dist", help="distance transforms").add_subparsers(dest="op", required=True)
    p = g.add_parser("edt", help="squared Euclidean distance to the nonzero cells")
    _common(p)

    g = sub.add_parser("metric", help="error measures").add_subparsers(dest="op", required=True)
    for name in ("psnr", "rel-l2", "hausdorff", "ehaus"):
        p = g.add_parser(name)
        _common(p)
        p.add_argument("--other", help="second operand")
        p.add_argument("--mask", help="second operand for psnr/hausdorff/ehaus, cell filter for rel-l2")
        p.add_argument("--peak", type=float, default=255.0)
        p.add_argument("--threshold", type=float, default=1e-8, help="relative support level (ehaus)")

    g = sub.add_parser("bench", help="desk-scale benchmarks").add_subparsers(dest="op", required=True)
    p = g.add_parser("singleton")
    p.add_argument("--lambda", dest="lam", type=float, default=0.01)
    p.add_argument("--size", type=int, default=41)
    p.add_argument("--dual-h", dest="dual_h", type=float, default=1e-3)
    p.add_argument("--report")
    p = g.add_parser("corner")
    p.add_argument("--lambda", dest="lam", type=float, default=8.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--h", type=float, default=0.125)
    p.add_argument("--report")
    p = g.add_parser("mma-two-point")
    p.add_argument("--a-cells", type=int, default=10)
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", default=[1.0, 8.0])
    p.add_argument("--report")
    p = g.add_parser("sp-noise")
    p.add_argument("--in", dest="inp", help="8-bit image; a generated test card by default")
    p.add_argument("--density", type=float, default=0.7)
    p.add_argument("--lambda", dest="lam", type=float, default=20.0)
    p.add_argument("--level-m", dest="level_m", type=float, default=1e13)
    p.add_argument("--pad", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    return ap


def denoise_lambda(density: float) -> float:
    """Default scale for impulse noise: 20 up to 80% corruption, 10 up to 95%, else 2."""
    if density <= 0.8:
        return 20.0
    return 10.0 if density <= 0.95 else 2.0


def _params(a) -> TransformParams:
    return TransformParams(
        a.lam,
        tau=a.tau,
        level_m=a.level_m,
        scheme=a.scheme,
        padding=Padding("mirror" if a.pad > 0 else "none", a.pad),
        dual_spacing=a.dual_h,
        stencil_radius=a.stencil_radius,
        tol=a.tol,
        max_iters=a.max_iters,
        boundary=a.boundary,
    )


def _need(a, name):
    v = getattr(a, name, None)
    if v is None:
        raise ValidationError(f"--{name.replace('_', '-')} is required here")
    return v


def _write(a, grid):
    if a.out:
        io.write_grid(grid, a.out, a.format)
        return [a.out]
    return []


def _run_cct(a):
    params = _params(a)
    g = io.read_grid(a.inp, a.format)
    fn = {"lower": cct.lower_transform, "upper": cct.upper_transform,
          "mixed-ul": cct.mixed_ul, "mixed-lu": cct.mixed_lu}[a.op]
    out = fn(g, params)
    return {"params": params.as_dict(), "grids": [a.inp] + _write(a, out)}


_MASK_FEATURES = {
    "sr": features.stable_ridge,
    "sv": features.stable_valley,
    "se": features.stable_edge,
    "d2": features.d2_lambda,
    "corner": features.interior_corner_map,
    "intersect": features.intersection_transform,
    "mma": features.mma,
}


def _run_feature(a):
    if a.op == "suplevel":
        g = io.read_grid(a.inp, a.format)
        level = a.threshold * float(g.values.max()) if a.relative else a.threshold
        m = features.suplevel(g, level)
        if a.out:
            io.write_mask(m, a.out, a.format)
        return {"params": {"threshold": a.threshold, "relative": a.relative, "level": level},
                "grids": [a.inp] + ([a.out] if a.out else []),
                "results": {"cells": m.count()}}
    params = _params(a)
    if a.op in ("ridge", "valley", "edge"):
        g = io.read_grid(_need(a, "inp"), a.format)
        fmap = getattr(features, a.op)(g, params)
        src = a.inp
    else:
        src = a.mask or _need(a, "inp")
        fmap = _MASK_FEATURES[a.op](io.read_mask(src, a.format), params)
    grids = [src]
    if a.out:
        if io.guess_format(a.out) == "fgrid" and a.format in (None, "fgrid"):
            io.write_feature_map(fmap, a.out)
        else:
            io.write_grid(fmap.grid, a.out, a.format)
        grids.append(a.out)
    results = {"kind": fmap.kind, "max": float(fmap.values.max()), "min": float(fmap.values.min())}
    if a.op == "intersect":
        marks = features.intersection_markers(fmap, a.rho)
        results["markers"] = marks.tolist()
        if a.markers:
            io.write_markers(marks, a.markers)
            grids.append(a.markers)
    return {"params": params.as_dict(), "grids": grids, "results": results}


def _run_restore(a):
    img = io.read_grid(a.inp, a.format)
    if a.lam is None:
        given = io.read_mask(a.mask, a.format) if a.mask else restore.detect_extreme_values(img)
        a.lam = denoise_lambda(given.count() / given.flags.size)
    params = _params(a)
    if a.op in ("interp", "smooth-interp"):
        mask = io.read_mask(_need(a, "mask"), a.format)
        sample = SampleField.from_grid(img, mask)
        fn = restore.average_transform if a.op == "interp" else restore.smooth_average_transform
        out = fn(sample, params)
    else:
        if a.mask:
            mask = io.read_mask(a.mask, a.format)
        elif a.op == "denoise":
            mask = restore.detect_extreme_values(img)
        else:
            raise ValidationError("--mask is required for inpaint")
        fn = restore.denoise_salt_pepper if a.op == "denoise" else restore.inpaint
        out = fn(img, mask, params)
        mask = ~mask
    results = {}
    if mask.count():
        results["eps_K"] = _safe_rel(img, out, mask)
    if a.ref:
        ref = io.read_grid(a.ref, a.format)
        results["psnr"] = metrics.encode_value(metrics.psnr(ref, out))
        results["eps"] = _safe_rel(ref, out, None)
    grids = [a.inp] + ([a.mask] if a.mask else []) + ([a.ref] if a.ref else [])
    return {"params": params.as_dict(), "grids": grids + _write(a, out), "results": results}


def _safe_rel(ref, cand, mask):
    try:
        return metrics.rel_l2(ref, cand, mask)
    except ValidationError:
        return float(np.abs(ref.values - cand.values).max())


def _run_dist(a):
    m = io.read_mask(a.inp, a.format)
    d2 = squared_distance_transform(m)
    return {"params": {}, "grids": [a.inp] + _write(a, d2), "results": {"max": float(d2.values.max())}}


def _run_metric(a):
    second = a.other or a.mask
    if a.op == "psnr":
        value = metrics.psnr(io.read_grid(a.inp, a.format), io.read_grid(_need_second(second), a.format), a.peak)
        params = {"peak": a.peak}
    elif a.op == "rel-l2":
        mask = io.read_mask(a.mask, a.format) if (a.mask and a.other) else None
        value = metrics.rel_l2(io.read_grid(a.inp, a.format), io.read_grid(_need_second(a.other), a.format), mask)
        params = {}
    elif a.op == "hausdorff":
        value = metrics.hausdorff(io.read_mask(a.inp, a.format), io.read_mask(_need_second(second), a.format))
        params = {}
    else:
        value = metrics.support_hausdorff_error(
            io.read_mask(_need_second(second), a.format), io.read_grid(a.inp, a.format), a.threshold
        )
        params = {"threshold": a.threshold}
    grids = [a.inp] + [p for p in (a.other, a.mask) if p]
    return {"metric": a.op, "value": metrics.encode_value(value), "params": params, "grids": grids}


def _need_second(path):
    if not path:
        raise ValidationError("this metric needs a second operand (--other or --mask)")
    return path


def _run_bench(a):
    if a.op == "singleton":
        res = bench.bench_singleton(a.lam, a.size, a.dual_h)
    elif a.op == "corner":
        res = bench.bench_corner(a.lam, a.tau, a.h)
    elif a.op == "mma-two-point":
        res = bench.bench_mma_two_point(a.a_cells, tuple(a.lam))
    else:
        img = io.read_grid(a.inp) if a.inp else None
        res = bench.bench_sp_noise(img, a.density, a.lam, a.level_m, a.pad, a.seed)
    return {"params": {}, "grids": [a.inp] if getattr(a, "inp", None) else [], "results": res}


_RUNNERS = {
    "cct": _run_cct,
    "feature": _run_feature,
    "restore": _run_restore,
    "dist": _run_dist,
    "metric": _run_metric,
    "bench": _run_bench,
}


def _finite(obj):
    # JSON has no infinities; only PSNR can produce one and it is tagged
    if isinstance(obj, float) and not math.isfinite(obj):
        return metrics.EXACT if obj > 0 else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def run(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        report = _RUNNERS[a.group](a)
    except ValidationError as exc:
        print(f"compconv: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"compconv: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"compconv: numerical failure: {exc}", file=sys.stderr)
        return 3
    report = {"command": f"{a.group} {a.op}", **report, "seconds": time.perf_counter() - t0}
    text = json.dumps(_finite(report), indent=2, sort_keys=True)
    if a.report:
        with open(a.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
