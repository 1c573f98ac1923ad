"""Desk-scale benchmarks with generated inputs.

Each function returns a plain dict so the CLI can dump it as JSON.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .cct import char_grid, upper_transform
from .features import mma, mu1, mu2, stable_ridge
from .grid import SCHEMES, MaskGrid, Padding, ScalarGrid, TransformParams
from .metrics import hausdorff, psnr
from .restore import denoise_salt_pepper


def singleton_exact(lam: float, dist):
    """Closed-form upper transform of a one-point set: ``lam (1/sqrt(lam) - |x|)^2`` inside the ball."""
    r = 1.0 / math.sqrt(lam)
    return np.where(dist <= r, lam * (r - dist) ** 2, 0.0)


def singleton_setup(lam: float = 0.01, size: int = 41, h: float = 1.0):
    c = size // 2
    flags = np.zeros((size, size), bool)
    flags[c, c] = True
    origin = -c * h
    mask = MaskGrid(flags, h, origin)
    X, Y = char_grid(mask).coordinates()
    exact = singleton_exact(lam, np.hypot(X, Y))
    return mask, exact


def support_of(values, spacing, origin, rel=1e-8):
    return MaskGrid(values >= rel * float(values.max()), spacing, origin)


def bench_singleton(lam: float = 0.01, size: int = 41, dual_spacing: float = 1e-3,
                    schemes=SCHEMES, stencil_radius: int = 1) -> dict:
    """Upper transform of a one-cell set for every scheme: sup error, support error, time."""
    mask, exact = singleton_setup(lam, size)
    chi = char_grid(mask)
    exact_support = support_of(exact, mask.spacing, mask.origin)
    rows = {}
    for scheme in schemes:
        params = TransformParams(lam, scheme=scheme, dual_spacing=dual_spacing,
                                 stencil_radius=stencil_radius)
        t0 = time.perf_counter()
        up = upper_transform(chi, params)
        dt = time.perf_counter() - t0
        rows[params.scheme] = {
            "e_linf": float(np.abs(up.values - exact).max()),
            "e_h": hausdorff(exact_support, support_of(up.values, up.spacing, up.origin)),
            "seconds": dt,
        }
    return {"lambda": lam, "size": size, "dual_spacing": dual_spacing, "schemes": rows}


def quadrant_setup(h: float, half_width: float = 3.0):
    n = int(round(2 * half_width / h)) + 1
    x = -half_width + h * np.arange(n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return x, X, Y


def bench_corner(lam: float = 8.0, tau: float = 1.0, h: float = 0.125) -> dict:
    """Stable-ridge heights on a straight edge and at a right-angle corner tip."""
    x, X, Y = quadrant_setup(h)
    origin = float(x[0])
    params = TransformParams(lam, tau)
    half = stable_ridge(MaskGrid(X <= 0, h, origin), params).values
    edge_cells = (np.abs(X) < h / 2) & (np.abs(Y) <= 1.5)
    corner = stable_ridge(MaskGrid((X <= 0) & (Y <= 0), h, origin), params).values
    c = int(np.argmin(np.abs(x)))
    return {
        "lambda": lam,
        "tau": tau,
        "h": h,
        "edge_max": float(half[edge_cells].max()),
        "mu1": mu1(lam, tau),
        "corner_tip": float(corner[c, c]),
        "mu2": mu2(1.0, lam, tau),
    }


def bench_mma_two_point(a_cells: int = 10, lams=(1.0, 8.0), h: float = 1.0) -> dict:
    """Medial-axis map at the midpoint of two points ``2a`` apart; the closed form is ``a^2``."""
    n = 6 * a_cells + 1
    c = n // 2
    flags = np.zeros((n, n), bool)
    flags[c - a_cells, c] = flags[c + a_cells, c] = True
    mask = MaskGrid(flags, h, -c * h)
    a = a_cells * h
    out = {}
    for lam in lams:
        v = mma(mask, TransformParams(lam)).values
        out[str(lam)] = {"midpoint": float(v[c, c]), "expected": a * a}
    return {"a": a, "h": h, "values": out}


def synthetic_image(size: int = 512, seed: int = 0) -> ScalarGrid:
    """Piecewise-smooth 8-bit test card with values in ``[1, 254]``."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, size)
    X, Y = np.meshgrid(t, t, indexing="ij")
    img = 90 + 60 * np.sin(3 * np.pi * X) * np.cos(2 * np.pi * Y)
    for _ in range(6):
        cx, cy, r = rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85), rng.uniform(0.05, 0.2)
        img += rng.uniform(-60, 60) * ((X - cx) ** 2 + (Y - cy) ** 2 < r * r)
    img += 30 * (X + Y > 1.2)
    return ScalarGrid(np.clip(np.rint(img), 1, 254))


def salt_and_pepper(image: ScalarGrid, density: float, seed: int = 0, low=0.0, high=255.0):
    """Corrupt a fraction ``density`` of cells with ``low``/``high`` at equal odds."""
    rng = np.random.default_rng(seed)
    hit = rng.random(image.shape) < density
    salt = rng.random(image.shape) < 0.5
    vals = image.values.copy()
    vals[hit] = np.where(salt[hit], high, low)
    return image.with_values(vals), MaskGrid.like(image, hit)


def bench_sp_noise(image: ScalarGrid | None = None, density: float = 0.7, lam: float = 20.0,
                   level_m: float = 1e13, pad: int = 2, seed: int = 0,
                   schemes=("moreau-parabola", "oberman")) -> dict:
    """Salt-and-pepper restoration PSNR per scheme, with the noise positions known."""
    image = image if image is not None else synthetic_image(seed=seed)
    noisy, mask = salt_and_pepper(image, density, seed)
    out = {"density": density, "lambda": lam, "level_m": level_m, "pad": pad,
           "psnr_noisy": psnr(image, noisy), "schemes": {}}
    for scheme in schemes:
        params = TransformParams(lam, level_m=level_m, scheme=scheme, padding=Padding("mirror", pad))
        t0 = time.perf_counter()
        restored = denoise_salt_pepper(noisy, mask, params)
        out["schemes"][params.scheme] = {
            "psnr": psnr(image, restored),
            "seconds": time.perf_counter() - t0,
        }
    return out
