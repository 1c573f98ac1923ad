"""Error measures: PSNR, relative L2, Hausdorff distances, sup-norm."""

from __future__ import annotations

import math

import numpy as np

from .errors import EmptySetError, ValidationError
from .grid import MaskGrid, ScalarGrid
from .moreau import _squared_distance_array

EXACT = "exact"


def _check_pair(a, b):
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")


def psnr(reference: ScalarGrid, candidate: ScalarGrid, peak: float = 255.0) -> float:
    """``10 log10(peak^2 / MSE)`` in dB; ``math.inf`` for identical grids."""
    _check_pair(reference, candidate)
    if not peak > 0:
        raise ValidationError("peak must be positive")
    mse = float(np.mean((reference.values - candidate.values) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def encode_value(v):
    """JSON-safe metric value: infinite PSNR becomes the tag ``"exact"``."""
    return EXACT if isinstance(v, float) and math.isinf(v) else v


def rel_l2(reference: ScalarGrid, candidate: ScalarGrid, mask: MaskGrid | None = None) -> float:
    _check_pair(reference, candidate)
    sel = np.ones(reference.shape, bool) if mask is None else mask.flags
    if mask is not None and mask.shape != reference.shape:
        raise ValidationError("mask shape differs from the grids")
    ref = reference.values[sel]
    den = float(np.linalg.norm(ref))
    if den == 0.0:
        raise ValidationError("reference has zero norm on the selected cells")
    return float(np.linalg.norm(ref - candidate.values[sel])) / den


def sup_norm_diff(a: ScalarGrid, b: ScalarGrid, relative: bool = False) -> float:
    """``||a - b||_inf``, divided by ``||a||_inf`` when ``relative``."""
    _check_pair(a, b)
    d = float(np.abs(a.values - b.values).max())
    if relative:
        scale = float(np.abs(a.values).max())
        return d / scale if scale > 0 else d
    return d


def directed_hausdorff(E: MaskGrid, F: MaskGrid) -> float:
    """``sup_{x in E} dist(x, F)`` in world units."""
    if E.is_empty() or F.is_empty():
        raise EmptySetError("Hausdorff distance needs non-empty sets")
    if E.shape != F.shape:
        raise ValidationError("masks must share a lattice")
    d2 = _squared_distance_array(F.flags, F.spacing)
    return math.sqrt(float(d2[E.flags].max()))


def hausdorff(E: MaskGrid, F: MaskGrid) -> float:
    return max(directed_hausdorff(E, F), directed_hausdorff(F, E))


def support_hausdorff_error(exact_support: MaskGrid, fmap, threshold: float = 1e-8) -> float:
    """``d_H`` between a reference support and the suplevel set of a map.

    ``threshold`` is relative to the map maximum.
    """
    grid = fmap.grid if hasattr(fmap, "grid") else fmap
    level = threshold * float(grid.values.max())
    computed = MaskGrid(grid.values >= level, grid.spacing, grid.origin)
    return hausdorff(exact_support, computed)
