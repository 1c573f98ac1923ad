"""Singularity extractors built from the compensated convex transforms.

Maps of sets take a :class:`MaskGrid` and work on its unit-amplitude
characteristic function, so the closed-form heights (``mu1``, ``mu2``, the
value 1/2 at regular points) apply unchanged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cct import char_grid, lower_transform, upper_transform
from .errors import DegenerateParametersError, EmptySetError, ValidationError
from .grid import MaskGrid, ScalarGrid, TransformParams
from .moreau import _squared_distance_array

KINDS = (
    "ridge",
    "valley",
    "edge",
    "stable_ridge",
    "stable_valley",
    "stable_edge",
    "d2",
    "interior_corner",
    "intersection",
    "mma",
)


@dataclass(frozen=True, eq=False)
class FeatureMap:
    grid: ScalarGrid
    kind: str
    params: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown feature kind {self.kind!r}")

    @property
    def values(self):
        return self.grid.values


def _fmap(values, like, kind, params: TransformParams, **extra):
    p = params.as_dict()
    p.update(extra)
    return FeatureMap(like.with_values(values), kind, p)


def _chi(mask: MaskGrid) -> ScalarGrid:
    if mask.is_empty():
        raise EmptySetError("feature maps of sets need a non-empty mask")
    return char_grid(mask, 1.0)


def _lam(params, lam):
    return params.replace(lam=lam)


# -- ridge / valley / edge ---------------------------------------------------


def ridge(g: ScalarGrid, params: TransformParams) -> FeatureMap:
    """``f - C^l_lam(f)``, nonnegative, peaks on concave kinks."""
    return _fmap(np.maximum(g.values - lower_transform(g, params).values, 0.0), g, "ridge", params)


def valley(g: ScalarGrid, params: TransformParams) -> FeatureMap:
    """``f - C^u_lam(f)``, nonpositive."""
    return _fmap(np.minimum(g.values - upper_transform(g, params).values, 0.0), g, "valley", params)


def edge(g: ScalarGrid, params: TransformParams) -> FeatureMap:
    """``C^u_lam(f) - C^l_lam(f)``."""
    up = upper_transform(g, params).values
    low = lower_transform(g, params).values
    return _fmap(np.maximum(up - low, 0.0), g, "edge", params)


# -- stable variants on sets ------------------------------------------------


def _stable_parts(mask, params, strict):
    if params.tau is None:
        raise ValidationError("stable transforms need tau")
    if strict and not params.lam > params.tau:
        raise DegenerateParametersError(
            f"stable valley/edge need lambda > tau, got {params.lam} <= {params.tau}"
        )
    up = upper_transform(_chi(mask), params)
    return up, params.replace(lam=params.tau)


def stable_ridge(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """``C^u_lam(chi) - C^l_tau(C^u_lam(chi))``."""
    up, pt = _stable_parts(mask, params, strict=False)
    sr = up.values - lower_transform(up, pt).values
    return _fmap(np.maximum(sr, 0.0), up, "stable_ridge", params)


def stable_valley(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """Valley transform of scale ``tau`` applied to ``C^u_lam(chi)``."""
    up, pt = _stable_parts(mask, params, strict=True)
    sv = up.values - upper_transform(up, pt).values
    return _fmap(np.minimum(sv, 0.0), up, "stable_valley", params)


def stable_edge(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    up, pt = _stable_parts(mask, params, strict=True)
    se = upper_transform(up, pt).values - lower_transform(up, pt).values
    return _fmap(np.maximum(se, 0.0), up, "stable_edge", params)


def mu1(lam: float, tau: float) -> float:
    """Stable-ridge height at a regular boundary point."""
    _positive(lam=lam, tau=tau)
    return (math.sqrt(lam + tau) - math.sqrt(tau)) ** 2 / lam


def mu2(a: float, lam: float, tau: float) -> float:
    """Stable-ridge height at the tip of an exterior corner whose sides have slopes ``+-a``."""
    _positive(lam=lam, tau=tau)
    if a < 0:
        raise ValidationError("corner slope a must be nonnegative")
    a2 = a * a
    if a2 <= math.sqrt((lam + tau) / tau):
        return lam / (lam + (1.0 + a2) * tau)
    return (1.0 + a2) / a2 * mu1(lam, tau)


def _positive(**kw):
    for k, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(f"{k} must be a positive real, got {v}")


# -- distance-based maps ----------------------------------------------------


def _dist2(mask):
    if mask.is_empty():
        raise EmptySetError("distance to an empty set is undefined")
    return _squared_distance_array(mask.flags, mask.spacing)


def d2_lambda(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """``(max(0, 1 - sqrt(lam) dist(x, K)))^2``."""
    dist = np.sqrt(_dist2(mask))
    vals = np.maximum(0.0, 1.0 - math.sqrt(params.lam) * dist) ** 2
    return FeatureMap(ScalarGrid(vals, mask.spacing, mask.origin), "d2", params.as_dict())


def interior_corner_map(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """``C^u_lam(D2) - D2``; vanishes where ``K`` looks convex at scale ``lam``."""
    d2 = d2_lambda(mask, params).grid
    vd = upper_transform(d2, params).values - d2.values
    return _fmap(np.maximum(vd, 0.0), d2, "interior_corner", params)


def intersection_transform(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """``|C^u_4lam(chi) - 2 (C^u_lam(chi) - C^l_lam(C^u_lam(chi)))|``."""
    chi = _chi(mask)
    up = upper_transform(chi, params)
    up4 = upper_transform(chi, _lam(params, 4 * params.lam)).values
    sr = up.values - lower_transform(up, params).values
    return _fmap(np.abs(up4 - 2.0 * sr), chi, "intersection", params)


def mma(mask: MaskGrid, params: TransformParams) -> FeatureMap:
    """Multiscale medial axis map ``(1 + lam)(d^2 - C^l_lam(d^2))``."""
    d2 = ScalarGrid(_dist2(mask), mask.spacing, mask.origin)
    r = np.maximum(d2.values - lower_transform(d2, params).values, 0.0)
    return _fmap((1.0 + params.lam) * r, d2, "mma", params)


# -- thresholding ------------------------------------------------------------


def suplevel(fmap, alpha: float) -> MaskGrid:
    """Cells with value ``>= alpha``."""
    grid = fmap.grid if isinstance(fmap, FeatureMap) else fmap
    return MaskGrid(grid.values >= alpha, grid.spacing, grid.origin)


def support(fmap, rel_threshold: float = 1e-8) -> MaskGrid:
    """Suplevel set at ``rel_threshold`` times the map maximum."""
    grid = fmap.grid if isinstance(fmap, FeatureMap) else fmap
    return suplevel(grid, rel_threshold * float(grid.values.max()))


def intersection_markers(fmap, rho: float = 0.5) -> np.ndarray:
    """Lattice indices of cells that attain the max of their ``3^n`` block and exceed ``rho * max``."""
    grid = fmap.grid if isinstance(fmap, FeatureMap) else fmap
    v = grid.values
    padded = np.pad(v, 1, mode="constant", constant_values=-np.inf)
    local = np.ones(v.shape, bool)
    for off in itertools.product((0, 1, 2), repeat=v.ndim):
        sl = tuple(slice(o, o + n) for o, n in zip(off, v.shape))
        local &= v >= padded[sl]
    top = float(v.max())
    keep = local & (v > rho * top) if top > 0 else np.zeros(v.shape, bool)
    return np.argwhere(keep)
