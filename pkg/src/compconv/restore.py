"""Scattered-data interpolation, impulse-noise removal and inpainting.

All three rest on the average approximation

    A = (C^l_lam(f^M) + C^u_lam(f^-M)) / 2

where ``f^{+-M}`` carries the known samples on ``K`` and ``+-M`` elsewhere.
"""

from __future__ import annotations

import numpy as np

from .cct import lower_transform, mixed_lu, mixed_ul, upper_transform
from .errors import EmptySampleError, LevelTooSmallError, ValidationError
from .grid import MaskGrid, Padding, SampleField, ScalarGrid, TransformParams, crop, pad_mirror

DEFAULT_LEVEL_FACTOR = 1e6


def default_level(sample: SampleField) -> float:
    """``1e6`` times the sample range (or magnitude when the range is zero)."""
    vals = sample.sample_values
    span = float(vals.max() - vals.min()) if vals.size else 0.0
    scale = span if span > 0 else max(1.0, sample.max_abs())
    return DEFAULT_LEVEL_FACTOR * scale


def _level(sample, params):
    return params.level_m if params.level_m is not None else default_level(sample)


def extend_with_level(sample: SampleField, sign: int, M: float) -> ScalarGrid:
    """Samples on ``K``, ``sign * M`` off ``K``."""
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    if not M > sample.max_abs():
        raise LevelTooSmallError(f"level {M} must exceed the largest |sample| {sample.max_abs()}")
    m = sample.mask
    vals = np.full(m.shape, sign * float(M))
    vals[m.flags] = sample.sample_values
    return ScalarGrid(vals, m.spacing, m.origin)


def _check_sample(sample):
    if sample.mask.is_empty():
        raise EmptySampleError("no known samples")


def average_transform(sample: SampleField, params: TransformParams) -> ScalarGrid:
    """Average of the lower transform of ``f^M`` and the upper transform of ``f^-M``."""
    _check_sample(sample)
    M = _level(sample, params)
    low = lower_transform(extend_with_level(sample, 1, M), params)
    up = upper_transform(extend_with_level(sample, -1, M), params)
    return low.with_values(0.5 * (low.values + up.values))


def smooth_average_transform(sample: SampleField, params: TransformParams) -> ScalarGrid:
    """Average of ``C^u_tau(C^l_lam f^M)`` and ``C^l_tau(C^u_lam f^-M)``; within ``16 M lam / tau`` of ``A``."""
    _check_sample(sample)
    if params.tau is None:
        raise ValidationError("smooth average needs tau")
    M = _level(sample, params)
    ul = mixed_ul(extend_with_level(sample, 1, M), params)
    # C^l_tau(C^u_lam g) is mixed_lu with the two scales swapped
    lu = mixed_lu(extend_with_level(sample, -1, M), params.replace(lam=params.tau, tau=params.lam))
    return ul.with_values(0.5 * (ul.values + lu.values))


def smooth_average_bound(M: float, lam: float, tau: float) -> float:
    return 16.0 * M * lam / tau


def detect_extreme_values(image: ScalarGrid, low: float = 0.0, high: float = 255.0) -> MaskGrid:
    """Cells sitting exactly at either end of the dynamic range."""
    v = image.values
    return MaskGrid((v == low) | (v == high), image.spacing, image.origin)


def _absolute_tol(params, values):
    # with M ~ 1e13 a tolerance relative to ||f^M|| would stop the sweep at once
    if params.scheme != "oberman" or params.tol is not None:
        return params
    span = float(values.max() - values.min()) or 1.0
    return params.replace(tol=1e-6 * span * np.sqrt(values.size))


def _restore(image: ScalarGrid, unknown: MaskGrid, params: TransformParams) -> ScalarGrid:
    if unknown.shape != image.shape:
        raise ValidationError(f"mask shape {unknown.shape} differs from image shape {image.shape}")
    known = ~unknown.flags
    if not known.any():
        raise EmptySampleError("every cell is marked unknown")
    if not unknown.flags.any():
        return image
    width = params.padding.width if params.padding.active else 0
    work = pad_mirror(image, width)
    # the padding ring is trusted as is, noisy values included
    flags = np.ones(work.shape, bool)
    inner = tuple(slice(width, width + n) for n in image.shape)
    flags[inner] = known
    sample = SampleField.from_grid(work, MaskGrid.like(work, flags))
    inner_params = _absolute_tol(params.replace(padding=Padding()), image.values[known])
    avg = average_transform(sample, inner_params)
    out = crop(avg, width).values.copy()
    out[known] = image.values[known]
    return image.with_values(out)


def denoise_salt_pepper(image: ScalarGrid, noise_mask: MaskGrid, params: TransformParams) -> ScalarGrid:
    """Rebuild the cells flagged in ``noise_mask`` from the rest of the image.

    The image is mirror-padded by ``params.padding.width`` using its own
    (corrupted) values and the whole padding ring counts as known data.
    Known cells come back unchanged.
    """
    return _restore(image, noise_mask, params)


def inpaint(image: ScalarGrid, damage_mask: MaskGrid, params: TransformParams) -> ScalarGrid:
    """Fill the damaged cells; every other cell is left untouched."""
    return _restore(image, damage_mask, params)
