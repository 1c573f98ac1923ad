"""Grid value types, transform parameters and boundary padding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    InvalidCropError,
    InvalidPaddingError,
    NonFiniteValueError,
    ValidationError,
)

# "truncate": Moreau routes see only the grid; "extend": the inner envelope
# runs on a widened lattice so the result matches the convex-envelope routes
BOUNDARY_MODES = ("truncate", "extend")

SCHEMES = ("moreau-parabola", "moreau-iterative", "oberman", "biconjugate")

# CLI spellings of the scheme names
SCHEME_ALIASES = {
    "moreau": "moreau-parabola",
    "parabola": "moreau-parabola",
    "iter-moreau": "moreau-iterative",
    "iterative": "moreau-iterative",
    "biconj": "biconjugate",
}


def canonical_scheme(name: str) -> str:
    scheme = SCHEME_ALIASES.get(name, name)
    if scheme not in SCHEMES:
        raise ValidationError(f"unknown scheme {name!r}; expected one of {SCHEMES}")
    return scheme


def _axis_tuple(value, ndim, default, name):
    if value is None:
        return (float(default),) * ndim
    if np.isscalar(value):
        return (float(value),) * ndim
    out = tuple(float(v) for v in value)
    if len(out) != ndim:
        raise ValidationError(f"{name} has {len(out)} entries for a {ndim}-D grid")
    return out


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ScalarGrid:
    """Finite real values on a regular 1-, 2- or 3-D lattice.

    Cell ``idx`` sits at world position ``origin + idx * spacing``.
    """

    values: np.ndarray
    spacing: tuple = None
    origin: tuple = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim not in (1, 2, 3) or values.size == 0:
            raise ValidationError(f"grids must be non-empty with 1-3 axes, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError("grid values must be finite")
        spacing = _axis_tuple(self.spacing, values.ndim, 1.0, "spacing")
        if any(not (h > 0 and np.isfinite(h)) for h in spacing):
            raise ValidationError(f"spacing must be strictly positive, got {spacing}")
        origin = _axis_tuple(self.origin, values.ndim, 0.0, "origin")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)

    @property
    def shape(self):
        return self.values.shape

    @property
    def ndim(self):
        return self.values.ndim

    def with_values(self, values) -> "ScalarGrid":
        """Same lattice, new values."""
        return ScalarGrid(values, self.spacing, self.origin)

    def coordinates(self):
        """World coordinates, one array per axis (``indexing="ij"``)."""
        axes = [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.shape)]
        return np.meshgrid(*axes, indexing="ij")

    def center(self):
        return tuple(o + h * (n - 1) / 2 for o, h, n in zip(self.origin, self.spacing, self.shape))

    def __neg__(self):
        return self.with_values(-self.values)

    def __repr__(self):
        return f"ScalarGrid(shape={self.shape}, spacing={self.spacing}, origin={self.origin})"


@dataclass(frozen=True, eq=False)
class MaskGrid:
    """Boolean lattice marking a set ``K`` (true = cell in ``K``)."""

    flags: np.ndarray
    spacing: tuple = None
    origin: tuple = None

    def __post_init__(self):
        flags = np.asarray(self.flags).astype(bool)
        if flags.ndim not in (1, 2, 3) or flags.size == 0:
            raise ValidationError(f"masks must be non-empty with 1-3 axes, got shape {flags.shape}")
        spacing = _axis_tuple(self.spacing, flags.ndim, 1.0, "spacing")
        if any(not (h > 0 and np.isfinite(h)) for h in spacing):
            raise ValidationError(f"spacing must be strictly positive, got {spacing}")
        object.__setattr__(self, "flags", _frozen(flags))
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", _axis_tuple(self.origin, flags.ndim, 0.0, "origin"))

    @classmethod
    def like(cls, grid, flags) -> "MaskGrid":
        return cls(flags, grid.spacing, grid.origin)

    @property
    def shape(self):
        return self.flags.shape

    @property
    def ndim(self):
        return self.flags.ndim

    def count(self) -> int:
        return int(self.flags.sum())

    def is_empty(self) -> bool:
        return not self.flags.any()

    def __invert__(self):
        return MaskGrid(~self.flags, self.spacing, self.origin)

    def __repr__(self):
        return f"MaskGrid(shape={self.shape}, count={self.count()})"


@dataclass(frozen=True, eq=False)
class SampleField:
    """Values known on the true cells of ``mask`` (row-major order)."""

    mask: MaskGrid
    sample_values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.sample_values, dtype=float).ravel()
        if vals.size != self.mask.count():
            raise ValidationError(
                f"{vals.size} sample values for {self.mask.count()} marked cells"
            )
        if not np.all(np.isfinite(vals)):
            raise NonFiniteValueError("sample values must be finite")
        object.__setattr__(self, "sample_values", _frozen(vals))

    @classmethod
    def from_grid(cls, grid: ScalarGrid, mask: MaskGrid) -> "SampleField":
        if grid.shape != mask.shape:
            raise ValidationError(f"grid shape {grid.shape} != mask shape {mask.shape}")
        return cls(mask, grid.values[mask.flags])

    def max_abs(self) -> float:
        return float(np.abs(self.sample_values).max()) if self.sample_values.size else 0.0


@dataclass(frozen=True)
class Padding:
    mode: str = "none"
    width: int = 0

    def __post_init__(self):
        if self.mode not in ("none", "mirror"):
            raise ValidationError(f"padding mode must be 'none' or 'mirror', got {self.mode!r}")
        if int(self.width) != self.width or self.width < 0:
            raise ValidationError(f"padding width must be a non-negative integer, got {self.width}")

    @property
    def active(self) -> bool:
        return self.mode == "mirror" and self.width > 0


@dataclass(frozen=True)
class TransformParams:
    """Scale parameters and scheme selection for a transform call.

    ``tau`` and ``level_m`` are optional; operations that need them say so.
    The trailing fields tune the engines; ``boundary`` only affects the
    Moreau schemes.
    """

    lam: float
    tau: Optional[float] = None
    level_m: Optional[float] = None
    scheme: str = "moreau-parabola"
    padding: Padding = field(default_factory=Padding)
    dual_spacing: float = 1e-3
    stencil_radius: int = 1
    tol: Optional[float] = None
    max_iters: Optional[int] = None
    boundary: str = "truncate"

    def __post_init__(self):
        for name in ("lam", "tau", "level_m", "dual_spacing"):
            v = getattr(self, name)
            if v is None and name in ("tau", "level_m"):
                continue
            if not (np.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be a positive real, got {v}")
        object.__setattr__(self, "scheme", canonical_scheme(self.scheme))
        if self.stencil_radius < 1:
            raise ValidationError("stencil radius must be at least 1")
        if self.boundary not in BOUNDARY_MODES:
            raise ValidationError(f"boundary must be one of {BOUNDARY_MODES}, got {self.boundary!r}")

    def replace(self, **changes) -> "TransformParams":
        kw = {f: getattr(self, f) for f in self.__dataclass_fields__}
        kw.update(changes)
        return TransformParams(**kw)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "tau": self.tau,
            "level_m": self.level_m,
            "scheme": self.scheme,
            "padding": {"mode": self.padding.mode, "width": self.padding.width},
            "dual_spacing": self.dual_spacing,
            "stencil_radius": self.stencil_radius,
            "boundary": self.boundary,
        }


def _check_width(width, shape, exc, what):
    if int(width) != width or width < 0:
        raise exc(f"{what} width must be a non-negative integer, got {width}")
    return int(width)


def pad_mirror(g: ScalarGrid, width: int) -> ScalarGrid:
    """Grow every axis by ``width`` cells per side, reflecting about the edge cells.

    The edge cell itself is not repeated: ``[1, 2, 3]`` padded by one is
    ``[2, 1, 2, 3, 2]``.
    """
    width = _check_width(width, g.shape, InvalidPaddingError, "padding")
    if width == 0:
        return g
    if width >= min(g.shape):
        raise InvalidPaddingError(f"padding width {width} must be below every axis extent {g.shape}")
    values = np.pad(g.values, width, mode="reflect")
    origin = tuple(o - width * h for o, h in zip(g.origin, g.spacing))
    return ScalarGrid(values, g.spacing, origin)


def pad_mask_mirror(m: MaskGrid, width: int) -> MaskGrid:
    width = _check_width(width, m.shape, InvalidPaddingError, "padding")
    if width == 0:
        return m
    if width >= min(m.shape):
        raise InvalidPaddingError(f"padding width {width} must be below every axis extent {m.shape}")
    origin = tuple(o - width * h for o, h in zip(m.origin, m.spacing))
    return MaskGrid(np.pad(m.flags, width, mode="reflect"), m.spacing, origin)


def _crop_slices(shape, width):
    if any(2 * width >= n for n in shape):
        raise InvalidCropError(f"cannot crop {width} cells per side from shape {shape}")
    return tuple(slice(width, n - width) for n in shape)


def crop(g, width: int):
    """Remove ``width`` cells from both ends of every axis (inverse of padding).

    Works for both :class:`ScalarGrid` and :class:`MaskGrid`.
    """
    width = _check_width(width, g.shape, InvalidCropError, "crop")
    if width == 0:
        return g
    sl = _crop_slices(g.shape, width)
    origin = tuple(o + width * h for o, h in zip(g.origin, g.spacing))
    if isinstance(g, MaskGrid):
        return MaskGrid(g.flags[sl], g.spacing, origin)
    return ScalarGrid(g.values[sl], g.spacing, origin)


def same_lattice(a, b) -> bool:
    return a.shape == b.shape and np.allclose(a.spacing, b.spacing) and np.allclose(a.origin, b.origin)


def as_grid(values, spacing: Sequence[float] | float | None = None, origin=None) -> ScalarGrid:
    if isinstance(values, ScalarGrid):
        return values
    return ScalarGrid(values, spacing, origin)
