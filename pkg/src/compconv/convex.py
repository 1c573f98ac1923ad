"""Convex envelopes on grids.

Two routes:

* a Jacobi relaxation that replaces each value by the smallest convex
  combination of its stencil neighbours until nothing moves;
* the biconjugate ``f**`` computed one axis at a time, where every 1-D
  conjugate goes through the lower convex hull and the closed-form conjugate
  of the resulting piecewise-affine function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DualCoverageError, NotConvexError, SchemeError, ValidationError
from .grid import ScalarGrid

# -- piecewise-affine functions ---------------------------------------------


@dataclass(frozen=True, eq=False)
class PiecewiseAffine1D:
    """Convex piecewise-affine ``g`` with vertices ``(xs[i], gs[i])``.

    ``cs[i]`` is the slope on ``[xs[i], xs[i+1]]``; the last entry is the
    slope of the right ray and may be ``+inf`` (domain ends at ``xs[-1]``).
    ``left_slope`` is the slope of the left ray, ``-inf`` when the domain
    starts at ``xs[0]``.  An affine function on the whole line has a single
    vertex with ``left_slope == cs[0]``.
    """

    xs: np.ndarray
    gs: np.ndarray
    cs: np.ndarray
    left_slope: float = -math.inf

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        gs = np.asarray(self.gs, dtype=float).ravel()
        cs = np.asarray(self.cs, dtype=float).ravel()
        if xs.size == 0 or xs.size != gs.size or xs.size != cs.size:
            raise ValidationError("xs, gs and cs need the same non-zero length")
        if np.any(np.diff(xs) <= 0) or not np.all(np.isfinite(xs)) or not np.all(np.isfinite(gs)):
            raise ValidationError("breakpoints must be finite and strictly increasing")
        if np.any(np.isnan(cs)) or np.any(cs[:-1] == math.inf) or np.any(cs == -math.inf):
            raise ValidationError("only the right ray slope may be infinite")
        if np.any(np.diff(cs) <= 0):
            raise NotConvexError("slopes must be strictly increasing")
        left = float(self.left_slope)
        if left == math.inf or left > cs[0] or (left == cs[0] and xs.size > 1):
            raise NotConvexError(f"left ray slope {left} exceeds the first slope {cs[0]}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "gs", gs)
        object.__setattr__(self, "cs", cs)
        object.__setattr__(self, "left_slope", left)

    @property
    def is_affine(self) -> bool:
        return self.left_slope == self.cs[0]

    @classmethod
    def from_points(cls, x, y) -> "PiecewiseAffine1D":
        """Lower convex hull of sample points, ``+inf`` outside ``[x[0], x[-1]]``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        idx = lower_hull_1d(x, y)
        hx, hy = x[idx], y[idx]
        cs = np.append(np.diff(hy) / np.diff(hx), math.inf)
        return cls(hx, hy, cs)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, self.xs.size - 1)
        dx = x - self.xs[i]
        slope = np.where(dx < 0, self.left_slope, self.cs[i])
        with np.errstate(invalid="ignore"):
            out = self.gs[i] + slope * dx
        return np.where(dx == 0, self.gs[i], out)


def lf_transform_pa(g: PiecewiseAffine1D) -> PiecewiseAffine1D:
    """Closed-form conjugate ``g*(xi) = sup_x xi x - g(x)``.

    On the slope interval between consecutive slopes of ``g`` around vertex
    ``i`` the conjugate is ``xs[i] xi - gs[i]``; its breakpoints are the
    finite slopes of ``g`` and its slopes are the vertices of ``g``.
    """
    if g.is_affine:
        c = g.cs[0]
        return PiecewiseAffine1D([c], [g.xs[0] * c - g.gs[0]], [math.inf])
    xs, gs = g.xs, g.gs
    n = xs.size
    s = np.concatenate(([g.left_slope], g.cs))  # vertex i sits between s[i] and s[i+1]
    if n == 1 and not np.isfinite(s).any():
        # indicator of a point: the conjugate is affine
        return PiecewiseAffine1D([0.0], [-gs[0]], [xs[0]], left_slope=xs[0])
    bx, bg, bc = [], [], []
    for k in range(n + 1):
        if not np.isfinite(s[k]):
            continue
        v = k if k < n else n - 1
        bx.append(s[k])
        bg.append(xs[v] * s[k] - gs[v])
        bc.append(xs[k] if k < n else math.inf)
    left = xs[0] if s[0] == -math.inf else -math.inf
    return PiecewiseAffine1D(bx, bg, bc, left_slope=left)


# -- numba kernels -----------------------------------------------------------


@numba.njit(cache=True)
def _lower_hull(x, y, out):
    # Andrew's monotone chain, lower part; x strictly increasing
    k = 0
    for i in range(x.shape[0]):
        while k >= 2:
            a = out[k - 2]
            b = out[k - 1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross <= 0.0:
                k -= 1
            else:
                break
        out[k] = i
        k += 1
    return k


@numba.njit(cache=True)
def _conjugate_rows(x, Y, xi):
    # out[r, k] = max_j xi[k] x[j] - Y[r, j]; xi sorted ascending
    m, n = Y.shape
    nk = xi.shape[0]
    out = np.empty((m, nk))
    hull = np.empty(n, dtype=np.int64)
    for r in range(m):
        y = Y[r]
        nh = _lower_hull(x, y, hull)
        v = 0
        for k in range(nk):
            s = xi[k]
            while v + 1 < nh:
                a = hull[v]
                b = hull[v + 1]
                if (y[b] - y[a]) < s * (x[b] - x[a]):
                    v += 1
                else:
                    break
            j = hull[v]
            out[r, k] = s * x[j] - y[j]
    return out


def lower_hull_1d(x, y) -> np.ndarray:
    """Indices of the lower convex hull vertices of ``(x, y)``, left to right."""
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValidationError("lower_hull_1d needs two non-empty 1-D arrays of equal length")
    if np.any(np.diff(x) <= 0):
        raise ValidationError("abscissae must be strictly increasing")
    out = np.empty(x.size, dtype=np.int64)
    k = _lower_hull(x, y, out)
    return out[:k].copy()


def discrete_conjugate_1d(x, y, xi) -> np.ndarray:
    """``max_j xi_k x_j - y_j`` for sorted ``xi`` in O(len(x) + len(xi))."""
    x = np.ascontiguousarray(x, dtype=float)
    xi = np.ascontiguousarray(xi, dtype=float)
    Y = np.ascontiguousarray(np.asarray(y, dtype=float)[None, :])
    return _conjugate_rows(x, Y, xi)[0]


# -- Jacobi relaxation -------------------------------------------------------


@dataclass(frozen=True)
class StencilSpec:
    """Lattice directions ``0 < |r|_inf <= radius``, one per antipodal pair."""

    radius: int = 1
    ndim: int = 2
    directions: tuple = field(init=False)

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValidationError("stencil radius must be a positive integer")
        dirs = []
        for r in itertools.product(range(-self.radius, self.radius + 1), repeat=self.ndim):
            if not any(r) or math.gcd(*[abs(c) for c in r]) != 1:
                continue
            if tuple(-c for c in r) in dirs:
                continue
            dirs.append(r)
        object.__setattr__(self, "directions", tuple(dirs))

    def combinations(self):
        """``(a, b, r)``: points ``x + a r`` and ``x - b r`` weighted ``b, a`` over ``a + b``."""
        out = []
        for r in self.directions:
            reach = self.radius // max(abs(c) for c in r)
            for a in range(1, reach + 1):
                for b in range(1, reach + 1):
                    out.append((a, b, r))
        return out


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    grid: ScalarGrid
    converged: bool
    iterations: int


def _pair_slices(shape, a, b, r):
    """Slices selecting centres, ``centre + a r`` and ``centre - b r`` inside the domain."""
    ctr, plus, minus = [], [], []
    for n, c in zip(shape, r):
        lo = b * c if c > 0 else -a * c
        hi = n - (a * c if c > 0 else -b * c)
        if hi <= lo:
            return None
        ctr.append(slice(lo, hi))
        plus.append(slice(lo + a * c, hi + a * c))
        minus.append(slice(lo - b * c, hi - b * c))
    return tuple(ctr), tuple(plus), tuple(minus)


def oberman_convex_envelope(g: ScalarGrid, tol: float | None = None,
                            stencil: StencilSpec | None = None,
                            max_iters: int | None = None) -> EnvelopeResult:
    """Iterate ``u <- min(f, convex combinations of u along stencil lines)``.

    Stops once the L2 change of a sweep drops below ``tol`` (default
    ``1e-7 * ||f||_2``).  Combinations reaching outside the grid are skipped.
    """
    f = np.asarray(g.values, dtype=float)
    stencil = stencil or StencilSpec(1, g.ndim)
    if stencil.ndim != g.ndim:
        raise ValidationError(f"stencil is {stencil.ndim}-D, grid is {g.ndim}-D")
    if tol is None:
        tol = 1e-7 * max(float(np.linalg.norm(f)), 1e-300)
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if max_iters is None:
        max_iters = 50_000
    combos = []
    for a, b, r in stencil.combinations():
        sl = _pair_slices(f.shape, a, b, r)
        if sl is not None:
            combos.append((b / (a + b), a / (a + b), sl))
    u = f.copy()
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        nxt = f.copy()
        for wp, wm, (ctr, plus, minus) in combos:
            np.minimum(nxt[ctr], wp * u[plus] + wm * u[minus], out=nxt[ctr])
        change = float(np.linalg.norm(nxt - u))
        u = nxt
        if change < tol:
            converged = True
            break
    if not np.all(np.isfinite(u)):
        raise SchemeError("oberman", "iteration produced non-finite values")
    return EnvelopeResult(g.with_values(u), converged, it)


# -- biconjugate -------------------------------------------------------------


def _axis_coords(g, axis):
    return g.origin[axis] + g.spacing[axis] * np.arange(g.shape[axis])


def _slope_range(x, rows):
    """Extreme lower-hull slopes over all rows (first and last hull edges)."""
    if x.size == 1:
        return 0.0, 0.0
    left = (rows[:, 1:] - rows[:, :1]) / (x[1:] - x[0])
    right = (rows[:, -1:] - rows[:, :-1]) / (x[-1] - x[:-1])
    return float(left.min()), float(right.max())


def _conjugate_pass(values, axis, x, xi):
    moved = np.moveaxis(values, axis, -1)
    shape = moved.shape
    rows = np.ascontiguousarray(moved).reshape(-1, shape[-1])
    out = _conjugate_rows(np.ascontiguousarray(x), rows, np.ascontiguousarray(xi))
    return np.moveaxis(out.reshape(shape[:-1] + (xi.size,)), -1, axis)


def _dual_grid(lo, hi, h):
    k0 = math.floor(lo / h) - 1
    k1 = math.ceil(hi / h) + 1
    return h * np.arange(k0, k1 + 1, dtype=float)


MAX_DUAL_CELLS = 2 ** 25


def _conjugate_nd(values, coords, dual_spacing=None, dual_range=None, out_coords=None):
    """Factorized conjugate: one 1-D transform per axis, last axis first.

    After the first pass each intermediate is negated so the next pass again
    takes a supremum of ``xi x - (.)``.  Returns the conjugate values and the
    dual coordinates used.
    """
    h = np.asarray(values, dtype=float)
    ndim = h.ndim
    dual = [None] * ndim
    for step, axis in enumerate(reversed(range(ndim))):
        src = h if step == 0 else -h
        x = coords[axis]
        if out_coords is not None:
            xi = out_coords[axis]
        else:
            rows = np.moveaxis(src, axis, -1).reshape(-1, src.shape[axis])
            lo, hi = _slope_range(x, rows)
            if dual_range is not None:
                glo, ghi = dual_range[axis]
                if glo > lo or ghi < hi:
                    raise DualCoverageError(axis, (lo, hi), (glo, ghi))
                lo, hi = glo, ghi
            count = math.ceil(hi / dual_spacing) - math.floor(lo / dual_spacing) + 3
            cells = src.size // src.shape[axis] * count
            if cells > MAX_DUAL_CELLS:
                raise SchemeError(
                    "biconjugate",
                    f"dual lattice needs {cells} cells on axis {axis}; increase the dual spacing",
                )
            xi = _dual_grid(lo, hi, dual_spacing)
        dual[axis] = xi
        h = _conjugate_pass(src, axis, x, xi)
    return h, dual


def biconjugate_envelope(g: ScalarGrid, dual_spacing: float = 1e-3, dual_range=None) -> ScalarGrid:
    """Convex envelope as ``f**`` on the grid (``+inf`` outside the domain).

    ``dual_spacing`` is the slope step of the dual lattice.  The dual range
    per axis defaults to the hull-slope range met during that pass, which
    is enough: past it each 1-D conjugate is affine.  A user ``dual_range``
    (one ``(lo, hi)`` per axis) must cover that range.
    """
    if not (np.isfinite(dual_spacing) and dual_spacing > 0):
        raise ValidationError("dual spacing must be a positive real")
    if dual_range is not None and len(dual_range) != g.ndim:
        raise ValidationError(f"dual_range needs {g.ndim} (lo, hi) pairs")
    coords = [_axis_coords(g, a) for a in range(g.ndim)]
    fstar, dual = _conjugate_nd(g.values, coords, dual_spacing, dual_range)
    fss, _ = _conjugate_nd(fstar, dual, out_coords=coords)
    if not np.all(np.isfinite(fss)):
        raise SchemeError("biconjugate", "conjugate produced non-finite values")
    # rounding can lift the envelope by an ulp or two above f
    return g.with_values(np.minimum(fss, g.values))
