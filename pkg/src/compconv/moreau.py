"""Discrete Moreau envelopes on grids.

The lower envelope ``M_lam(f)(x) = min_y f(y) + lam |x - y|^2`` is separable
in the squared Euclidean weight, so the n-D envelope is a sequence of 1-D
passes.  Each 1-D pass is the lower envelope of the parabolas
``lam (x - q)^2 + f(q)`` rooted at the grid nodes, built in linear time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numba
import numpy as np

from .errors import EmptyDomainError, EmptySetError, ValidationError
from .grid import MaskGrid, ScalarGrid


@dataclass(frozen=True)
class ParabolaEnvelope1D:
    """Parabolas attaining the lower envelope and the abscissae where they hand over."""

    vertex_indices: np.ndarray
    boundaries: np.ndarray


@numba.njit(cache=True)
def _build_envelope(f, w, v, z):
    # v: vertex indices, z: k+2 boundaries with z[0] = -inf; returns the top index k
    n = f.shape[0]
    k = 0
    v[0] = 0
    z[0] = -np.inf
    z[1] = np.inf
    for q in range(1, n):
        while True:
            p = v[k]
            s = ((f[q] + w * q * q) - (f[p] + w * p * p)) / (2.0 * w * (q - p))
            if s <= z[k]:
                k -= 1
            else:
                break
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf
    return k


@numba.njit(cache=True)
def _envelope_rows(F, w):
    m, n = F.shape
    out = np.empty_like(F)
    v = np.empty(n, dtype=np.int64)
    z = np.empty(n + 1)
    for r in range(m):
        f = F[r]
        _build_envelope(f, w, v, z)
        k = 0
        for i in range(n):
            # ties at a boundary keep the earlier vertex
            while z[k + 1] < i:
                k += 1
            d = i - v[k]
            out[r, i] = f[v[k]] + w * d * d
    return out


def _check_lam(lam):
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError(f"lambda must be a positive real, got {lam}")


def parabola_envelope_1d(values, lam: float, spacing: float = 1.0) -> ParabolaEnvelope1D:
    """Envelope structure (vertices and hand-over abscissae in index units)."""
    f = np.ascontiguousarray(values, dtype=float)
    if f.size == 0:
        raise EmptyDomainError("empty input")
    _check_lam(lam)
    v = np.empty(f.size, dtype=np.int64)
    z = np.empty(f.size + 1)
    k = _build_envelope(f, lam * spacing * spacing, v, z)
    return ParabolaEnvelope1D(v[: k + 1].copy(), z[1 : k + 1].copy())


def lower_envelope_1d(values, lam: float, spacing: float = 1.0) -> np.ndarray:
    """``out[i] = min_j values[j] + lam * spacing**2 * (i - j)**2`` in O(N)."""
    f = np.asarray(values, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise EmptyDomainError("lower_envelope_1d needs a non-empty 1-D array")
    _check_lam(lam)
    return _envelope_rows(np.ascontiguousarray(f[None, :]), lam * spacing * spacing)[0]


def _lower_moreau_array(values, lam, spacing):
    out = np.asarray(values, dtype=float)
    for axis, h in enumerate(spacing):
        moved = np.moveaxis(out, axis, -1)
        shape = moved.shape
        rows = np.ascontiguousarray(moved).reshape(-1, shape[-1])
        res = _envelope_rows(rows, lam * h * h).reshape(shape)
        out = np.moveaxis(res, -1, axis)
    return np.ascontiguousarray(out)


def _upper_moreau_array(values, lam, spacing):
    return -_lower_moreau_array(-np.asarray(values, dtype=float), lam, spacing)


def lower_moreau(g: ScalarGrid, lam: float) -> ScalarGrid:
    """Discrete inf-convolution with ``lam |.|^2`` over the grid (no extension)."""
    _check_lam(lam)
    return g.with_values(_lower_moreau_array(g.values, lam, g.spacing))


def upper_moreau(g: ScalarGrid, lam: float) -> ScalarGrid:
    """Sup-convolution ``M^lam(f) = -M_lam(-f)``."""
    _check_lam(lam)
    return g.with_values(_upper_moreau_array(g.values, lam, g.spacing))


def _stencil_offsets(ndim):
    return [r for r in itertools.product((-1, 0, 1), repeat=ndim) if any(r)]


def _shift_slices(r):
    dst, src = [], []
    for d in r:
        if d > 0:
            dst.append(slice(0, -d))
            src.append(slice(d, None))
        elif d < 0:
            dst.append(slice(-d, None))
            src.append(slice(0, d))
        else:
            dst.append(slice(None))
            src.append(slice(None))
    return tuple(dst), tuple(src)


def _iterative_moreau_array(values, lam, spacing, max_iters):
    f = np.array(values, dtype=float)
    offsets = [(r, _shift_slices(r), lam * sum((h * d) ** 2 for h, d in zip(spacing, r)))
               for r in _stencil_offsets(f.ndim)]
    iters = 0
    for i in range(1, max_iters + 1):
        tau = 2 * i - 1
        nxt = f.copy()
        for _, (dst, src), cost in offsets:
            np.minimum(nxt[dst], f[src] + cost * tau, out=nxt[dst])
        iters = i
        if np.array_equal(nxt, f):
            break
        f = nxt
    return f, iters


def iterative_moreau(g: ScalarGrid, lam: float, max_iters: int | None = None,
                     return_iterations: bool = False):
    """Local relaxation scheme for the lower Moreau envelope.

    Step ``i`` takes the minimum over the ``3**n`` neighbourhood with the
    weight ``lam h^2 |r|^2`` scaled by ``2i - 1``; after ``m`` steps every
    displacement with ``|r|_inf <= m`` has been reached at exactly its
    quadratic cost.  Stops early at a fixed point.  ``max_iters`` defaults
    to the largest axis extent, which makes the result exact.
    """
    _check_lam(lam)
    if max_iters is None:
        max_iters = max(g.shape)
    if max_iters < 1:
        raise ValidationError("max_iters must be at least 1")
    out, iters = _iterative_moreau_array(g.values, lam, g.spacing, int(max_iters))
    res = g.with_values(out)
    return (res, iters) if return_iterations else res


def indicator_level(shape, spacing, lam=1.0, span=0.0) -> float:
    """Finite stand-in for +inf: exceeds any parabola cost inside the domain."""
    diam2 = sum(((n - 1) * h) ** 2 for n, h in zip(shape, spacing))
    return float(span) + lam * diam2 + 1.0


def _squared_distance_array(flags, spacing):
    if not flags.any():
        raise EmptySetError("distance to an empty set is undefined")
    large = indicator_level(flags.shape, spacing)
    ind = np.where(flags, 0.0, large)
    return _lower_moreau_array(ind, 1.0, spacing)


def squared_distance_transform(mask: MaskGrid) -> ScalarGrid:
    """Exact squared Euclidean distance to the true cells of ``mask``."""
    return ScalarGrid(_squared_distance_array(mask.flags, mask.spacing), mask.spacing, mask.origin)
