"""Lower, upper and mixed compensated convex transforms.

``lower_transform`` is ``co[f + lam |x - x0|^2] - lam |x - x0|^2``.  The
Moreau schemes evaluate it as the proximal hull ``M^lam(M_lam(f))``; the
convex-envelope schemes add the quadratic centred at the domain centre,
take the envelope and subtract it again.
"""

from __future__ import annotations

import math

import numpy as np

from .convex import StencilSpec, biconjugate_envelope, oberman_convex_envelope
from .errors import NumericalError, SchemeError, ValidationError
from .grid import MaskGrid, ScalarGrid, TransformParams, crop, pad_mirror
from .moreau import (
    _iterative_moreau_array,
    _lower_moreau_array,
    _upper_moreau_array,
    indicator_level,
)


def char_grid(mask: MaskGrid, amplitude: float = 1.0) -> ScalarGrid:
    """``amplitude`` on the marked cells, 0 elsewhere."""
    return ScalarGrid(np.where(mask.flags, float(amplitude), 0.0), mask.spacing, mask.origin)


def _centered_quadratic(g, lam, center=None):
    center = g.center() if center is None else center
    q = np.zeros(g.shape)
    for c, x0 in zip(g.coordinates(), center):
        q += (c - x0) ** 2
    return lam * q


MAX_EXTENDED_CELLS = 2 ** 24


def _extension_widths(f, lam, spacing):
    """Cells per side after which the proximal hull no longer feels the grid edge.

    Past the edge the inner envelope only has to be followed as far as the
    steepest chord slope of ``f`` divided by ``2 lam``.  A chord telescopes
    along a monotone lattice path, so its slope is at most ``sqrt(n)`` times
    the steepest axis difference quotient, and never more than
    ``osc(f) / h_min``.
    """
    steep = 0.0
    for axis, h in enumerate(spacing):
        if f.shape[axis] > 1:
            steep = max(steep, float(np.abs(np.diff(f, axis=axis)).max()) / h)
    chord = min(math.sqrt(f.ndim) * steep, float(f.max() - f.min()) / min(spacing))
    reach = chord / (2.0 * lam)
    return [int(math.ceil(reach / h)) + 1 for h in spacing]


def _proximal_hull(f, lam, spacing, params):
    if params.scheme == "moreau-parabola":
        return _upper_moreau_array(_lower_moreau_array(f, lam, spacing), lam, spacing)
    m = params.max_iters or max(f.shape)
    low, _ = _iterative_moreau_array(f, lam, spacing, m)
    up, _ = _iterative_moreau_array(-low, lam, spacing, m)
    return -up


def _extended_proximal_hull(f, lam, spacing, params):
    widths = _extension_widths(f, lam, spacing)
    shape = tuple(n + 2 * w for n, w in zip(f.shape, widths))
    if math.prod(shape) > MAX_EXTENDED_CELLS:
        raise SchemeError(params.scheme, f"extended lattice {shape} is too large; pad explicitly instead")
    # off-grid cells act as +inf for the inner envelope
    ext = np.full(shape, float(f.max()) + indicator_level(shape, spacing, lam))
    inner = tuple(slice(w, w + n) for w, n in zip(widths, f.shape))
    ext[inner] = f
    return _proximal_hull(ext, lam, spacing, params)[inner]


def _lower_values(g: ScalarGrid, params: TransformParams, lam: float, center=None) -> np.ndarray:
    scheme = params.scheme
    f = g.values
    if scheme in ("moreau-parabola", "moreau-iterative"):
        if params.boundary == "extend":
            return _extended_proximal_hull(f, lam, g.spacing, params)
        return _proximal_hull(f, lam, g.spacing, params)
    q = _centered_quadratic(g, lam, center)
    lifted = g.with_values(f + q)
    if scheme == "oberman":
        res = oberman_convex_envelope(
            lifted, params.tol, StencilSpec(params.stencil_radius, g.ndim), params.max_iters
        )
        if not res.converged:
            raise SchemeError(scheme, f"no convergence after {res.iterations} sweeps")
        env = res.grid.values
    else:
        env = biconjugate_envelope(lifted, params.dual_spacing).values
    return env - q


def _run(scheme, fn, *args):
    try:
        return fn(*args)
    except SchemeError:
        raise
    except NumericalError as exc:
        raise SchemeError(scheme, str(exc)) from exc
    except FloatingPointError as exc:
        raise SchemeError(scheme, str(exc)) from exc


def _with_padding(g, params, body):
    """Run ``body`` on the mirror-padded grid when requested, then crop back."""
    pad = params.padding
    work = pad_mirror(g, pad.width) if pad.active else g
    out = work.with_values(_run(params.scheme, body, work))
    return crop(out, pad.width) if pad.active else out


def lower_transform(g: ScalarGrid, params: TransformParams, center=None) -> ScalarGrid:
    """``C^l_lam(f)``: the largest ``lam``-semiconvex function below ``f``."""
    return _with_padding(g, params, lambda w: _lower_values(w, params, params.lam, center))


def upper_transform(g: ScalarGrid, params: TransformParams, center=None) -> ScalarGrid:
    """``C^u_lam(f) = -C^l_lam(-f)``."""
    return _with_padding(g, params, lambda w: -_lower_values(-w, params, params.lam, center))


def _need_tau(params):
    if params.tau is None:
        raise ValidationError("mixed transforms need tau")
    return params.tau


def mixed_ul(g: ScalarGrid, params: TransformParams) -> ScalarGrid:
    """``C^u_tau(C^l_lam(f))``."""
    tau = _need_tau(params)

    def body(w):
        low = w.with_values(_lower_values(w, params, params.lam))
        return -_lower_values(-low, params, tau)

    return _with_padding(g, params, body)


def mixed_lu(g: ScalarGrid, params: TransformParams) -> ScalarGrid:
    """``C^l_lam(C^u_tau(f))``."""
    tau = _need_tau(params)

    def body(w):
        up = w.with_values(-_lower_values(-w, params, tau))
        return _lower_values(up, params, params.lam)

    return _with_padding(g, params, body)


__all__ = [
    "char_grid",
    "lower_transform",
    "upper_transform",
    "mixed_ul",
    "mixed_lu",
]
