"""Slow, obviously-correct reference implementations used only by the tests."""

import itertools

import numpy as np


def brute_lower_moreau(f, lam, spacing=None):
    f = np.asarray(f, float)
    spacing = spacing or (1.0,) * f.ndim
    pts = np.stack(np.indices(f.shape), -1).reshape(-1, f.ndim) * np.asarray(spacing)
    vals = f.ravel()
    out = np.empty(vals.size)
    for s in range(0, vals.size, 512):  # chunked so 64^2 grids fit in memory
        d2 = ((pts[s:s + 512, None, :] - pts[None, :, :]) ** 2).sum(-1)
        out[s:s + 512] = (vals[None, :] + lam * d2).min(1)
    return out.reshape(f.shape)


def brute_sq_distance(flags, spacing=None):
    spacing = spacing or (1.0,) * flags.ndim
    pts = np.stack(np.indices(flags.shape), -1).reshape(-1, flags.ndim) * np.asarray(spacing)
    sites = pts[flags.ravel()]
    return ((pts[:, None, :] - sites[None, :, :]) ** 2).sum(-1).min(1).reshape(flags.shape)


def brute_lower_hull_values(x, y):
    """Convex envelope at each x_i: min over chords (j <= i <= k) of the interpolant."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = x.size
    out = y.copy()
    for i in range(n):
        for j in range(i + 1):
            for k in range(i, n):
                if j == k:
                    continue
                t = (x[i] - x[j]) / (x[k] - x[j])
                out[i] = min(out[i], (1 - t) * y[j] + t * y[k])
    return out


def brute_hausdorff(E, F, spacing=None):
    spacing = np.asarray(spacing or (1.0,) * E.ndim)
    a = np.argwhere(E) * spacing
    b = np.argwhere(F) * spacing
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))
    return max(d.min(1).max(), d.min(0).max())


def iterative_step(f, lam, i, spacing=None):
    """One unrolled step of the local relaxation, written cell by cell."""
    f = np.asarray(f, float)
    spacing = spacing or (1.0,) * f.ndim
    out = f.copy()
    for idx in np.ndindex(f.shape):
        for r in itertools.product((-1, 0, 1), repeat=f.ndim):
            j = tuple(a + b for a, b in zip(idx, r))
            if all(0 <= c < n for c, n in zip(j, f.shape)):
                cost = lam * sum((h * c) ** 2 for h, c in zip(spacing, r)) * (2 * i - 1)
                out[idx] = min(out[idx], f[j] + cost)
    return out
