"""Grid file formats: PGM (P2/P5), fgrid and CSV.

fgrid layout::

    FGRID 1
    shape 41 41
    spacing 1.0 1.0
    origin 0.0 0.0
    data
    <prod(shape) little-endian float64, row-major>

Each header line ends with ``\\n``; header floats use ``repr`` so they
round-trip exactly.
"""

from __future__ import annotations

import json
import os
import re

import numpy as np

from .errors import GridFormatError, NonFiniteValueError
from .grid import MaskGrid, ScalarGrid

FORMATS = ("pgm", "fgrid", "csv")
FGRID_MAGIC = "FGRID 1"


def guess_format(path) -> str:
    ext = os.path.splitext(str(path))[1].lower().lstrip(".")
    if ext in ("pgm", "pnm"):
        return "pgm"
    if ext in ("fgrid", "csv"):
        return ext
    raise GridFormatError(f"cannot infer grid format from {path!r}; use one of {FORMATS}")


def read_grid(path, format=None) -> ScalarGrid:
    format = format or guess_format(path)
    if format == "pgm":
        return _read_pgm(path)
    if format == "fgrid":
        return _read_fgrid(path)
    if format == "csv":
        return _read_csv(path)
    raise GridFormatError(f"unknown format {format!r}")


def write_grid(g: ScalarGrid, path, format=None) -> None:
    format = format or guess_format(path)
    if not np.all(np.isfinite(g.values)):
        raise NonFiniteValueError("refusing to write non-finite values")
    if format == "pgm":
        _write_pgm(g, path)
    elif format == "fgrid":
        _write_fgrid(g, path)
    elif format == "csv":
        _write_csv(g, path)
    else:
        raise GridFormatError(f"unknown format {format!r}")


def read_mask(path, format=None) -> MaskGrid:
    """Masks are any grid file; nonzero cells are true."""
    g = read_grid(path, format)
    return MaskGrid(g.values != 0, g.spacing, g.origin)


def write_mask(m: MaskGrid, path, format=None) -> None:
    format = format or guess_format(path)
    scale = 255.0 if format == "pgm" else 1.0
    write_grid(ScalarGrid(m.flags * scale, m.spacing, m.origin), path, format)


# -- fgrid -----------------------------------------------------------------


def _write_fgrid(g, path):
    header = "\n".join(
        [
            FGRID_MAGIC,
            "shape " + " ".join(str(n) for n in g.shape),
            "spacing " + " ".join(repr(float(h)) for h in g.spacing),
            "origin " + " ".join(repr(float(o)) for o in g.origin),
            "data",
        ]
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(g.values, dtype="<f8").tobytes())


def _read_fgrid(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    fields = {}
    pos = 0
    for expected in ("magic", "shape", "spacing", "origin", "data"):
        end = blob.find(b"\n", pos)
        if end < 0:
            raise GridFormatError(f"{path}: truncated fgrid header")
        line = blob[pos:end].decode("ascii", errors="replace").strip()
        pos = end + 1
        if expected == "magic":
            if line != FGRID_MAGIC:
                raise GridFormatError(f"{path}: bad magic {line!r}")
            continue
        key, _, rest = line.partition(" ")
        if key != expected:
            raise GridFormatError(f"{path}: expected {expected!r} header line, got {line!r}")
        fields[key] = rest.split()
    try:
        shape = tuple(int(v) for v in fields["shape"])
        spacing = tuple(float(v) for v in fields["spacing"])
        origin = tuple(float(v) for v in fields["origin"])
    except ValueError as exc:
        raise GridFormatError(f"{path}: malformed header ({exc})") from None
    if not shape or len(spacing) != len(shape) or len(origin) != len(shape):
        raise GridFormatError(f"{path}: inconsistent header dimensions")
    n = int(np.prod(shape))
    payload = blob[pos:]
    if len(payload) != 8 * n:
        raise GridFormatError(f"{path}: expected {8 * n} data bytes, found {len(payload)}")
    values = np.frombuffer(payload, dtype="<f8").reshape(shape).astype(float)
    return ScalarGrid(values, spacing, origin)


# -- PGM -------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(#[^\n]*\n\s*)*(\S+)")


def _pgm_tokens(blob, count, pos=2):
    out = []
    for _ in range(count):
        m = _TOKEN.match(blob, pos)
        if m is None:
            raise GridFormatError("truncated PGM header")
        out.append(m.group(2))
        pos = m.end()
    return out, pos


def _read_pgm(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    magic = blob[:2]
    if magic not in (b"P2", b"P5"):
        raise GridFormatError(f"{path}: not a grayscale PGM (magic {magic!r})")
    try:
        (w, h, maxval), pos = _pgm_tokens(blob, 3)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise GridFormatError(f"{path}: malformed PGM header") from None
    if w <= 0 or h <= 0 or not (0 < maxval < 65536):
        raise GridFormatError(f"{path}: bad PGM dimensions or maxval")
    if magic == b"P5":
        dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
        data = blob[pos + 1:]  # single whitespace byte after maxval
        if len(data) < w * h * dtype.itemsize:
            raise GridFormatError(f"{path}: PGM raster shorter than {w}x{h}")
        values = np.frombuffer(data[: w * h * dtype.itemsize], dtype=dtype)
    else:
        try:
            values = np.array(blob[pos:].split(), dtype=np.int64)
        except ValueError:
            raise GridFormatError(f"{path}: non-integer PGM samples") from None
        if values.size != w * h:
            raise GridFormatError(f"{path}: expected {w * h} samples, found {values.size}")
    if values.max(initial=0) > maxval:
        raise GridFormatError(f"{path}: sample exceeds maxval {maxval}")
    return ScalarGrid(values.reshape(h, w).astype(float))


def _write_pgm(g, path):
    if g.ndim != 2:
        raise GridFormatError("PGM holds 2-D grids only")
    q = np.rint(g.values)
    if q.min() < 0 or q.max() > 65535:
        raise GridFormatError("PGM values must lie in [0, 65535]; rescale first")
    maxval = 255 if q.max() <= 255 else 65535
    dtype = np.dtype("u1") if maxval == 255 else np.dtype(">u2")
    h, w = g.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        fh.write(q.astype(dtype).tobytes())


# -- CSV -------------------------------------------------------------------


def _read_csv(path):
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise GridFormatError(f"{path}: {exc}") from None
    return ScalarGrid(values)


def _write_csv(g, path):
    if g.ndim != 2:
        raise GridFormatError("CSV holds 2-D grids only")
    np.savetxt(path, g.values, delimiter=",", fmt="%.17g")


# -- feature maps and markers ---------------------------------------------


def write_feature_map(fmap, path) -> str:
    """Write ``fmap.grid`` as fgrid plus a ``<path>.json`` sidecar."""
    write_grid(fmap.grid, path, "fgrid")
    sidecar = str(path) + ".json"
    with open(sidecar, "w") as fh:
        json.dump({"kind": fmap.kind, "params": fmap.params}, fh, indent=2)
    return sidecar


def write_markers(coords, path) -> None:
    coords = np.asarray(coords, dtype=int)
    ndim = coords.shape[1] if coords.ndim == 2 and coords.size else 0
    header = ",".join(f"i{k}" for k in range(ndim))
    np.savetxt(path, coords.reshape(-1, max(ndim, 1)) if ndim else np.empty((0, 1)),
               delimiter=",", fmt="%d", header=header, comments="")
