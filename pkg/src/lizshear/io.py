"""CSV, PGM and grid-inference helpers for the command-line front end.

All CSV numbers are written with 17 significant digits so that a float read
back is bit-identical to the one written.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InputFormatError
from .numerics import Grid1D, LogSymmetricGrid, SampledField2D
from .shearlet import CoefficientArray, ParamGrid

COEFFICIENT_HEADER = ("b1", "b2", "s", "a", "re", "im")
FIELD_HEADER = ("x", "y", "re", "im")
POLAR_HEADER = ("theta", "q", "value")
AFFINE_HEADER = ("v", "t", "value")
DECAY_HEADER = ("k1", "k2", "l", "m", "level", "value")
UNIFORM_RTOL = 1e-9


def fmt(x) -> str:
    """17 significant digits; ints stay ints and negative zero prints as 0."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".17g")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(fmt(x) for x in r) + "\n")
    return path


def read_csv(path, header: Sequence[str]) -> np.ndarray:
    """Numeric body of a CSV whose header must equal ``header``; shape ``(rows, cols)``."""
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from None
    rows = [r for r in rows if r]
    if not rows:
        raise InputFormatError(f"{path} is empty")
    got = tuple(c.strip() for c in rows[0])
    if got != tuple(header):
        raise InputFormatError(f"{path}: header {','.join(got)!r}, expected {','.join(header)!r}")
    body = rows[1:]
    if not body:
        raise InputFormatError(f"{path} has a header but no data rows")
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=float)
    except ValueError as exc:
        raise InputFormatError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise InputFormatError(f"{path}: every row needs {len(header)} columns")
    if not np.all(np.isfinite(data)):
        raise InputFormatError(f"{path}: non-finite entry")
    return data


def uniform_axis(values, name: str = "axis") -> Grid1D:
    """Grid of the sorted unique ``values``; spacing must be uniform within 1e-9 relative."""
    u = np.unique(values)
    if u.size < 2:
        raise InputFormatError(f"{name} needs at least two distinct coordinates")
    d = np.diff(u)
    h = (u[-1] - u[0]) / (u.size - 1)
    if np.max(np.abs(d - h)) > UNIFORM_RTOL * max(abs(h), np.max(np.abs(u))):
        raise InputFormatError(f"{name} coordinates are not uniformly spaced")
    return Grid1D(float(u[0]), float(u[-1]), int(u.size))


# ---------------------------------------------------------------------------
# fields

def write_field_csv(path, field: SampledField2D) -> Path:
    """``x,y,re,im`` rows, y in the outer loop and x in the inner one."""
    x, y, v = field.xgrid.nodes, field.ygrid.nodes, field.values
    rows = ((x[i], y[j], v[i, j].real, v[i, j].imag) for j in range(y.size) for i in range(x.size))
    return write_csv(path, FIELD_HEADER, rows)


def read_field_csv(path) -> SampledField2D:
    """Inverse of :func:`write_field_csv`; rows may come in any order but must fill the grid."""
    d = read_csv(path, FIELD_HEADER)
    xg, yg = uniform_axis(d[:, 0], "x"), uniform_axis(d[:, 1], "y")
    if d.shape[0] != xg.n * yg.n:
        raise InputFormatError(f"{path}: {d.shape[0]} rows do not fill a {xg.n}x{yg.n} grid")
    i = np.rint((d[:, 0] - xg.min) / xg.spacing).astype(int)
    j = np.rint((d[:, 1] - yg.min) / yg.spacing).astype(int)
    vals = np.full((xg.n, yg.n), np.nan, dtype=complex)
    vals[i, j] = d[:, 2] + 1j * d[:, 3]
    if np.any(np.isnan(vals)):
        raise InputFormatError(f"{path}: repeated or missing grid points")
    return SampledField2D(xg, yg, vals)


# ---------------------------------------------------------------------------
# coefficients

def write_coefficients_csv(path, c: CoefficientArray) -> Path:
    """``b1,b2,s,a,re,im`` rows in C order of ``(b1, b2, s, a)`` indices."""
    g = c.grid
    b1, b2, s, a = g.b1_grid.nodes, g.b2_grid.nodes, g.s_grid.nodes, g.a_nodes
    B1, B2, S, A = np.meshgrid(b1, b2, s, a, indexing="ij")
    v = c.values
    cols = [B1.ravel(), B2.ravel(), S.ravel(), A.ravel(), v.real.ravel(), v.imag.ravel()]
    return write_csv(path, COEFFICIENT_HEADER, zip(*cols))


def _scale_axis(a) -> LogSymmetricGrid:
    u = np.unique(a)
    if np.any(u == 0):
        raise InputFormatError("scale a = 0 is not allowed")
    pos = u[u > 0]
    neg = -u[u < 0][::-1]
    if pos.size < 2:
        raise InputFormatError("need at least two positive scales")
    if neg.size and (neg.size != pos.size or not np.allclose(neg, pos, rtol=UNIFORM_RTOL)):
        raise InputFormatError("negative scales must mirror the positive ones")
    g = LogSymmetricGrid(float(pos[0]), float(pos[-1]), int(pos.size), bool(neg.size))
    if not np.allclose(g.positive_nodes, pos, rtol=1e-9):
        raise InputFormatError("scales are not geometrically spaced")
    return g


def read_coefficients_csv(path) -> CoefficientArray:
    d = read_csv(path, COEFFICIENT_HEADER)
    g = ParamGrid(uniform_axis(d[:, 0], "b1"), uniform_axis(d[:, 1], "b2"),
                  uniform_axis(d[:, 2], "s"), _scale_axis(d[:, 3]))
    if d.shape[0] != g.size:
        raise InputFormatError(f"{path}: {d.shape[0]} rows do not fill the {g.shape} grid")
    idx = [np.rint((d[:, k] - ax.min) / ax.spacing).astype(int)
           for k, ax in enumerate((g.b1_grid, g.b2_grid, g.s_grid))]
    idx.append(np.searchsorted(g.a_nodes, d[:, 3] - 1e-9 * np.abs(d[:, 3])))
    vals = np.full(g.shape, np.nan, dtype=complex)
    vals[tuple(idx)] = d[:, 4] + 1j * d[:, 5]
    if np.any(np.isnan(vals)):
        raise InputFormatError(f"{path}: repeated or missing grid points")
    return CoefficientArray(g, vals)


# ---------------------------------------------------------------------------
# heatmaps

def pgm_bytes(image) -> bytes:
    """Binary greymap (``P5``, maxval 255) with linear min-max normalization.

    Row ``r`` of ``image`` becomes image row ``r``; a constant image maps to 0.
    """
    img = np.asarray(image, dtype=float)
    if img.ndim != 2 or img.size == 0:
        raise InputFormatError("heatmap needs a non-empty 2D array")
    lo, hi = float(img.min()), float(img.max())
    scaled = np.zeros(img.shape) if hi == lo else (img - lo) / (hi - lo) * 255.0
    pix = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)
    h, w = pix.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pix.tobytes()


def write_pgm(path, image) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(pgm_bytes(image))
    return path


def read_pgm(path) -> np.ndarray:
    """Parse a ``P5`` file written by :func:`write_pgm`."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise InputFormatError(f"{path} is not a binary PGM")
    w, h = (int(t) for t in parts[1].split())
    if int(parts[2]) != 255 or len(parts[3]) != w * h:
        raise InputFormatError(f"{path}: unexpected PGM payload")
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def coefficient_heatmap(c: CoefficientArray, s_index: int, a_index: int) -> np.ndarray:
    """``|c|`` over ``(b2, b1)`` at one ``(s, a)`` node; image rows follow ``b2``."""
    n_s, n_a = c.grid.shape[2:]
    if not (0 <= s_index < n_s and 0 <= a_index < n_a):
        raise InputFormatError(f"heatmap index ({s_index},{a_index}) outside {n_s}x{n_a}")
    return np.abs(c.values[:, :, s_index, a_index]).T
