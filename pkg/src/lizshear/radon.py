"""Polar and affine Radon transforms.

The affine transform integrates over the lines ``x + v y = t``; the polar one
over ``x . n(theta) = q``.  Horizontal lines have no affine coordinates, so
slopes are capped at ``|v| <= V_MAX``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .exceptions import InvalidArgumentError, OutOfRangeError
from .numerics import TWO_PI, Grid1D, SampledSignal1D
from .testfn import AnalyticFunction2D

V_MAX = 10.0
DEFAULT_LINE_GRID = Grid1D(-8.0, 8.0, 801)


@dataclass(frozen=True)
class PolarSinogram:
    """``R^pol f(theta, q)`` on ``theta_grid x q_grid`` with ``theta`` in ``[-pi, pi)``."""

    theta_grid: Grid1D
    q_grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.theta_grid.min < -np.pi - 1e-12 or self.theta_grid.max >= np.pi:
            raise InvalidArgumentError("theta nodes must lie in [-pi, pi)")
        v = np.asarray(self.values)
        if v.shape != (self.theta_grid.n, self.q_grid.n):
            raise InvalidArgumentError("sinogram values do not match its grids")

    def interpolator(self):
        """Bicubic spline over ``(theta, q)`` (real and imaginary parts separately)."""
        th, q = self.theta_grid.nodes, self.q_grid.nodes
        re = RectBivariateSpline(th, q, np.real(self.values), kx=3, ky=3)
        im = RectBivariateSpline(th, q, np.imag(self.values), kx=3, ky=3)
        return lambda t, s: re.ev(t, s) + 1j * im.ev(t, s)

    def __call__(self, theta, q):
        theta = np.asarray(theta, dtype=float)
        q = np.asarray(q, dtype=float)
        tg, qg = self.theta_grid, self.q_grid
        eps = 1e-12
        if (np.any(theta < tg.min - eps) or np.any(theta > tg.max + eps)
                or np.any(q < qg.min - eps) or np.any(q > qg.max + eps)):
            raise OutOfRangeError("requested (theta, q) lies outside the sinogram")
        return self.interpolator()(theta, q)


@dataclass(frozen=True)
class AffineSinogram:
    """``R^aff f(v, t)`` on ``v_grid x t_grid``; ``v_grid`` may be any node array."""

    v_grid: object
    t_grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (_nodes(self.v_grid).size, self.t_grid.n):
            raise InvalidArgumentError("sinogram values do not match its grids")


def _nodes(g):
    return g.nodes if isinstance(g, Grid1D) else np.atleast_1d(np.asarray(g, dtype=float))


def radon_polar(f: AnalyticFunction2D, theta_grid: Grid1D, q_grid: Grid1D,
                line_grid: Grid1D = DEFAULT_LINE_GRID) -> PolarSinogram:
    """``int f(q cos th - y sin th, q sin th + y cos th) dy`` by trapezoid in ``y``."""
    th = theta_grid.nodes
    q = q_grid.nodes
    y = line_grid.nodes
    w = line_grid.weights
    out = np.empty((th.size, q.size), dtype=complex)
    for i, t in enumerate(th):
        c, s = np.cos(t), np.sin(t)
        x1 = q[:, None] * c - y[None, :] * s
        x2 = q[:, None] * s + y[None, :] * c
        out[i] = f.space(x1, x2) @ w
    return PolarSinogram(theta_grid, q_grid, out)


def radon_polar_column(f: AnalyticFunction2D, theta: float, q,
                       line_grid: Grid1D = DEFAULT_LINE_GRID) -> np.ndarray:
    """One column ``q -> R^pol f(theta, q)`` at arbitrary ``q`` nodes."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    y = line_grid.nodes
    c, s = np.cos(theta), np.sin(theta)
    x1 = q[:, None] * c - y[None, :] * s
    x2 = q[:, None] * s + y[None, :] * c
    return f.space(x1, x2) @ line_grid.weights


def _check_slopes(v):
    if np.any(np.abs(v) > V_MAX):
        raise OutOfRangeError(f"affine slopes are limited to |v| <= {V_MAX}")


def radon_affine_direct(f: AnalyticFunction2D, v_grid, t_grid,
                        line_grid: Grid1D = DEFAULT_LINE_GRID) -> AffineSinogram:
    """``int f(t - v y, y) dy`` by trapezoid in ``y``."""
    v = _nodes(v_grid)
    _check_slopes(v)
    t = t_grid.nodes
    y = line_grid.nodes
    w = line_grid.weights
    out = np.empty((v.size, t.size), dtype=complex)
    for i, vi in enumerate(v):
        out[i] = f.space(t[:, None] - vi * y[None, :], np.broadcast_to(y, (t.size, y.size))) @ w
    return AffineSinogram(v_grid if isinstance(v_grid, Grid1D) else v, t_grid, out)


def slice_tau_grid(f: AnalyticFunction2D, v, t_extent: float, over: float = 1.2):
    """Trapezoid nodes and weights in ``tau`` for inverting ``tau -> Ff(tau, tau v)``."""
    av = np.abs(np.atleast_1d(v))
    vmax, vmin = float(av.max()), float(av.min())
    # widest band over the batch: the slice leaves the frequency box at
    # |tau| = bw1 or |tau v| = bw2, whichever comes first
    bw = f.bandwidth[0] if vmin == 0 else min(f.bandwidth[0], f.bandwidth[1] / vmin)
    support = f.extent[0] + vmax * f.extent[1]
    g = Grid1D.with_spacing(-bw, bw, 1.0 / (over * (support + t_extent)))
    return g.nodes, g.weights


def affine_slices(f: AnalyticFunction2D, v, t) -> np.ndarray:
    """``R^aff f(v_i, t_j)`` via the Fourier slice identity, one row per slope."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_slopes(v)
    tau, w = slice_tau_grid(f, v, float(np.max(np.abs(t), initial=0.0)))
    spec = f.freq(tau[None, :], tau[None, :] * v[:, None]) * w
    return spec @ np.exp(TWO_PI * 1j * np.outer(tau, t))


def radon_affine_spectral(f: AnalyticFunction2D, v: float, t_grid: Grid1D) -> SampledSignal1D:
    """``R^aff f(v, .) = F^{-1}[tau -> Ff(tau, tau v)]`` on ``t_grid``."""
    return SampledSignal1D(t_grid, affine_slices(f, [float(v)], t_grid.nodes)[0])


def polar_to_affine(p: PolarSinogram, v, t):
    """``(1 + v^2)^{-1/2} R^pol f(arctan v, t / sqrt(1 + v^2))`` from a sampled polar sinogram."""
    v = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    _check_slopes(v)
    c = np.sqrt(1.0 + v ** 2)
    return p(np.arctan(v), t / c) / c
