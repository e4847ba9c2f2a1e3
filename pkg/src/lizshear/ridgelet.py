"""Ridgelet transform and its relation to the shearlet transform.

``R_psi f(theta, b, a) = int f(x) a^{-1} conj(psi((x . n(theta) - b) / a)) dx``
for ``a > 0`` is computed as ``a^{-1/2}`` times the wavelet transform of the
polar Radon projection at angle ``theta``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .exceptions import InvalidArgumentError, InvalidScaleError
from .numerics import Grid1D, SampledSignal1D
from .radon import radon_polar_column
from .shearlet import AdmissibleVector, GroupElement, _v_window, _tau_band, analyze_spectral_at
from .testfn import AnalyticFunction1D, AnalyticFunction2D
from .wavelet import wavelet_transform


def _as_nodes(g):
    if isinstance(g, Grid1D):
        return g.nodes
    return np.atleast_1d(np.asarray(g, dtype=float))


def _check_scales(a):
    if np.any(a <= 0):
        raise InvalidScaleError("ridgelet scales must be positive")


def _projection_grids(f: AnalyticFunction2D, over: float = 2.4):
    """``q`` samples and line nodes covering the support of every projection."""
    reach = float(np.hypot(*f.extent))
    g = Grid1D.with_spacing(-reach, reach, 1.0 / (over * max(f.bandwidth)))
    return g, g


def ridgelet_transform(f: AnalyticFunction2D, psi: AnalyticFunction1D, theta, b, a) -> np.ndarray:
    """Ridgelet coefficients as a ``(len(theta), len(b), len(a))`` array.

    Each polar projection ``q -> R^pol f(theta, q)`` is sampled by line
    quadrature and passed to the 1D wavelet transform.

    Raises
    ------
    InvalidScaleError
        If any scale is not positive.
    """
    th, bn, an = _as_nodes(theta), _as_nodes(b), _as_nodes(a)
    _check_scales(an)
    qg, line = _projection_grids(f)
    out = np.empty((th.size, bn.size, an.size), dtype=complex)
    for i, t in enumerate(th):
        col = SampledSignal1D(qg, radon_polar_column(f, t, qg.nodes, line))
        out[i] = wavelet_transform(col, psi, bn, an) * an[None, :] ** -0.5
    return out


def _rhs_nodes(f, psi: AdmissibleVector, g: GroupElement):
    """``v`` nodes, weights and the ridgelet arguments needed at ``g``."""
    lo, hi = _tau_band(psi, f, g.a)
    v, wv = _v_window(psi, g.s, g.a, abs(g.b[1]), f, max(hi, lo))
    c = np.sqrt(1.0 + v ** 2)
    theta = np.arctan(v)
    bq = (g.b[0] + v * g.b[1]) / c
    aq = g.a / c
    # |a|^{-3/4} (1+v^2)^{-1/4} from the shearlet side, times sqrt(a / sqrt(1+v^2))
    # converting the 1/a ridgelet normalization to the 1/sqrt(a) wavelet one
    weight = wv * g.a ** -0.75 * c ** -0.5 * np.sqrt(aq) * np.conj(psi.phi2((v - g.s) / g.a ** 0.5))
    return theta, bq, aq, weight


def ridgelet_side(f: AnalyticFunction2D, psi: AdmissibleVector, points: Sequence[GroupElement],
                  mode: str = "interpolated", n_theta: int = 97, db: float = 0.02,
                  n_a: int = 41) -> np.ndarray:
    """Shearlet coefficients at ``points`` assembled from ridgelet values.

    ``mode="exact"`` evaluates the ridgelet at every required ``(theta, b, a)``;
    ``mode="interpolated"`` tabulates it once on a tensor grid and uses tricubic
    interpolation.
    """
    if mode not in ("exact", "interpolated"):
        raise InvalidArgumentError(f"unknown mode {mode!r}")
    points = list(points)
    for g in points:
        if g.a <= 0:
            raise InvalidScaleError("ridgelet comparison needs a > 0")
    nodes = [_rhs_nodes(f, psi, g) for g in points]
    out = np.empty(len(points), dtype=complex)
    if mode == "exact":
        qg, line = _projection_grids(f)
        for k, (th, bq, aq, w) in enumerate(nodes):
            vals = np.empty(th.size, dtype=complex)
            for j in range(th.size):
                col = SampledSignal1D(qg, radon_polar_column(f, th[j], qg.nodes, line))
                vals[j] = wavelet_transform(col, psi.chi1, [bq[j]], [aq[j]])[0, 0] * aq[j] ** -0.5
            out[k] = np.sum(vals * w)
        return out
    th_all = np.concatenate([n[0] for n in nodes])
    b_all = np.concatenate([n[1] for n in nodes])
    a_all = np.concatenate([n[2] for n in nodes])
    pad = lambda lo, hi, h: (lo - 2 * h, hi + 2 * h)
    t_lo, t_hi = pad(th_all.min(), th_all.max(), (th_all.max() - th_all.min() + 1e-3) / (n_theta - 5))
    tg = np.linspace(t_lo, t_hi, n_theta)
    b_lo, b_hi = pad(b_all.min(), b_all.max(), db)
    bg = Grid1D.with_spacing(b_lo, b_hi, db).nodes
    la = np.log(a_all)
    ha = (la.max() - la.min() + 1e-3) / (n_a - 5)
    ag = np.exp(np.linspace(la.min() - 2 * ha, la.max() + 2 * ha, n_a))
    table = ridgelet_transform(f, psi.chi1, tg, bg, ag)
    axes = (tg, bg, np.log(ag))
    re = RegularGridInterpolator(axes, table.real, method="cubic")
    im = RegularGridInterpolator(axes, table.imag, method="cubic")
    for k, (th, bq, aq, w) in enumerate(nodes):
        pts = np.column_stack([th, bq, np.log(aq)])
        out[k] = np.sum((re(pts) + 1j * im(pts)) * w)
    return out


def ridgelet_shearlet_check(f: AnalyticFunction2D, psi: AdmissibleVector,
                            points: Iterable[GroupElement], mode: str = "interpolated",
                            **kwargs) -> float:
    """Largest relative deviation between ridgelet-assembled and spectral coefficients.

    Returns 0 when both sides vanish identically.
    """
    points = list(points)
    lhs = ridgelet_side(f, psi, points, mode, **kwargs)
    rhs = analyze_spectral_at(f, psi, points)
    denom = np.where(np.abs(rhs) > 0, np.abs(rhs), np.abs(lhs))
    if np.all(denom == 0):
        return 0.0
    ok = denom > 0
    return float(np.max(np.abs(lhs - rhs)[ok] / denom[ok]))
