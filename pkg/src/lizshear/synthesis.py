"""Shearlet synthesis, reconstruction and the analysis/synthesis duality.

The synthesis operator maps a coefficient function on the parameter lattice to
``S^t Phi(x) = sum_g w_g Phi(g) S_g psi(x)`` with Haar weights ``w_g``.  Two
evaluators are provided: a space-domain one built from the generator's
``xi``-quadrature, and a frequency-domain one using
``F S_g psi(xi) = |a|^{3/4} exp(-2 pi i b . xi) F psi(A_a ^tS_s xi)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .exceptions import InvalidArgumentError
from .numerics import TWO_PI, Grid1D, SampledField2D, inverse_fourier2d
from .shearlet import (AdmissibleVector, CoefficientArray, ParamGrid, _sheared_freq_args,
                       admissibility_constant, analyze_spectral)
from .testfn import AnalyticFunction2D

BOUNDARY_DECAY = 1e-3
_CHUNK = 2 ** 21


class BoundaryDecayWarning(RuntimeWarning):
    """Coefficient function does not decay towards the edges of its grid."""


def check_boundary_decay(Phi: CoefficientArray, threshold: float = BOUNDARY_DECAY) -> bool:
    """``True`` if the boundary maximum is below ``threshold`` times the interior maximum.

    The ``a`` axis counts its smallest and largest ``|a|`` nodes as boundary.
    """
    v = np.abs(Phi.values)
    total = v.max(initial=0.0)
    if total == 0:
        return True
    inner = np.ones(v.shape, dtype=bool)
    for axis in range(3):
        idx = [slice(None)] * 4
        for end in (0, -1):
            idx[axis] = end
            inner[tuple(idx)] = False
    a = np.abs(Phi.grid.a_nodes)
    inner[..., (a == a.min()) | (a == a.max())] = False
    edge = v[~inner].max(initial=0.0)
    return bool(edge < threshold * total)


def _warn_boundary(Phi):
    if not check_boundary_decay(Phi):
        warnings.warn("coefficient function does not decay on the grid boundary; "
                      "the synthesized field carries truncation error", BoundaryDecayWarning,
                      stacklevel=3)


def _weighted_slabs(Phi: CoefficientArray):
    """Yield ``(s, a, c)`` with ``c`` the Haar-weighted ``b``-plane, skipping zero slabs."""
    g = Phi.grid
    wb = np.outer(g.b1_grid.weights, g.b2_grid.weights)
    ws = g.s_grid.weights
    a_nodes = g.a_nodes
    wa = g.a_grid.weights * np.abs(a_nodes) ** -3.0
    for k, s in enumerate(g.s_grid.nodes):
        for l, a in enumerate(a_nodes):
            plane = Phi.values[:, :, k, l]
            if not np.any(plane):
                continue
            yield float(s), float(a), plane * wb * (ws[k] * wa[l])


def _active_reach(Phi: CoefficientArray, psi: AdmissibleVector):
    """Space extent and bandwidth of the synthesized function."""
    g = Phi.grid
    Y1, Y2 = psi.space_box
    B1, B2 = psi.bandwidth
    ext, bw = [0.0, 0.0], [0.0, 0.0]
    bm1 = max(abs(g.b1_grid.min), abs(g.b1_grid.max))
    bm2 = max(abs(g.b2_grid.min), abs(g.b2_grid.max))
    for s, a, _ in _weighted_slabs(Phi):
        ra = abs(a) ** 0.5
        ext[0] = max(ext[0], bm1 + abs(a) * Y1 + abs(s) * ra * Y2)
        ext[1] = max(ext[1], bm2 + ra * Y2)
        bw[0] = max(bw[0], B1 / abs(a))
        bw[1] = max(bw[1], abs(s) * B1 / abs(a) + B2 / ra)
    if ext[0] == 0.0:
        ext = [bm1 + Y1, bm2 + Y2]
        bw = [B1, B2]
    return tuple(ext), tuple(bw)


# ---------------------------------------------------------------------------
# space domain

def _spatial_slab(c, b1, b2, x1, x2, psi, s, a):
    """``|a|^{-3/4} sum_b c(b) psi(M^{-1}(x - b))`` on the tensor grid ``x1 x x2``.

    With ``y1 = (X1 + s X2) / a`` and ``y2 = X2 / d``, ``d = a |a|^{-1/2}``, the
    generator's ``xi``-quadrature factors into a ``b2`` sum and a ``b1`` sum.
    """
    d = a * abs(a) ** -0.5
    D2 = x2[:, None] - b2[None, :]
    X1max = float(np.max(np.abs(x1[:, None] - b1[None, :])))
    X2max = float(np.max(np.abs(D2)))
    xi, W = psi.xi_nodes(psi._span((X1max + abs(s) * X2max) / abs(a), X2max / abs(d)))
    H = np.zeros((x1.size, x2.size), dtype=complex)
    step = max(1, _CHUNK // max(D2.size, 1))
    for i in range(0, xi.size, step):
        k = xi[i:i + step]
        arg = k[:, None, None] * D2[None, :, :]
        Q = psi.psi2.space(arg / d) * np.exp(TWO_PI * 1j * s * arg / a)
        G = Q @ c.T
        Gp = np.einsum("kib,kb->ki", G, np.exp(-TWO_PI * 1j * np.outer(k, b1) / a))
        H += (np.exp(TWO_PI * 1j * np.outer(x1, k) / a) * W[i:i + step]) @ Gp
    return abs(a) ** -0.75 * H


def synthesize(Phi: CoefficientArray, psi: AdmissibleVector, x_grid: Grid1D,
               y_grid: Grid1D) -> SampledField2D:
    """``S^t_psi Phi`` on ``x_grid x y_grid`` as a Haar-weighted sum of atoms.

    Warns with :class:`BoundaryDecayWarning` when ``Phi`` does not decay towards
    the edges of its grid.
    """
    _warn_boundary(Phi)
    g = Phi.grid
    b1, b2 = g.b1_grid.nodes, g.b2_grid.nodes
    x1, x2 = x_grid.nodes, y_grid.nodes
    out = np.zeros((x1.size, x2.size), dtype=complex)
    for s, a, c in _weighted_slabs(Phi):
        out += _spatial_slab(c, b1, b2, x1, x2, psi, s, a)
    return SampledField2D(x_grid, y_grid, out)


def synthesize_points(Phi: CoefficientArray, psi: AdmissibleVector, x1, x2) -> np.ndarray:
    """``S^t_psi Phi`` at arbitrary points (broadcast ``x1``, ``x2``)."""
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    p1, p2 = x1.ravel(), x2.ravel()
    g = Phi.grid
    b1, b2 = g.b1_grid.nodes, g.b2_grid.nodes
    out = np.zeros(p1.size, dtype=complex)
    for s, a, c in _weighted_slabs(Phi):
        d = a * abs(a) ** -0.5
        X1 = p1[:, None, None] - b1[None, :, None]
        X2 = p2[:, None, None] - b2[None, None, :]
        vals = psi.space((X1 + s * X2) / a, np.broadcast_to(X2 / d, X1.shape[:1] + X2.shape[1:]))
        out += abs(a) ** -0.75 * np.einsum("pij,ij->p", vals, c)
    return out.reshape(x1.shape)


# ---------------------------------------------------------------------------
# frequency domain

def _spectral_synth_grid(Phi, psi, xi1, xi2):
    g = Phi.grid
    b1, b2 = g.b1_grid.nodes, g.b2_grid.nodes
    E1 = np.exp(-TWO_PI * 1j * np.outer(xi1, b1))
    E2 = np.exp(-TWO_PI * 1j * np.outer(b2, xi2))
    out = np.zeros((xi1.size, xi2.size), dtype=complex)
    for s, a, c in _weighted_slabs(Phi):
        e1, e2 = _sheared_freq_args(xi1[:, None], xi2[None, :], s, a)
        F = psi.freq(e1, e2)
        rows = np.flatnonzero(np.any(F != 0, axis=1))
        if rows.size == 0:
            continue
        out[rows] += abs(a) ** 0.75 * F[rows] * ((E1[rows] @ c) @ E2)
    # the generator's spectrum vanishes to infinite order on xi1 = 0
    out[xi1 == 0, :] = 0.0
    return out


def _spectral_synth_points(Phi, psi, xi1, xi2):
    xi1, xi2 = np.broadcast_arrays(np.asarray(xi1, float), np.asarray(xi2, float))
    k1, k2 = xi1.ravel(), xi2.ravel()
    g = Phi.grid
    b1, b2 = g.b1_grid.nodes, g.b2_grid.nodes
    out = np.zeros(k1.size, dtype=complex)
    for s, a, c in _weighted_slabs(Phi):
        e1, e2 = _sheared_freq_args(k1, k2, s, a)
        F = psi.freq(e1, e2)
        nz = np.flatnonzero(F)
        if nz.size == 0:
            continue
        E1 = np.exp(-TWO_PI * 1j * np.outer(k1[nz], b1))
        E2 = np.exp(-TWO_PI * 1j * np.outer(k2[nz], b2))
        out[nz] += abs(a) ** 0.75 * F[nz] * np.einsum("pi,ij,pj->p", E1, c, E2)
    out[k1 == 0] = 0.0
    return out.reshape(xi1.shape)


def synthesize_spectral(Phi: CoefficientArray, psi: AdmissibleVector, xi1_grid: Grid1D,
                        xi2_grid: Grid1D) -> SampledField2D:
    """``F(S^t_psi Phi)`` on ``xi1_grid x xi2_grid``.

    Per ``(s, a)`` slab the ``b``-plane is Fourier transformed by two matrix
    products and multiplied with ``|a|^{3/4} F psi(A_a ^tS_s xi)``.  Nodes on
    ``xi1 = 0`` are set to 0.
    """
    _warn_boundary(Phi)
    vals = _spectral_synth_grid(Phi, psi, xi1_grid.nodes, xi2_grid.nodes)
    return SampledField2D(xi1_grid, xi2_grid, vals)


def synthesized_function(Phi: CoefficientArray, psi: AdmissibleVector) -> AnalyticFunction2D:
    """``S^t_psi Phi`` as a function with exact frequency and space evaluators."""
    ext, bw = _active_reach(Phi, psi)
    return AnalyticFunction2D(
        lambda k1, k2: _spectral_synth_points(Phi, psi, k1, k2),
        lambda x1, x2: synthesize_points(Phi, psi, x1, x2),
        f"synthesis[{psi.label}]", ext, bw, "frequency",
        lambda k1, k2: _spectral_synth_grid(Phi, psi, k1, k2))


def frequency_box(f: AnalyticFunction2D, g: AnalyticFunction2D, over: float = 1.2,
                  box=None):
    """Symmetric ``xi`` grids covering ``box`` (default: ``f``'s band) for ``f``-``g`` integrals.

    The spacing keeps the periodic images of ``f`` and ``g`` apart.
    """
    box = f.bandwidth if box is None else box
    return tuple(Grid1D.with_spacing(-B, B, 1.0 / (over * (e1 + e2)))
                 for B, e1, e2 in zip(box, f.extent, g.extent))


def parseval_pairing(f: AnalyticFunction2D, g: AnalyticFunction2D, over: float = 1.2) -> complex:
    """Bilinear ``int f(x) g(x) dx = int Ff(xi) Fg(-xi) dxi`` over ``f``'s band."""
    box = tuple(min(p, q) for p, q in zip(f.bandwidth, g.bandwidth))
    g1, g2 = frequency_box(f, g, over, box)
    F = f.freq_grid(g1.nodes, g2.nodes)
    G = g.freq_grid(-g1.nodes, -g2.nodes)
    return complex(g1.weights @ (F * G) @ g2.weights)


# ---------------------------------------------------------------------------
# reconstruction

@dataclass(frozen=True)
class SynthesisResult:
    """Reconstructed field and its residual record."""

    field: SampledField2D = dc_field(repr=False)
    residual_report: dict = dc_field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.residual_report["residual"]


def reconstruction_grids(f: AnalyticFunction2D, grid: ParamGrid, band_margin: float = 1.15):
    """Frequency box and x grid used to score a reconstruction.

    The field is represented band-limited to ``band_margin`` times ``f``'s band,
    sampled at the Nyquist rate of that box over ``f``'s extent (at least the
    translation window).
    """
    box = tuple(band_margin * B for B in f.bandwidth)
    bmax = (max(abs(grid.b1_grid.min), abs(grid.b1_grid.max)),
            max(abs(grid.b2_grid.min), abs(grid.b2_grid.max)))
    X = tuple(max(e, b) for e, b in zip(f.extent, bmax))
    x_grids = tuple(Grid1D.with_spacing(-Xj, Xj, 1.0 / (2.0 * Bj)) for Xj, Bj in zip(X, box))
    return box, x_grids


def refinement_levels(grid: ParamGrid) -> list:
    """Three nested lattices: coarsened, the grid itself, refined by 2 on every axis."""
    return [grid.coarsened(2, 2, 3), grid, grid.refined(2)]


def band_limited_field(Phi: CoefficientArray, psi: AdmissibleVector, x_grid: Grid1D,
                       y_grid: Grid1D, box=None, over: float = 1.2) -> SampledField2D:
    """``S^t_psi Phi`` restricted to the frequency box ``box`` and sampled on ``x_grid x y_grid``.

    ``box`` defaults to the Nyquist box of the x grid.  The frequency spacing
    keeps periodic images of the field clear of the x window.
    """
    if box is None:
        box = (0.5 / x_grid.spacing, 0.5 / y_grid.spacing)
    ext, _ = _active_reach(Phi, psi)
    X = (max(abs(x_grid.min), abs(x_grid.max)), max(abs(y_grid.min), abs(y_grid.max)))
    k1, k2 = (Grid1D.with_spacing(-B, B, 1.0 / (over * (Xj + e))) for B, Xj, e in zip(box, X, ext))
    spec = SampledField2D(k1, k2, _spectral_synth_grid(Phi, psi, k1.nodes, k2.nodes))
    return inverse_fourier2d(spec, x_grid, y_grid)


def reconstruct(f: AnalyticFunction2D, psi: AdmissibleVector, grid: ParamGrid,
                coefficients: CoefficientArray | None = None) -> SynthesisResult:
    """``f ~ C_psi^{-1} S^t_psi S_psi f`` and its relative L2 residual on the x grid.

    Coefficients come from :func:`analyze_spectral` unless supplied.  The field
    is obtained from the frequency-domain synthesis over the reconstruction
    box (see :func:`reconstruction_grids`) followed by an inverse transform.
    """
    C = admissibility_constant(psi).value
    coeffs = analyze_spectral(f, psi, grid) if coefficients is None else coefficients
    if coeffs.grid != grid:
        raise InvalidArgumentError("coefficients do not live on the requested grid")
    box, (xg, yg) = reconstruction_grids(f, grid)
    rec = band_limited_field(coeffs * (1.0 / C), psi, xg, yg, box)
    if f.has_space:
        X1, X2 = np.meshgrid(xg.nodes, yg.nodes, indexing="ij")
        target = SampledField2D(xg, yg, f.space(X1, X2))
    else:
        k1, k2 = (Grid1D.with_spacing(-B, B, 1.0 / (2.4 * e)) for B, e in zip(box, f.extent))
        target = inverse_fourier2d(SampledField2D(k1, k2, f.freq_grid(k1.nodes, k2.nodes)), xg, yg)
    norm = target.l2_norm()
    err = SampledField2D(xg, yg, rec.values - target.values).l2_norm()
    zero = norm == 0.0
    report = {
        "residual": 0.0 if zero and err == 0.0 else (err / norm if norm > 0 else float("inf")),
        "zero_input": bool(zero),
        "C_psi": C,
        "grid": grid.describe(),
        "x_grid": [xg.min, xg.max, xg.n],
        "y_grid": [yg.min, yg.max, yg.n],
        "frequency_box": list(box),
    }
    return SynthesisResult(rec, report)


# ---------------------------------------------------------------------------
# duality

def gaussian_bump(grid: ParamGrid, centre=(0.0, 0.0, 0.0, 0.0), widths=(1.0, 1.0, 1.0, 0.5),
                  negative_scale_factor: float = 1.0) -> CoefficientArray:
    """Separable bump ``exp(-pi (|b - b0|^2 / w_b^2 + (s - s0)^2 / w_s^2 + log(|a| / a0)^2 / w_a^2))``.

    ``centre = (b1, b2, s, log a0)`` and ``widths = (w_b1, w_b2, w_s, w_a)``;
    nodes with ``a < 0`` are scaled by ``negative_scale_factor``.
    """
    b1, b2, s0, la0 = centre
    w1, w2, ws, wa = widths
    g = lambda x, c, w: np.exp(-np.pi * ((x - c) / w) ** 2)
    a = grid.a_nodes
    ga = g(np.log(np.abs(a)), la0, wa) * np.where(a < 0, negative_scale_factor, 1.0)
    vals = np.einsum("i,j,k,l->ijkl", g(grid.b1_grid.nodes, b1, w1), g(grid.b2_grid.nodes, b2, w2),
                     g(grid.s_grid.nodes, s0, ws), ga)
    return CoefficientArray(grid, vals)


@dataclass(frozen=True)
class DualityResult:
    discrepancy: float
    lhs: complex
    rhs: complex
    degenerate: bool


def relative_discrepancy(lhs: complex, rhs: complex, floor: float = 1e-12):
    """``|lhs - rhs| / max(|lhs|, |rhs|)``, or ``(0, True)`` when both are below ``floor``."""
    scale = max(abs(lhs), abs(rhs))
    if scale < floor:
        return 0.0, True
    return abs(lhs - rhs) / scale, False


def duality_check(f: AnalyticFunction2D, Phi: CoefficientArray, psi: AdmissibleVector,
                  conjugate: bool = True) -> DualityResult:
    """Compare ``int f S^t_{conj psi} Phi dx`` with ``sum_g w_g S_psi f(g) Phi(g)``.

    The left side pairs ``f`` with the synthesized function in frequency; the
    right side uses spectral-path coefficients.  ``conjugate=False`` synthesizes
    with ``psi`` itself, which breaks the identity for complex generators.
    """
    gen = psi.conjugate() if conjugate else psi
    lhs = parseval_pairing(f, synthesized_function(Phi, gen))
    coeffs = analyze_spectral(f, psi, Phi.grid)
    rhs = complex(np.sum(Phi.grid.haar_weights * coeffs.values * Phi.values))
    d, degenerate = relative_discrepancy(lhs, rhs)
    return DualityResult(d, lhs, rhs, degenerate)
