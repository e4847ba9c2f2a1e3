"""Lizorkin test functions: evaluators, moments, seminorms, antiderivatives.

A test function is carried by analytic evaluators in space and/or frequency
together with the half-widths outside of which it is numerically zero.  These
half-widths size every quadrature grid built downstream, so they are chosen at
roughly the 1e-12 level rather than at machine zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import ndimage

from ._kernels import geometric_sum_real
from .exceptions import CapabilityError, InvalidArgumentError, NotInS0Error
from .numerics import TWO_PI, Grid1D, SampledField2D, fourier2d, quad

# Chunk size (number of complex entries) for evaluator matrices.
_CHUNK = 2 ** 22


def _chunked(fn, x, width):
    """Apply ``fn`` to ``x.ravel()`` in slices so ``len(slice) * width`` stays bounded."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    step = max(1, _CHUNK // max(width, 1))
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, step):
        out[i:i + step] = fn(flat[i:i + step])
    return out.reshape(x.shape)


@dataclass(frozen=True)
class AnalyticFunction1D:
    """A function on R known through a frequency evaluator and optionally in space.

    Parameters
    ----------
    freq_eval : callable
        ``tau -> Ff(tau)``, vectorised over numpy arrays.
    space_eval : callable, optional
        ``x -> f(x)``.  When missing, :meth:`space` falls back to inverse
        Fourier quadrature of ``freq_eval``.
    extent : float
        Half-width of the space box outside which ``|f|`` is negligible.
    bandwidth : float
        Half-width of the frequency box outside which ``|Ff|`` is negligible.
    freq_floor : float
        ``|Ff(tau)|`` is negligible for ``|tau| < freq_floor`` (0 when it is not).
    """

    freq_eval: Callable
    space_eval: Optional[Callable] = None
    label: str = ""
    extent: float = 6.0
    bandwidth: float = 6.0
    freq_floor: float = 0.0

    def freq(self, tau):
        return np.asarray(self.freq_eval(np.asarray(tau, dtype=float)), dtype=complex)

    def space(self, x):
        x = np.asarray(x, dtype=float)
        if self.space_eval is not None:
            return np.asarray(self.space_eval(x), dtype=complex)
        return self._space_by_quadrature(x)

    def _space_by_quadrature(self, x):
        g = self.freq_grid(max_abs_x=max(float(np.max(np.abs(x), initial=0.0)), self.extent))
        w = g.weights * self.freq(g.nodes)
        nodes = g.nodes

        def block(xs):
            return np.exp(TWO_PI * 1j * np.outer(xs, nodes)) @ w

        return _chunked(block, x, nodes.size)

    def freq_grid(self, max_abs_x: float | None = None) -> Grid1D:
        """Frequency grid fine enough to resolve ``f`` on ``|x| <= max_abs_x``."""
        X = self.extent if max_abs_x is None else max_abs_x
        # trapezoid in tau periodises in x with period 1/dtau
        h = 1.0 / (2.0 * (X + self.extent) + 8.0)
        return Grid1D.with_spacing(-self.bandwidth, self.bandwidth, h)

    def space_grid(self, extent: float | None = None, oversample: float = 4.0) -> Grid1D:
        L = self.extent if extent is None else extent
        return Grid1D.with_spacing(-L, L, 1.0 / (oversample * self.bandwidth))

    def scaled(self, c: complex) -> "AnalyticFunction1D":
        sp = None if self.space_eval is None else (lambda x: c * self.space_eval(x))
        return AnalyticFunction1D(lambda t: c * self.freq_eval(t), sp, f"{c}*{self.label}",
                                  self.extent, self.bandwidth, self.freq_floor)


@dataclass(frozen=True)
class AnalyticFunction2D:
    """A function on R^2 with frequency and (optionally) space evaluators.

    Evaluators take two broadcastable arrays ``(x1, x2)``.  ``extent`` and
    ``bandwidth`` are per-axis half-widths.  ``pairing`` names the domain in
    which integrals against this function are best computed ("space" or
    "frequency"); ``grid_freq_eval`` optionally evaluates ``Ff`` on a tensor
    grid given its two axes.
    """

    freq_eval: Callable
    space_eval: Optional[Callable] = None
    label: str = ""
    extent: tuple = (6.0, 6.0)
    bandwidth: tuple = (6.0, 6.0)
    pairing: str = "space"
    grid_freq_eval: Optional[Callable] = None

    def freq(self, xi1, xi2):
        return np.asarray(self.freq_eval(np.asarray(xi1, float), np.asarray(xi2, float)),
                          dtype=complex)

    def freq_grid(self, xi1, xi2) -> np.ndarray:
        """``Ff`` on the tensor grid ``xi1 x xi2`` as a ``(len(xi1), len(xi2))`` array."""
        xi1 = np.asarray(xi1, float)
        xi2 = np.asarray(xi2, float)
        if self.grid_freq_eval is not None:
            return np.asarray(self.grid_freq_eval(xi1, xi2), dtype=complex)
        return self.freq(xi1[:, None], xi2[None, :])

    def space(self, x1, x2):
        if self.space_eval is None:
            raise CapabilityError(f"{self.label or 'function'} has no space evaluator")
        return np.asarray(self.space_eval(np.asarray(x1, float), np.asarray(x2, float)),
                          dtype=complex)

    @property
    def has_space(self) -> bool:
        return self.space_eval is not None

    def space_grids(self, oversample: float = 4.0, extent=None):
        L = self.extent if extent is None else extent
        return tuple(Grid1D.with_spacing(-e, e, 1.0 / (oversample * max(b, 0.5)))
                     for e, b in zip(L, self.bandwidth))

    def scaled(self, c: complex) -> "AnalyticFunction2D":
        sp = None if self.space_eval is None else (lambda x1, x2: c * self.space_eval(x1, x2))
        gf = None if self.grid_freq_eval is None else (lambda a, b: c * self.grid_freq_eval(a, b))
        return AnalyticFunction2D(lambda a, b: c * self.freq_eval(a, b), sp,
                                  f"{c}*{self.label}", self.extent, self.bandwidth,
                                  self.pairing, gf)

    def translated(self, b) -> "AnalyticFunction2D":
        b1, b2 = (float(t) for t in b)
        sp = None
        if self.space_eval is not None:
            sp = lambda x1, x2: self.space_eval(x1 - b1, x2 - b2)
        fr = lambda k1, k2: np.exp(-TWO_PI * 1j * (b1 * k1 + b2 * k2)) * self.freq_eval(k1, k2)
        ext = (self.extent[0] + abs(b1), self.extent[1] + abs(b2))
        return AnalyticFunction2D(fr, sp, f"T{(b1, b2)}{self.label}", ext, self.bandwidth)

    def __add__(self, other: "AnalyticFunction2D") -> "AnalyticFunction2D":
        sp = None
        if self.space_eval is not None and other.space_eval is not None:
            sp = lambda x1, x2: self.space_eval(x1, x2) + other.space_eval(x1, x2)
        return AnalyticFunction2D(
            lambda a, b: self.freq_eval(a, b) + other.freq_eval(a, b), sp,
            f"{self.label}+{other.label}",
            tuple(max(p, q) for p, q in zip(self.extent, other.extent)),
            tuple(max(p, q) for p, q in zip(self.bandwidth, other.bandwidth)))


def tensor(f1: AnalyticFunction1D, f2: AnalyticFunction1D, label: str = "") -> AnalyticFunction2D:
    """``f(x1, x2) = f1(x1) f2(x2)``; the Fourier transform factors accordingly."""
    return AnalyticFunction2D(
        lambda a, b: f1.freq(a) * f2.freq(b),
        lambda x1, x2: f1.space(x1) * f2.space(x2),
        label or f"{f1.label}(x){f2.label}",
        (f1.extent, f2.extent), (f1.bandwidth, f2.bandwidth))


# ---------------------------------------------------------------------------
# builtins

def _gauss(x):
    return np.exp(-np.pi * np.asarray(x, float) ** 2)


def gaussian1d() -> AnalyticFunction1D:
    """``exp(-pi x^2)``, its own Fourier transform."""
    return AnalyticFunction1D(_gauss, _gauss, "gaussian", extent=3.5, bandwidth=3.5)


def gaussian_derivative1d() -> AnalyticFunction1D:
    """``-2 pi x exp(-pi x^2)``; only its zeroth moment vanishes."""
    return AnalyticFunction1D(lambda t: TWO_PI * 1j * t * _gauss(t),
                              lambda x: -TWO_PI * x * _gauss(x),
                              "gaussian_derivative", extent=4.0, bandwidth=4.0)


def chi1_freq(tau):
    """``exp(-1/tau^2 - tau^2)`` extended by 0 at the origin."""
    tau = np.asarray(tau, dtype=float)
    out = np.zeros(tau.shape)
    m = np.abs(tau) > 0.02
    t2 = tau[m] ** 2
    out[m] = np.exp(-1.0 / t2 - t2)
    return out


# Steepest-descent contour tau = u + i k |u| with k = tan(pi/6), which passes
# through the saddle points of exp(-1/tau^2 + 2 pi i tau x).  Along it the
# integrand decays like exp(-2 pi k |u| x), so tails of chi1 come out with
# relative (not absolute) precision.  The u < 0 half is the conjugate of the
# u > 0 half, whose nodes are equally spaced along the ray 1 + i k.
_CONTOUR_SLOPE = np.tan(np.pi / 6)
_CONTOUR_H = 0.004
_CONTOUR_U = 6.5


def _chi1_contour_weights():
    ray = 1 + 1j * _CONTOUR_SLOPE
    k = np.arange(1, int(round(_CONTOUR_U / _CONTOUR_H)) + 1)
    tau = k * _CONTOUR_H * ray
    w = np.exp(-1.0 / tau ** 2 - tau ** 2) * ray * _CONTOUR_H
    w[-1] *= 0.5
    return _CONTOUR_H * ray, w


_CHI1_STEP, _CHI1_W = _chi1_contour_weights()


def chi1_space(x):
    """Inverse Fourier transform of :func:`chi1_freq` (real and even)."""
    x = np.asarray(x, dtype=float)
    return geometric_sum_real(np.ascontiguousarray(x.ravel()), _CHI1_W, _CHI1_STEP).reshape(x.shape)


def builtin_chi1() -> AnalyticFunction1D:
    """Lizorkin wavelet with ``F chi1(tau) = exp(-1/tau^2 - tau^2)``, ``F chi1(0) = 0``.

    Smooth, even, real and flat at the origin, hence in S0(R).  Its space
    profile decays only like ``exp(-1.5 (pi |x|)^(2/3))``, which is why the
    space extent is much larger than the frequency bandwidth.
    """
    return AnalyticFunction1D(chi1_freq, chi1_space, "chi1",
                              extent=20.0, bandwidth=5.6, freq_floor=0.17)


def gaussian2d() -> AnalyticFunction2D:
    g = gaussian1d()
    return AnalyticFunction2D(lambda a, b: _gauss(a) * _gauss(b),
                              lambda x1, x2: _gauss(x1) * _gauss(x2),
                              "gaussian", (g.extent,) * 2, (g.bandwidth,) * 2)


def gaussian_dx2d() -> AnalyticFunction2D:
    """``d/dx1 exp(-pi |x|^2)``: a smooth odd-in-x1 function with closed forms."""
    return tensor(gaussian_derivative1d(), gaussian1d(), "gaussian_dx")


def lizorkin2d(width: float = 2.0) -> AnalyticFunction2D:
    """``chi1(x1 / width) exp(-pi x2^2)``: a Gaussian-type member of S0(R^2).

    All moments vanish because those of ``chi1`` do.  The default ``width``
    puts the spectral peak at ``|xi1| = 1/2``, well inside the Nyquist band of
    the default translation grid.
    """
    w = float(width)
    return AnalyticFunction2D(
        lambda a, b: w * chi1_freq(w * np.asarray(a)) * _gauss(b),
        lambda x1, x2: chi1_space(np.asarray(x1) / w) * _gauss(x2),
        "lizorkin", (20.0 * w, 3.5), (5.6 / w, 3.5))


def zero2d() -> AnalyticFunction2D:
    z = lambda a, b: np.zeros(np.broadcast(np.asarray(a), np.asarray(b)).shape)
    return AnalyticFunction2D(z, z, "zero", (1.0, 1.0), (1.0, 1.0))


def sampled_function(field: SampledField2D, over: float = 2.0, label: str = "sampled") -> AnalyticFunction2D:
    """Wrap samples of a function as an :class:`AnalyticFunction2D`.

    The spectrum is tabulated by trapezoid quadrature over the Nyquist box of
    the sampling grid and interpolated by cubic B-splines; the space evaluator
    is a cubic B-spline of the samples.  Both vanish outside their boxes.  The
    reported bandwidth is where the tabulated spectrum is above 1e-13 of its
    peak, which keeps downstream frequency grids small for smooth inputs.
    """
    xg, yg = field.xgrid, field.ygrid
    if xg.n < 4 or yg.n < 4:
        raise InvalidArgumentError("sampled functions need at least 4 nodes per axis")
    X = (max(abs(xg.min), abs(xg.max)), max(abs(yg.min), abs(yg.max)))
    band = (0.5 / xg.spacing, 0.5 / yg.spacing)
    k1, k2 = (Grid1D.with_spacing(-B, B, 1.0 / (2.0 * over * Xj)) for B, Xj in zip(band, X))
    spec = fourier2d(field, k1, k2).values

    def interpolant(g1: Grid1D, g2: Grid1D, v):
        # cubic B-spline coefficients on the uniform table, evaluated by map_coordinates
        cr = ndimage.spline_filter(v.real, order=3, mode="nearest")
        ci = ndimage.spline_filter(v.imag, order=3, mode="nearest")

        def ev(u, w):
            u, w = np.broadcast_arrays(np.asarray(u, float), np.asarray(w, float))
            out = np.zeros(u.shape, dtype=complex)
            m = (u >= g1.min) & (u <= g1.max) & (w >= g2.min) & (w <= g2.max)
            if np.any(m):
                idx = np.vstack([(u[m] - g1.min) / g1.spacing, (w[m] - g2.min) / g2.spacing])
                kw = dict(order=3, mode="nearest", prefilter=False)
                out[m] = ndimage.map_coordinates(cr, idx, **kw) + 1j * ndimage.map_coordinates(ci, idx, **kw)
            return out
        return ev

    # effective band: where the tabulated spectrum exceeds 1e-13 of its peak
    mag = np.abs(spec)
    peak = float(mag.max())
    eff = []
    for axis, k in ((1, k1), (0, k2)):
        prof = mag.max(axis=axis)
        live = np.nonzero(prof > 1e-13 * peak)[0] if peak > 0 else np.array([], int)
        reach = float(np.max(np.abs(k.nodes[live]))) + 2 * k.spacing if live.size else k.spacing
        eff.append(min(reach, k.max))
    return AnalyticFunction2D(interpolant(k1, k2, spec), interpolant(xg, yg, field.values),
                              label, X, tuple(eff))


BUILTINS_2D = {
    "gaussian": gaussian2d,
    "gaussian_dx": gaussian_dx2d,
    "lizorkin": lizorkin2d,
    "zero": zero2d,
}


def builtin2d(name: str) -> AnalyticFunction2D:
    try:
        return BUILTINS_2D[name]()
    except KeyError:
        raise InvalidArgumentError(
            f"unknown builtin {name!r}; choose from {sorted(BUILTINS_2D)}") from None


# ---------------------------------------------------------------------------
# moments

def _moment_extent(f: AnalyticFunction1D, m: int) -> float:
    """Grow the box until ``|x^m f(x)|`` at its edge is negligible."""
    L = f.extent
    peak = float(np.max(np.abs(f.space(np.linspace(-L, L, 201)))))
    if peak == 0.0:
        return L
    while L < 400.0:
        edge = max(abs(f.space(np.array([-L, L]))).max(), 1e-300) * L ** m
        if edge < 1e-15 * peak:
            break
        L *= 1.25
    return L


def moment(f, m, extent=None, n: int | None = None) -> complex:
    """Trapezoid approximation of ``int x^m f(x) dx`` on the truncation box.

    ``f`` may be an :class:`AnalyticFunction1D` (``m`` an int) or an
    :class:`AnalyticFunction2D` (``m`` a pair), in which case the box is the
    product of the per-axis extents.
    """
    if isinstance(f, AnalyticFunction2D):
        m1, m2 = (int(k) for k in m)
        g1, g2 = f.space_grids(extent=extent)
        if n is not None:
            g1 = Grid1D(g1.min, g1.max, n)
            g2 = Grid1D(g2.min, g2.max, n)
        x1, x2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
        vals = x1 ** m1 * x2 ** m2 * f.space(x1, x2)
        return complex(quad(quad(vals, g2), g1))
    m = int(m)
    if m < 0:
        raise InvalidArgumentError("moment order must be >= 0")
    L = _moment_extent(f, m) if extent is None else float(extent)
    # spacing 1/(2 bandwidth) already aliases only negligible spectrum
    g = f.space_grid(L, oversample=2.0) if n is None else Grid1D(-L, L, n)
    x = g.nodes
    return complex(quad(x ** m * f.space(x), g))


# ---------------------------------------------------------------------------
# Lemma-2 antiderivative

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _panel_integrals(f, lo, hi):
    """Gauss-Legendre integrals of ``f`` over panels ``[lo_k, hi_k]``."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t = mid[:, None] + half[:, None] * _GL_X[None, :]
    return (f(t) @ _GL_W) * half


def antiderivative_s0(f: AnalyticFunction1D, tol: float = 1e-8) -> AnalyticFunction1D:
    """Return ``g(x) = int_{-inf}^x f(t) dt`` for ``f`` with vanishing mean.

    The space evaluator integrates from the nearer infinity (``-inf`` for
    ``x <= 0`` and ``-int_x^inf`` otherwise) so that both tails of ``g`` keep
    relative accuracy.  Cumulative Gauss-Legendre sums are tabulated once at
    panel edges; each query adds a single panel from the nearest edge.  In
    frequency ``Fg(tau) = Ff(tau) / (2 pi i tau)``; the value at the origin
    is the continuous extension ``-mu_1(f)``, which is 0 for ``f`` in S0.

    Raises
    ------
    NotInS0Error
        If ``|mu_0(f)| > tol``: the antiderivative would not decay.
    """
    mu0 = moment(f, 0)
    if abs(mu0) > tol:
        raise NotInS0Error(f"mu_0(f) = {mu0:.3e} exceeds {tol:g}; antiderivative does not decay")
    mu1 = moment(f, 1)
    reach = 4.0 * f.extent
    npan = int(np.ceil(reach / min(0.25, 1.0 / (2.0 * f.bandwidth))))
    edges = np.linspace(-reach, 0.0, npan + 1)
    h = edges[1] - edges[0]
    # cumulative integrals from -reach to each edge (left) and from each
    # mirrored edge to +reach (right, stored in terms of -x)
    left = np.concatenate([[0.0], np.cumsum(_panel_integrals(f.space, edges[:-1], edges[1:]))])
    flip = lambda t: f.space(-t)
    right = np.concatenate([[0.0], np.cumsum(_panel_integrals(flip, edges[:-1], edges[1:]))])

    def half(fun, table, y):
        # int_{-reach}^{y} fun for y in [-reach, 0]
        k = np.clip(np.floor((y + reach) / h).astype(int), 0, npan - 1)
        return table[k] + _panel_integrals(fun, edges[k], y)

    def g_space(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.zeros(flat.size, dtype=complex)
        inside = np.abs(flat) < reach
        neg = inside & (flat <= 0)
        pos = inside & (flat > 0)
        if neg.any():
            out[neg] = half(f.space, left, flat[neg])
        if pos.any():
            out[pos] = -half(flip, right, -flat[pos])
        return out.reshape(x.shape)

    def g_freq(tau):
        tau = np.asarray(tau, dtype=float)
        out = np.full(tau.shape, -mu1, dtype=complex)
        nz = tau != 0
        out[nz] = f.freq(tau[nz]) / (TWO_PI * 1j * tau[nz])
        return out

    return AnalyticFunction1D(g_freq, g_space, f"int({f.label})",
                              extent=f.extent, bandwidth=f.bandwidth,
                              freq_floor=f.freq_floor)


# ---------------------------------------------------------------------------
# seminorms and directional moments

def fd_weights(order: int, accuracy: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Central finite-difference offsets and weights for ``d^order/dx^order``."""
    if order == 0:
        return np.array([0]), np.array([1.0])
    p = (order + 1) // 2 - 1 + accuracy // 2
    offsets = np.arange(-p, p + 1)
    V = np.vander(offsets, increasing=True).T.astype(float)
    rhs = np.zeros(offsets.size)
    rhs[order] = factorial(order)
    return offsets, np.linalg.solve(V, rhs)


def _derivative(values, h, order, axis):
    offsets, w = fd_weights(order)
    p = int(offsets.max(initial=0))
    v = np.moveaxis(values, axis, 0)
    n = v.shape[0]
    out = np.full(v.shape, np.nan, dtype=complex)
    acc = np.zeros((n - 2 * p,) + v.shape[1:], dtype=complex)
    for k, wk in zip(offsets, w):
        acc = acc + wk * v[p + k:n - p + k]
    out[p:n - p] = acc / h ** order
    return np.moveaxis(out, 0, axis)


MAX_SEMINORM_ORDER = 4


def schwartz_seminorm(f, nu: int, grid=None) -> float:
    """``sup_x <x>^nu max_{|m| <= nu} |d^m f(x)|`` over the truncation grid.

    Derivatives are 4th-order central differences with step equal to the grid
    spacing; nodes too close to the boundary for a stencil are skipped.
    """
    nu = int(nu)
    if not 0 <= nu <= MAX_SEMINORM_ORDER:
        raise InvalidArgumentError(f"seminorm order must be in [0, {MAX_SEMINORM_ORDER}]")
    if isinstance(f, AnalyticFunction2D):
        g1, g2 = grid if grid is not None else f.space_grids(oversample=8.0)
        x1, x2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
        vals = f.space(x1, x2)
        weight = (1 + x1 ** 2 + x2 ** 2) ** (nu / 2)
        best = np.zeros(vals.shape)
        for m1 in range(nu + 1):
            d1 = _derivative(vals, g1.spacing, m1, 0) if m1 else vals
            for m2 in range(nu + 1 - m1):
                d = _derivative(d1, g2.spacing, m2, 1) if m2 else d1
                best = np.fmax(best, np.abs(d))
        return float(np.nanmax(weight * best))
    g = grid if grid is not None else f.space_grid(oversample=8.0)
    x = g.nodes
    vals = f.space(x)
    best = np.zeros(x.size)
    for m in range(nu + 1):
        best = np.fmax(best, np.abs(_derivative(vals, g.spacing, m, 0)) if m else np.abs(vals))
    return float(np.nanmax((1 + x ** 2) ** (nu / 2) * best))


def directional_moment_check(f: AnalyticFunction2D, j: int, m: int,
                             slices: Sequence[float], n: int | None = None,
                             extent: float | None = None) -> float:
    """``max_c |int x_j^m f dx_j|`` over slices with the other coordinate fixed at ``c``.

    ``extent`` overrides the half-width along ``x_j``; high orders of slowly
    decaying functions need a wider box than the function's own extent.
    """
    if j not in (1, 2):
        raise InvalidArgumentError("axis j must be 1 or 2")
    ext = None if extent is None else tuple(extent if k == j - 1 else e for k, e in enumerate(f.extent))
    g = f.space_grids(extent=ext)[j - 1]
    if n is not None:
        g = Grid1D(g.min, g.max, n)
    x = g.nodes
    worst = 0.0
    for c in slices:
        cc = np.full_like(x, float(c))
        vals = f.space(x, cc) if j == 1 else f.space(cc, x)
        worst = max(worst, abs(complex(quad(x ** m * vals, g))))
    return worst
