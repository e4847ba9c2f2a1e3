"""Shearlet group, representation, admissible vectors and the analysis transform.

The transform is computed along three independent routes:

* ``analyze_direct``: space-domain quadrature of ``<f, S_{b,s,a} psi>`` after
  the substitution ``x = b + S_s A_a y``, against a tabulated generator;
* ``analyze_spectral``: the ``(tau, v)`` frequency formula in which ``Ff`` is
  sampled on sheared lines ``(tau, tau v)``;
* ``analyze_factorized``: affine Radon slices followed by a 1D wavelet
  transform in ``t`` and a sheared window in ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._kernels import sheared_phase_sum
from .exceptions import (CapabilityError, InconsistentAdmissibilityError, InvalidArgumentError,
                         InvalidScaleError, NotAdmissibleError)
from .numerics import TWO_PI, Grid1D, LogSymmetricGrid, fourier_at, quad
from .radon import affine_slices
from .testfn import AnalyticFunction1D, AnalyticFunction2D, builtin_chi1, gaussian1d
from .wavelet import calderon_constant

OVERSAMPLE = 1.2


# ---------------------------------------------------------------------------
# group

@dataclass(frozen=True)
class GroupElement:
    """Point ``(b, s, a)`` of the shearlet group, ``a != 0``."""

    b: tuple = (0.0, 0.0)
    s: float = 0.0
    a: float = 1.0

    def __post_init__(self):
        b = tuple(float(t) for t in np.asarray(self.b, dtype=float).ravel())
        if len(b) != 2:
            raise InvalidArgumentError("translation must be a 2-vector")
        if self.a == 0 or not np.isfinite(self.a):
            raise InvalidScaleError("scale a must be non-zero")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "a", float(self.a))

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls((0.0, 0.0), 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        """``S_s A_a`` with ``S_s = [[1, -s], [0, 1]]`` and ``A_a = a diag(1, |a|^{-1/2})``."""
        a, s = self.a, self.s
        d = a * abs(a) ** -0.5
        return np.array([[a, -s * d], [0.0, d]])

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_product(self, other)

    def inverse(self) -> "GroupElement":
        b = -np.linalg.solve(self.matrix, np.asarray(self.b))
        return GroupElement(b, -abs(self.a) ** -0.5 * self.s, 1.0 / self.a)

    def as_tuple(self):
        return (*self.b, self.s, self.a)


def group_product(g: GroupElement, h: GroupElement) -> GroupElement:
    """``(b, s, a)(b', s', a') = (b + S_s A_a b', s + |a|^{1/2} s', a a')``."""
    b = np.asarray(g.b) + g.matrix @ np.asarray(h.b)
    return GroupElement(b, g.s + abs(g.a) ** 0.5 * h.s, g.a * h.a)


# ---------------------------------------------------------------------------
# admissible vectors

@dataclass(frozen=True)
class AdmissibleVector:
    """Generator with ``F psi(xi) = F psi1(xi1) phi2(xi2 / xi1)`` and ``F chi1 = |tau| F psi1``.

    Parameters
    ----------
    chi1 : AnalyticFunction1D
        Lizorkin profile; ``F psi1(tau) = F chi1(tau) / |tau|``.
    psi2 : AnalyticFunction1D
        Schwartz profile whose Fourier transform is the window ``phi2``.
    """

    chi1: AnalyticFunction1D
    psi2: AnalyticFunction1D
    label: str = ""

    def phi2(self, u):
        return self.psi2.freq(u)

    def psi1_freq(self, tau):
        tau = np.asarray(tau, dtype=float)
        out = np.zeros(tau.shape, dtype=complex)
        nz = tau != 0
        out[nz] = self.chi1.freq(tau[nz]) / np.abs(tau[nz])
        return out

    def freq(self, xi1, xi2):
        """``F psi``, extended by 0 on the line ``xi1 = 0``."""
        xi1, xi2 = np.broadcast_arrays(np.asarray(xi1, float), np.asarray(xi2, float))
        out = np.zeros(xi1.shape, dtype=complex)
        m = (np.abs(xi1) >= self.chi1.freq_floor) & (xi1 != 0)
        m &= np.abs(xi1) <= self.chi1.bandwidth
        t = xi1[m]
        m2 = np.abs(xi2[m]) <= self.psi2.bandwidth * np.abs(t)
        idx = np.flatnonzero(m)[m2]
        t = xi1.ravel()[idx]
        out.ravel()[idx] = self.psi1_freq(t) * self.phi2(xi2.ravel()[idx] / t)
        return out

    def scaled(self, c: complex) -> "AdmissibleVector":
        return AdmissibleVector(self.chi1.scaled(c), self.psi2, f"{c}*{self.label}")

    def conjugate(self) -> "AdmissibleVector":
        """The generator ``conj(psi)``, again in factored form.

        ``F conj(psi)(xi) = conj(F chi1(-xi1)) / |xi1| * conj(phi2(xi2 / xi1))``, so
        the new profiles are ``conj(chi1)`` and ``x -> conj(psi2(-x))``.
        """
        return self._conjugate

    @cached_property
    def _conjugate(self) -> "AdmissibleVector":
        c1, p2 = self.chi1, self.psi2
        chi = AnalyticFunction1D(lambda t: np.conj(c1.freq(-np.asarray(t, float))),
                                 lambda x: np.conj(c1.space(x)), f"conj({c1.label})",
                                 c1.extent, c1.bandwidth, c1.freq_floor)
        win = AnalyticFunction1D(lambda u: np.conj(p2.freq(u)),
                                 lambda x: np.conj(p2.space(-np.asarray(x, float))),
                                 f"conj({p2.label})", p2.extent, p2.bandwidth, p2.freq_floor)
        return AdmissibleVector(chi, win, f"conj({self.label})")

    def xi_nodes(self, span: float, over: float = OVERSAMPLE):
        """Two-sided ``xi1`` quadrature over the support of ``F chi1``.

        ``span`` bounds the reach of the resulting space evaluation.
        """
        lo, hi = self.chi1.freq_floor, self.chi1.bandwidth
        g = Grid1D.with_spacing(lo, hi, 1.0 / (over * span))
        xi = np.concatenate([-g.nodes[::-1], g.nodes])
        w = np.concatenate([g.weights[::-1], g.weights])
        return xi, w * self.chi1.freq(xi)

    def _span(self, y1max, y2max):
        return y1max + self.chi1.extent + y2max * self.psi2.bandwidth

    def space(self, y1, y2):
        """``psi(y) = int F chi1(xi) psi2(xi y2) exp(2 pi i xi y1) dxi``."""
        y1, y2 = np.broadcast_arrays(np.asarray(y1, float), np.asarray(y2, float))
        if y1.size == 0:
            return np.zeros(y1.shape, dtype=complex)
        xi, w = self.xi_nodes(self._span(np.abs(y1).max(), np.abs(y2).max()))
        f1, f2 = y1.ravel(), y2.ravel()
        out = np.empty(f1.size, dtype=complex)
        step = max(1, 2 ** 21 // xi.size)
        for i in range(0, f1.size, step):
            a, b = f1[i:i + step], f2[i:i + step]
            E = np.exp(TWO_PI * 1j * np.outer(a, xi)) * self.psi2.space(np.outer(b, xi))
            out[i:i + step] = E @ w
        return out.reshape(y1.shape)

    def table(self, y1, y2) -> np.ndarray:
        """``psi`` on the tensor grid ``y1 x y2`` via one matrix product."""
        y1 = np.asarray(y1, float)
        y2 = np.asarray(y2, float)
        xi, w = self.xi_nodes(self._span(np.abs(y1).max(), np.abs(y2).max()))
        E = np.exp(TWO_PI * 1j * np.outer(y1, xi)) * w
        P = self.psi2.space(np.outer(xi, y2))
        return E @ P

    @cached_property
    def space_box(self) -> tuple:
        """Half-widths outside of which ``|psi| < 1e-11 max |psi|``."""
        y1 = np.arange(-40.0, 40.0 + 1e-9, 0.2)
        y2 = np.arange(-16.0, 16.0 + 1e-9, 0.1)
        T = np.abs(self.table(y1, y2))
        if T.max() == 0:
            return float(self.chi1.extent), float(self.psi2.extent)
        keep = T > 1e-11 * T.max()
        i, j = np.nonzero(keep)
        return float(np.abs(y1[i]).max()) + 0.2, float(np.abs(y2[j]).max()) + 0.1

    @cached_property
    def bandwidth(self) -> tuple:
        """Half-widths outside of which ``|F psi| < 1e-14 max |F psi|``."""
        lo, hi = self.chi1.freq_floor, self.chi1.bandwidth
        xi1 = np.linspace(lo, hi, 600)
        xi2 = np.linspace(-hi * self.psi2.bandwidth, hi * self.psi2.bandwidth, 1201)
        F = np.abs(self.freq(xi1[:, None], xi2[None, :])) + np.abs(self.freq(-xi1[:, None], xi2[None, :]))
        if F.max() == 0:
            return float(hi), float(hi * self.psi2.bandwidth)
        keep = F > 1e-14 * F.max()
        i, j = np.nonzero(keep)
        step1, step2 = xi1[1] - xi1[0], xi2[1] - xi2[0]
        return float(xi1[i].max() + step1), float(np.abs(xi2[j]).max() + step2)


def builtin_psi2() -> AnalyticFunction1D:
    """Gaussian ``psi2`` whose Fourier transform ``phi2(u) = exp(-pi u^2)``."""
    return gaussian1d()


_BUILTIN_VECTOR = None


def builtin_admissible_vector() -> AdmissibleVector:
    """``chi1`` from :func:`builtin_chi1` and the Gaussian window (shared instance)."""
    global _BUILTIN_VECTOR
    if _BUILTIN_VECTOR is None:
        _BUILTIN_VECTOR = AdmissibleVector(builtin_chi1(), builtin_psi2(), "builtin")
    return _BUILTIN_VECTOR


def skew_window() -> AnalyticFunction1D:
    """``phi2(u) = (1 + i u) exp(-pi u^2)``, the transform of ``(1 - x) exp(-pi x^2)``."""
    return AnalyticFunction1D(
        lambda u: (1 + 1j * np.asarray(u, float)) * np.exp(-np.pi * np.asarray(u, float) ** 2),
        lambda x: (1 - np.asarray(x, float)) * np.exp(-np.pi * np.asarray(x, float) ** 2),
        "skew", extent=4.0, bandwidth=4.0)


def complex_admissible_vector() -> AdmissibleVector:
    """Builtin ``chi1`` with the skew window; ``F psi(-xi) = F psi(xi)`` is not real, so ``psi`` is complex."""
    return AdmissibleVector(builtin_chi1(), skew_window(), "complex")


def zero_admissible_vector() -> AdmissibleVector:
    z = AnalyticFunction1D(lambda t: np.zeros(np.shape(t)), lambda x: np.zeros(np.shape(x)),
                           "zero", extent=1.0, bandwidth=1.0, freq_floor=0.01)
    return AdmissibleVector(z, builtin_psi2(), "zero")


@dataclass(frozen=True)
class AdmissibilityResult:
    value: float
    factorized: float
    calderon_part: float
    window_part: float

    @property
    def relative_difference(self) -> float:
        return abs(self.value - self.factorized) / abs(self.factorized)


def admissibility_constant(psi: AdmissibleVector, rtol: float = 1e-4) -> AdmissibilityResult:
    """``C_psi = int |F psi(xi)|^2 / xi1^2 dxi`` by 2D quadrature and in factored form.

    The factored value ``(int |F psi1|^2 / |tau| dtau) (int |phi2|^2)`` follows
    from the substitution ``xi2 = u xi1``.

    Raises
    ------
    NotAdmissibleError
        If either value is zero or not finite.
    InconsistentAdmissibilityError
        If the two quadratures differ by more than ``rtol`` relative.
    """
    # 2D: uniform tensor grid over the cone |xi2| <= B2 |xi1|
    lo, hi = psi.chi1.freq_floor, psi.chi1.bandwidth
    g1 = Grid1D.with_spacing(lo, hi, 5e-3)
    x2max = hi * psi.psi2.bandwidth
    g2 = Grid1D.with_spacing(-x2max, x2max, 1e-2)
    xi1 = g1.nodes
    vals = np.abs(psi.freq(xi1[:, None], g2.nodes[None, :])) ** 2 / xi1[:, None] ** 2
    valsn = np.abs(psi.freq(-xi1[:, None], g2.nodes[None, :])) ** 2 / xi1[:, None] ** 2
    c2d = float(np.real(quad(quad(vals + valsn, g2), g1)))

    psi1 = AnalyticFunction1D(psi.psi1_freq, None, "psi1", psi.chi1.extent,
                              psi.chi1.bandwidth, psi.chi1.freq_floor)
    try:
        calderon = calderon_constant(psi1)
    except NotAdmissibleError:
        calderon = 0.0
    u = Grid1D.symmetric(psi.psi2.bandwidth, 4001)
    window = float(np.real(quad(np.abs(psi.phi2(u.nodes)) ** 2, u)))
    fact = calderon * window
    if not (np.isfinite(c2d) and np.isfinite(fact)) or fact <= 1e-300 or c2d <= 1e-300:
        raise NotAdmissibleError(f"admissibility constant is {c2d:.3e}; generator is not admissible")
    res = AdmissibilityResult(c2d, fact, calderon, window)
    if res.relative_difference > rtol:
        raise InconsistentAdmissibilityError(
            f"2D quadrature {c2d:.12g} and factored form {fact:.12g} differ by "
            f"{res.relative_difference:.2e}")
    return res


# ---------------------------------------------------------------------------
# representation

def _sheared_freq_args(xi1, xi2, s, a):
    """``A_a ^tS_s xi = (a xi1, a |a|^{-1/2} (xi2 - s xi1))``."""
    return a * xi1, a * abs(a) ** -0.5 * (xi2 - s * xi1)


def rep_apply(psi: AdmissibleVector, g: GroupElement) -> AnalyticFunction2D:
    """The atom ``S_{b,s,a} psi`` with space and frequency evaluators."""
    b1, b2 = g.b
    s, a = g.s, g.a
    Minv = np.linalg.inv(g.matrix)

    def space(x1, x2):
        x1 = np.asarray(x1, float) - b1
        x2 = np.asarray(x2, float) - b2
        y1 = Minv[0, 0] * x1 + Minv[0, 1] * x2
        y2 = Minv[1, 1] * x2
        return abs(a) ** -0.75 * psi.space(y1, y2)

    def freq(xi1, xi2):
        xi1 = np.asarray(xi1, float)
        xi2 = np.asarray(xi2, float)
        e1, e2 = _sheared_freq_args(xi1, xi2, s, a)
        return abs(a) ** 0.75 * np.exp(-TWO_PI * 1j * (b1 * xi1 + b2 * xi2)) * psi.freq(e1, e2)

    Y1, Y2 = psi.space_box
    ext = (abs(b1) + abs(a) * Y1 + abs(s) * abs(a) ** 0.5 * Y2, abs(b2) + abs(a) ** 0.5 * Y2)
    B1 = psi.chi1.bandwidth / abs(a)
    bw = (B1, (abs(s) + psi.psi2.bandwidth * abs(a) ** 0.5) * B1)
    return AnalyticFunction2D(freq, space, f"S{g.as_tuple()}{psi.label}", ext, bw, "frequency")


# ---------------------------------------------------------------------------
# parameter grids and coefficients

@dataclass(frozen=True)
class ParamGrid:
    """Sampled ``(b1, b2, s, a)`` lattice with Haar weights ``|a|^{-3} db ds da``."""

    b1_grid: Grid1D
    b2_grid: Grid1D
    s_grid: Grid1D
    a_grid: LogSymmetricGrid

    @classmethod
    def default(cls) -> "ParamGrid":
        return cls(Grid1D(-4.0, 4.0, 33), Grid1D(-4.0, 4.0, 33), Grid1D(-3.0, 3.0, 17),
                   LogSymmetricGrid(0.05, 4.0, 16))

    @classmethod
    def from_spec(cls, b: Sequence, s: Sequence, a: Sequence) -> "ParamGrid":
        """``b = (max, n)`` symmetric for both axes, ``s = (max, n)``, ``a = (min, max, n_per_side)``."""
        bg = Grid1D(-float(b[0]), float(b[0]), int(b[1]))
        return cls(bg, bg, Grid1D(-float(s[0]), float(s[0]), int(s[1])),
                   LogSymmetricGrid(float(a[0]), float(a[1]), int(a[2])))

    @property
    def shape(self) -> tuple:
        return (self.b1_grid.n, self.b2_grid.n, self.s_grid.n, len(self.a_grid))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def a_nodes(self) -> np.ndarray:
        return self.a_grid.nodes

    @property
    def haar_weights(self) -> np.ndarray:
        a = self.a_grid.nodes
        wa = self.a_grid.weights * np.abs(a) ** -3.0
        return np.einsum("i,j,k,l->ijkl", self.b1_grid.weights, self.b2_grid.weights,
                         self.s_grid.weights, wa)

    def refined(self, factor: int = 2) -> "ParamGrid":
        """Nested refinement of all four axes."""
        return ParamGrid(self.b1_grid.refined(factor), self.b2_grid.refined(factor),
                         self.s_grid.refined(factor), self.a_grid.refined(factor))

    def coarsened(self, b_factor: int = 2, s_factor: int = 2, a_factor: int = 3) -> "ParamGrid":
        """Sub-lattice keeping every ``factor``-th node; raises if it would not be nested."""
        def sub(n, k):
            if (n - 1) % k:
                raise InvalidArgumentError(f"{n} nodes cannot be coarsened by {k}")
            return (n - 1) // k + 1
        ag = self.a_grid
        return ParamGrid(Grid1D(self.b1_grid.min, self.b1_grid.max, sub(self.b1_grid.n, b_factor)),
                         Grid1D(self.b2_grid.min, self.b2_grid.max, sub(self.b2_grid.n, b_factor)),
                         Grid1D(self.s_grid.min, self.s_grid.max, sub(self.s_grid.n, s_factor)),
                         LogSymmetricGrid(ag.a_min, ag.a_max, sub(ag.n_per_side, a_factor),
                                          ag.include_negative))

    def element(self, i, j, k, l) -> GroupElement:
        return GroupElement((self.b1_grid.nodes[i], self.b2_grid.nodes[j]),
                            self.s_grid.nodes[k], self.a_nodes[l])

    def describe(self) -> dict:
        ag = self.a_grid
        return {"b1": [self.b1_grid.min, self.b1_grid.max, self.b1_grid.n],
                "b2": [self.b2_grid.min, self.b2_grid.max, self.b2_grid.n],
                "s": [self.s_grid.min, self.s_grid.max, self.s_grid.n],
                "a": [ag.a_min, ag.a_max, ag.n_per_side, ag.include_negative]}


@dataclass(frozen=True)
class CoefficientArray:
    """Coefficients indexed ``(b1, b2, s, a)`` over a :class:`ParamGrid`."""

    grid: ParamGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise InvalidArgumentError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)

    def energy(self) -> float:
        """Haar-weighted ``sum |c|^2``."""
        return float(np.sum(self.grid.haar_weights * np.abs(self.values) ** 2))

    def __add__(self, other: "CoefficientArray") -> "CoefficientArray":
        return CoefficientArray(self.grid, self.values + other.values)

    def __mul__(self, c) -> "CoefficientArray":
        return CoefficientArray(self.grid, self.values * c)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# spectral path

def _v_window(psi, s, a, b2max, f, thi, over=OVERSAMPLE):
    """Trapezoid nodes in ``v`` covering the sheared window ``phi2((v - s) / |a|^{1/2})``."""
    ra = abs(a) ** 0.5
    half = psi.psi2.bandwidth * ra
    reach = thi * (b2max + f.extent[1]) + psi.psi2.extent / ra
    g = Grid1D.with_spacing(s - half, s + half, 1.0 / (over * reach))
    return g.nodes, g.weights


def _tau_band(psi, f, a):
    lo = psi.chi1.freq_floor / abs(a)
    hi = min(psi.chi1.bandwidth / abs(a), f.bandwidth[0])
    return lo, hi


def _two_sided(lo, hi, h):
    g = Grid1D.with_spacing(lo, hi, h)
    return (np.concatenate([-g.nodes[::-1], g.nodes]),
            np.concatenate([g.weights[::-1], g.weights]))


def _spectral_slab(f, psi, b1, b2_0, db2, n2, s, a, over=OVERSAMPLE):
    """Coefficients on ``b1 x (b2_0 + db2 * arange(n2))`` for one ``(s, a)``."""
    out = np.zeros((b1.size, n2), dtype=complex)
    lo, hi = _tau_band(psi, f, a)
    if hi <= lo:
        return out
    b2max = max(abs(b2_0), abs(b2_0 + (n2 - 1) * db2))
    v, wv = _v_window(psi, s, a, b2max, f, hi, over)
    vmax = float(np.abs(v).max())
    span = (float(np.abs(b1).max()) + vmax * b2max + f.extent[0] + vmax * f.extent[1]
            + abs(a) * psi.chi1.extent)
    tau, wt = _two_sided(lo, hi, 1.0 / (over * span))
    H = f.freq(tau[:, None], tau[:, None] * v[None, :])
    H *= np.conj(psi.chi1.freq(a * tau))[:, None] * wt[:, None]
    H *= (np.conj(psi.phi2((v - s) / abs(a) ** 0.5)) * wv)[None, :]
    K = sheared_phase_sum(tau, v, np.ascontiguousarray(H, dtype=complex), float(b2_0), float(db2), n2)
    E1 = np.exp(TWO_PI * 1j * np.outer(b1, tau))
    return abs(a) ** -0.25 * (E1 @ K)


def _slabs(grid: ParamGrid):
    s_nodes, a_nodes = grid.s_grid.nodes, grid.a_nodes
    for k, s in enumerate(s_nodes):
        for l, a in enumerate(a_nodes):
            yield k, l, s, a


def _fill(grid: ParamGrid, slab, threads: int = 1) -> CoefficientArray:
    """Evaluate ``slab(s, a)`` for every ``(s, a)`` node, optionally on a thread pool.

    Each slab owns its output block, so the result does not depend on ``threads``.
    """
    if int(threads) < 1:
        raise InvalidArgumentError("threads must be >= 1")
    out = np.zeros(grid.shape, dtype=complex)
    jobs = list(_slabs(grid))
    if threads == 1:
        for k, l, s, a in jobs:
            out[:, :, k, l] = slab(s, a)
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(int(threads)) as pool:
            for (k, l, _, _), v in zip(jobs, pool.map(lambda j: slab(j[2], j[3]), jobs)):
                out[:, :, k, l] = v
    return CoefficientArray(grid, out)


def analyze_spectral(f: AnalyticFunction2D, psi: AdmissibleVector, grid: ParamGrid,
                     threads: int = 1) -> CoefficientArray:
    """``S_psi f`` from ``|a|^{-1/4} int int Ff(tau, tau v) conj(F chi1(a tau))
    exp(2 pi i tau (b1 + v b2)) conj(phi2((v - s) / |a|^{1/2})) dtau dv``."""
    b1 = grid.b1_grid.nodes
    g2 = grid.b2_grid
    return _fill(grid, lambda s, a: _spectral_slab(f, psi, b1, g2.min, g2.spacing, g2.n, s, a), threads)


def analyze_spectral_at(f: AnalyticFunction2D, psi: AdmissibleVector,
                        points: Iterable[GroupElement]) -> np.ndarray:
    """Spectral-path coefficients at arbitrary group elements."""
    res = []
    for g in points:
        res.append(_spectral_slab(f, psi, np.array([g.b[0]]), g.b[1], 0.0, 1, g.s, g.a)[0, 0])
    return np.array(res, dtype=complex)


# ---------------------------------------------------------------------------
# direct path

_TABLE_MASK = 1e-10


def _quantized_step(h):
    """Largest ``0.2 * 2^{-k/2}`` not exceeding ``h`` so tables can be shared."""
    k = int(np.ceil(2 * np.log2(0.2 / h) - 1e-9))
    return 0.2 * 2.0 ** (-max(k, 0) / 2.0)


def _direct_table(psi, dy1, dy2, cache):
    key = (dy1, dy2)
    if key not in cache:
        Y1, Y2 = psi.space_box
        y1 = np.arange(-np.floor(Y1 / dy1), np.floor(Y1 / dy1) + 1) * dy1
        y2 = np.arange(-np.floor(Y2 / dy2), np.floor(Y2 / dy2) + 1) * dy2
        T = psi.table(y1, y2)
        keep = np.abs(T) > _TABLE_MASK * np.abs(T).max()
        i, j = np.nonzero(keep)
        cache[key] = (y1[i], y2[j], np.conj(T[i, j]) * dy1 * dy2)
    return cache[key]


def _direct_slab(f, psi, b1, b2, s, a, cache, over=1.1):
    ra = abs(a) ** 0.5
    B1 = psi.bandwidth[0] + abs(a) * f.bandwidth[0]
    B2 = psi.bandwidth[1] + ra * (abs(s) * f.bandwidth[0] + f.bandwidth[1])
    y1, y2, w = _direct_table(psi, _quantized_step(1.0 / (over * B1)),
                              _quantized_step(1.0 / (over * B2)), cache)
    M = GroupElement((0.0, 0.0), s, a).matrix
    u1 = M[0, 0] * y1 + M[0, 1] * y2
    u2 = M[1, 1] * y2
    B1n, B2n = np.meshgrid(b1, b2, indexing="ij")
    bb1, bb2 = B1n.ravel(), B2n.ravel()
    out = np.empty(bb1.size, dtype=complex)
    step = max(1, 2 ** 22 // max(u1.size, 1))
    for i in range(0, bb1.size, step):
        vals = f.space(bb1[i:i + step, None] + u1[None, :], bb2[i:i + step, None] + u2[None, :])
        out[i:i + step] = vals @ w
    return abs(a) ** 0.75 * out.reshape(B1n.shape)


def analyze_direct(f: AnalyticFunction2D, psi: AdmissibleVector, grid: ParamGrid,
                   threads: int = 1) -> CoefficientArray:
    """``S_psi f(b, s, a) = |a|^{3/4} int f(b + S_s A_a y) conj(psi(y)) dy`` by 2D quadrature."""
    if not f.has_space:
        raise CapabilityError("analyze_direct needs a space evaluator for f")
    cache: dict = {}
    b1, b2 = grid.b1_grid.nodes, grid.b2_grid.nodes
    return _fill(grid, lambda s, a: _direct_slab(f, psi, b1, b2, s, a, cache), threads)


# ---------------------------------------------------------------------------
# factorized path

def _factorized_slab(f, psi, b1, b2, s, a, over=OVERSAMPLE):
    """Coefficients on ``b1 x b2`` for one ``(s, a)``."""
    out = np.zeros((b1.size, b2.size), dtype=complex)
    lo, hi = _tau_band(psi, f, a)
    if hi <= lo:
        return out
    b2max = float(np.abs(b2).max())
    v, wv = _v_window(psi, s, a, b2max, f, hi, over)
    vmax = float(np.abs(v).max())
    # affine Radon projections R f(v, .) sampled in t
    t_ext = f.extent[0] + vmax * f.extent[1]
    tg = Grid1D.with_spacing(-t_ext, t_ext, 1.0 / (2.4 * f.bandwidth[0]))
    R = affine_slices(f, v, tg.nodes)
    # 1D wavelet transform of each projection, evaluated at t = b1 + v b2;
    # the phase exp(2 pi i xi t) splits into a b1 factor and a (v, b2) factor
    span = float(np.abs(b1).max()) + vmax * b2max + t_ext + abs(a) * psi.chi1.extent
    xi, wx = _two_sided(lo, hi, 1.0 / (over * span))
    spec = fourier_at(R, tg, xi) * (wx * np.conj(psi.chi1.freq(a * xi)))
    window = np.conj(psi.phi2((v - s) / abs(a) ** 0.5)) * wv
    P = np.exp(TWO_PI * 1j * (v[:, None, None] * xi[None, :, None]) * b2[None, None, :])
    inner = np.einsum("v,vk,vkj->kj", window, spec, P)
    out = np.exp(TWO_PI * 1j * np.outer(b1, xi)) @ inner
    return abs(a) ** 0.5 * abs(a) ** -0.75 * out


def analyze_factorized(f: AnalyticFunction2D, psi: AdmissibleVector, grid: ParamGrid,
                       threads: int = 1) -> CoefficientArray:
    """``|a|^{-3/4} int W_chi1(R^aff f(v, .))(b1 + v b2, a) conj(phi2((v - s) / |a|^{1/2})) dv``."""
    b1, b2 = grid.b1_grid.nodes, grid.b2_grid.nodes
    return _fill(grid, lambda s, a: _factorized_slab(f, psi, b1, b2, s, a), threads)


# ---------------------------------------------------------------------------
# diagnostics

def coefficient_seminorm(c: CoefficientArray, k1: int, k2: int, l: int, m: int) -> float:
    """``sup <b1>^k1 <b2>^k2 <s>^l (|a|^m + |a|^-m) |c|`` over the grid (derivative order 0)."""
    g = c.grid
    jb = lambda x: (1.0 + x ** 2) ** 0.5
    a = np.abs(g.a_nodes)
    w = np.einsum("i,j,k,l->ijkl", jb(g.b1_grid.nodes) ** k1, jb(g.b2_grid.nodes) ** k2,
                  jb(g.s_grid.nodes) ** l, a ** m + a ** (-float(m)))
    return float(np.max(w * np.abs(c.values)))


# Finest seminorm domain: |b| <= 8, |s| <= 4, 1e-2 <= |a| <= 8 on a fixed lattice
# (spacing 1/4 in b and s, 16 log-spaced scales per side).  Coarser levels are
# sub-boxes of the same lattice, so every level's sup is over a subset of the next.
_SEMINORM_B = (4.0, 6.0, 8.0)
_SEMINORM_S = (2.0, 3.0, 4.0)
_SEMINORM_A = ((4, 12), (2, 14), (0, 15))
DEFAULT_SEMINORM_ORDERS = ((0, 0, 0, 0), (1, 1, 1, 1), (2, 2, 2, 2), (2, 0, 0, 0),
                           (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 1), (0, 0, 0, 3))


def seminorm_levels() -> list:
    """Nested parameter boxes used by :func:`seminorm_profile`, coarsest first."""
    fine = LogSymmetricGrid(0.01, 8.0, 16)
    pos = fine.positive_nodes
    out = []
    for B, S, (i, j) in zip(_SEMINORM_B, _SEMINORM_S, _SEMINORM_A):
        bg = Grid1D(-B, B, int(4 * B) + 1)
        a = fine if (i, j) == (0, len(pos) - 1) else LogSymmetricGrid(pos[i], pos[j], j - i + 1)
        out.append(ParamGrid(bg, bg, Grid1D(-S, S, int(4 * S) + 1), a))
    return out


def _sub_block(c: CoefficientArray, g: ParamGrid) -> CoefficientArray:
    """Restriction of ``c`` to the nodes of the sub-lattice ``g``."""
    def idx(big, small):
        i = np.searchsorted(big, small - 1e-9 * (1.0 + np.abs(small)))
        if np.any(i >= big.size) or not np.allclose(big[i], small, rtol=1e-9, atol=1e-12):
            raise InvalidArgumentError("grid is not a sub-lattice")
        return i
    G = c.grid
    ix = [idx(G.b1_grid.nodes, g.b1_grid.nodes), idx(G.b2_grid.nodes, g.b2_grid.nodes),
          idx(G.s_grid.nodes, g.s_grid.nodes), idx(G.a_nodes, g.a_nodes)]
    return CoefficientArray(g, c.values[np.ix_(*ix)])


def seminorm_profile(f: AnalyticFunction2D, psi: AdmissibleVector,
                     orders: Sequence = DEFAULT_SEMINORM_ORDERS, threads: int = 1) -> list:
    """Rows ``(k1, k2, l, m, level, value)`` of :func:`coefficient_seminorm` over
    :func:`seminorm_levels`; the transform is computed once on the finest box."""
    for o in orders:
        if len(o) != 4 or any(int(k) < 0 for k in o):
            raise InvalidArgumentError(f"seminorm order {o!r} must be four non-negative integers")
    levels = seminorm_levels()
    fine = analyze_spectral(f, psi, levels[-1], threads)
    rows = []
    for lev, g in enumerate(levels):
        c = fine if lev == len(levels) - 1 else _sub_block(fine, g)
        for o in orders:
            rows.append((*(int(k) for k in o), lev, coefficient_seminorm(c, *o)))
    return rows
