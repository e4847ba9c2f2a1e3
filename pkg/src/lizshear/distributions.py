"""Lizorkin distributions and their shearlet transform by duality.

A distribution ``d`` acts on test functions through :meth:`pair`.  Its
shearlet transform tested against ``Phi`` is ``(d, S^t_{conj psi} Phi)``; the
desingularized form evaluates ``(d, S_g conj(psi))`` atom by atom.  For real
generators the latter is the conjugation-free ``(d, S_g psi)``.

Pairings are evaluated in the domain named by the test function's ``pairing``
hint: synthesized functions and atoms carry exact, cheap spectra and are
paired in frequency; other functions by space-domain quadrature over their
truncation box.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .exceptions import CapabilityError, InvalidArgumentError, InvalidScaleError
from .numerics import TWO_PI, Grid1D
from .shearlet import AdmissibleVector, CoefficientArray, GroupElement, ParamGrid, rep_apply
from .synthesis import (BoundaryDecayWarning, check_boundary_decay, relative_discrepancy,
                        synthesized_function)
from .testfn import AnalyticFunction2D, fd_weights

MAX_POLY_DEGREE = 4
MAX_DERIVATIVE = (2, 2)
_FREQ_FD_STEP = 1e-2


def _box_grids(phi: AnalyticFunction2D, other_bw=(0.0, 0.0), over: float = 2.2):
    return tuple(Grid1D.with_spacing(-e, e, 1.0 / (over * (b + ob)))
                 for e, b, ob in zip(phi.extent, phi.bandwidth, other_bw))


def _tensor_weights(g1: Grid1D, g2: Grid1D):
    return np.outer(g1.weights, g2.weights)


class LizorkinDistribution:
    """Base class: a continuous linear functional on Lizorkin test functions."""

    def pair(self, phi: AnalyticFunction2D) -> complex:
        raise NotImplementedError

    def pair_translates(self, phi: AnalyticFunction2D, b1, b2) -> np.ndarray:
        """``(d, phi(. - b))`` for every ``b`` in ``b1 x b2``."""
        b1 = np.atleast_1d(np.asarray(b1, float))
        b2 = np.atleast_1d(np.asarray(b2, float))
        out = np.empty((b1.size, b2.size), dtype=complex)
        for i, u in enumerate(b1):
            for j, v in enumerate(b2):
                out[i, j] = self.pair(phi.translated((u, v)))
        return out

    def __add__(self, other: "LizorkinDistribution") -> "LizorkinDistribution":
        return Combination(((1.0, self), (1.0, other)))

    def __mul__(self, c) -> "LizorkinDistribution":
        return Combination(((c, self),))

    __rmul__ = __mul__


@dataclass(frozen=True)
class Combination(LizorkinDistribution):
    """Finite linear combination ``sum c_k d_k``."""

    terms: tuple

    def pair(self, phi):
        return complex(sum(c * d.pair(phi) for c, d in self.terms))

    def pair_translates(self, phi, b1, b2):
        return sum(c * d.pair_translates(phi, b1, b2) for c, d in self.terms)


@dataclass(frozen=True)
class Dirac(LizorkinDistribution):
    """Point evaluation ``(delta_x0, phi) = phi(x0)``."""

    x0: tuple = (0.0, 0.0)

    def pair(self, phi):
        return complex(phi.space(np.array([self.x0[0]]), np.array([self.x0[1]]))[0])

    def pair_translates(self, phi, b1, b2):
        b1 = np.atleast_1d(np.asarray(b1, float))
        b2 = np.atleast_1d(np.asarray(b2, float))
        return phi.space(self.x0[0] - b1[:, None], self.x0[1] - b2[None, :])


@dataclass(frozen=True)
class Polynomial(LizorkinDistribution):
    """``p(x) = sum c_(i, j) x1^i x2^j`` of total degree at most 4.

    Against space-route test functions the integral ``int p phi`` is truncated
    to the test function's box.  Against frequency-route ones each moment is
    ``int x^alpha phi = d^alpha F phi(0) / (-2 pi i)^|alpha|``, with the
    derivative taken by central differences of step ``1e-2``.
    """

    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for (i, j) in self.coeffs:
            if i < 0 or j < 0 or i + j > MAX_POLY_DEGREE:
                raise CapabilityError(f"polynomial degree is limited to {MAX_POLY_DEGREE}")

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, float)
        x2 = np.asarray(x2, float)
        return sum(c * x1 ** i * x2 ** j for (i, j), c in self.coeffs.items()) + 0 * x1 * x2

    def _stencil(self):
        """Frequency nodes and weights with ``sum w F(node) = sum c_alpha moment_alpha``."""
        h = _FREQ_FD_STEP
        nodes, weights = [], []
        for (i, j), c in self.coeffs.items():
            o1, w1 = fd_weights(i)
            o2, w2 = fd_weights(j)
            scale = c / (h ** (i + j) * (-TWO_PI * 1j) ** (i + j))
            for p, wp in zip(o1, w1):
                for q, wq in zip(o2, w2):
                    nodes.append((p * h, q * h))
                    weights.append(scale * wp * wq)
        return np.array(nodes, float).reshape(-1, 2), np.array(weights, complex)

    def pair(self, phi):
        return complex(self.pair_translates(phi, [0.0], [0.0])[0, 0])

    def pair_translates(self, phi, b1, b2):
        b1 = np.atleast_1d(np.asarray(b1, float))
        b2 = np.atleast_1d(np.asarray(b2, float))
        if not self.coeffs:
            return np.zeros((b1.size, b2.size), dtype=complex)
        if phi.pairing == "frequency":
            nodes, w = self._stencil()
            F = phi.freq(nodes[:, 0], nodes[:, 1]) * w
            E1 = np.exp(-TWO_PI * 1j * np.outer(b1, nodes[:, 0]))
            E2 = np.exp(-TWO_PI * 1j * np.outer(b2, nodes[:, 1]))
            return np.einsum("ik,jk,k->ij", E1, E2, F)
        g1, g2 = _box_grids(phi)
        X1, X2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
        vals = phi.space(X1, X2) * _tensor_weights(g1, g2)
        out = np.empty((b1.size, b2.size), dtype=complex)
        for i, u in enumerate(b1):
            for j, v in enumerate(b2):
                out[i, j] = np.sum(self(X1 + u, X2 + v) * vals)
        return out


@dataclass(frozen=True)
class LineDelta(LizorkinDistribution):
    """Uniform measure on the line ``x2 = v0 x1 + c``: ``(d, phi) = int phi(t, v0 t + c) dt``.

    In frequency the pairing is the slice ``int F phi(-v0 eta, eta) exp(2 pi i c eta) d eta``.
    """

    v0: float = 0.0
    c: float = 0.0

    @property
    def matched_shear(self) -> float:
        """Shear whose atoms oscillate across the line: ``s = -1 / v0``."""
        if self.v0 == 0:
            raise InvalidArgumentError("a horizontal line has no finite matching shear")
        return -1.0 / self.v0

    def _eta(self, phi, pad=0.0, over=1.2):
        """Slice nodes; the spacing keeps alias images of the projection apart."""
        v0 = abs(self.v0)
        B = phi.bandwidth[1] if v0 == 0 else min(phi.bandwidth[1], phi.bandwidth[0] / v0)
        reach = phi.extent[1] + v0 * phi.extent[0] + abs(self.c) + pad
        return Grid1D.with_spacing(-B, B, 1.0 / (over * 2.0 * reach))

    def pair(self, phi):
        return complex(self.pair_translates(phi, [0.0], [0.0])[0, 0])

    def pair_translates(self, phi, b1, b2):
        b1 = np.atleast_1d(np.asarray(b1, float))
        b2 = np.atleast_1d(np.asarray(b2, float))
        if phi.pairing == "frequency":
            eg = self._eta(phi, pad=abs(self.v0) * np.abs(b1).max() + np.abs(b2).max())
            eta = eg.nodes
            F = phi.freq(-self.v0 * eta, eta) * np.exp(TWO_PI * 1j * self.c * eta) * eg.weights
            # translating by b multiplies F phi by exp(-2 pi i b . xi), xi = (-v0 eta, eta)
            shift = b2[None, :, None] - self.v0 * b1[:, None, None]
            return np.exp(-TWO_PI * 1j * shift * eta[None, None, :]) @ F
        h = 1.0 / (2.2 * (phi.bandwidth[0] + abs(self.v0) * phi.bandwidth[1]))
        T = phi.extent[0] + np.abs(b1).max()
        tg = Grid1D.with_spacing(-T, T, h)
        t = tg.nodes
        out = np.empty((b1.size, b2.size), dtype=complex)
        for i, u in enumerate(b1):
            for j, v in enumerate(b2):
                out[i, j] = phi.space(t - u, self.v0 * t + self.c - v) @ tg.weights
        return out


@dataclass(frozen=True)
class SampledFunction(LizorkinDistribution):
    """Regular distribution ``(f, phi) = int f phi dx`` for ``f`` of polynomial growth."""

    f: AnalyticFunction2D

    def pair(self, phi):
        return complex(self.pair_translates(phi, [0.0], [0.0])[0, 0])

    def _multiplier(self, xi1, xi2):
        return 1.0

    def pair_translates(self, phi, b1, b2):
        b1 = np.atleast_1d(np.asarray(b1, float))
        b2 = np.atleast_1d(np.asarray(b2, float))
        if phi.pairing == "frequency":
            try:
                return self._frequency_pair(phi, b1, b2)
            except CapabilityError:
                pass
        out = np.empty((b1.size, b2.size), dtype=complex)
        for i, u in enumerate(b1):
            for j, v in enumerate(b2):
                out[i, j] = self._space_pair(phi, u, v)
        return out

    def _frequency_pair(self, phi, b1, b2, over=1.2):
        # int f T_b phi = int Ff(xi) exp(2 pi i b . xi) F phi(-xi) dxi over the common band
        f = self.f
        pad = (np.abs(b1).max(), np.abs(b2).max())
        k1, k2 = (Grid1D.with_spacing(-min(p, q), min(p, q), 1.0 / (over * (e1 + e2 + t)))
                  for p, q, e1, e2, t in zip(f.bandwidth, phi.bandwidth, f.extent, phi.extent, pad))
        G = (f.freq_grid(k1.nodes, k2.nodes) * phi.freq_grid(-k1.nodes, -k2.nodes)
             * self._multiplier(k1.nodes[:, None], k2.nodes[None, :]) * _tensor_weights(k1, k2))
        E1 = np.exp(TWO_PI * 1j * np.outer(b1, k1.nodes))
        E2 = np.exp(TWO_PI * 1j * np.outer(k2.nodes, b2))
        return E1 @ G @ E2

    def _space_pair(self, phi, u, v):
        g1, g2 = _box_grids(phi, self.f.bandwidth)
        X1, X2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
        w = _tensor_weights(g1, g2)
        return complex(np.sum(self.f.space(X1 + u, X2 + v) * phi.space(X1, X2) * w))


@dataclass(frozen=True)
class DerivativeOfFunction(SampledFunction):
    """``g^(alpha)`` paired as ``(-1)^|alpha| (g, D_h^alpha phi)``.

    ``D_h`` is the 4th-order central difference with step ``h`` per axis
    (default ``1 / (8 * bandwidth of g)``).  In frequency the stencil acts as
    the multiplier ``prod_j sum_k w_k exp(2 pi i k h_j xi_j) / h_j^alpha_j``.
    """

    alpha: tuple = (1, 0)
    step: tuple | None = None

    def __post_init__(self):
        a1, a2 = self.alpha
        if a1 < 0 or a2 < 0 or a1 > MAX_DERIVATIVE[0] or a2 > MAX_DERIVATIVE[1]:
            raise CapabilityError(f"derivative orders are limited to {MAX_DERIVATIVE}")

    @property
    def h(self) -> tuple:
        if self.step is not None:
            return tuple(float(t) for t in self.step)
        return tuple(1.0 / (8.0 * b) for b in self.f.bandwidth)

    def _sign(self):
        return (-1.0) ** (self.alpha[0] + self.alpha[1])

    def _multiplier(self, xi1, xi2):
        # phi is evaluated at -xi in the Parseval integrand
        out = self._sign()
        for order, h, xi in zip(self.alpha, self.h, (xi1, xi2)):
            off, w = fd_weights(order)
            out = out * sum(wk * np.exp(-TWO_PI * 1j * k * h * xi) for k, wk in zip(off, w)) / h ** order
        return out

    def _space_pair(self, phi, u, v):
        h = self.h
        grids = []
        for e, b, ob, hj in zip(phi.extent, phi.bandwidth, self.f.bandwidth, h):
            m = int(np.ceil(hj * 2.2 * (b + ob)))
            q = hj / m
            n = int(np.ceil(e / q))
            grids.append((np.arange(-n, n + 1) * q, m, q))
        (x1, m1, q1), (x2, m2, q2) = grids
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        D = np.zeros(X1.shape, dtype=complex)
        o1, w1 = fd_weights(self.alpha[0])
        o2, w2 = fd_weights(self.alpha[1])
        for k1, c1 in zip(o1, w1):
            for k2, c2 in zip(o2, w2):
                D += c1 * c2 * phi.space(X1 + k1 * h[0], X2 + k2 * h[1])
        D /= h[0] ** self.alpha[0] * h[1] ** self.alpha[1]
        w = np.outer(np.full(x1.size, q1), np.full(x2.size, q2))
        return complex(self._sign() * np.sum(self.f.space(X1 + u, X2 + v) * D * w))


# ---------------------------------------------------------------------------
# test functions on the parameter space

@dataclass(frozen=True)
class SlowGrowthFunction4D:
    """A function ``F(b1, b2, s, a)`` with declared growth exponents ``(nu1, nu2, nu3)``."""

    evaluator: Callable
    exponents: tuple = (0.0, 0.0, 0.0)
    constant: float = 1.0
    label: str = ""

    def sample(self, grid: ParamGrid) -> CoefficientArray:
        B1, B2, S, A = np.meshgrid(grid.b1_grid.nodes, grid.b2_grid.nodes, grid.s_grid.nodes,
                                   grid.a_nodes, indexing="ij")
        return CoefficientArray(grid, self.evaluator(B1, B2, S, A))

    def growth_ok(self, grid: ParamGrid) -> bool:
        """Sampled check of ``|F| <= C <b>^nu1 <s>^nu2 (|a|^nu3 + |a|^-nu3)``."""
        B1, B2, S, A = np.meshgrid(grid.b1_grid.nodes, grid.b2_grid.nodes, grid.s_grid.nodes,
                                   grid.a_nodes, indexing="ij")
        n1, n2, n3 = self.exponents
        bound = (self.constant * (1 + B1 ** 2 + B2 ** 2) ** (n1 / 2) * (1 + S ** 2) ** (n2 / 2)
                 * (np.abs(A) ** n3 + np.abs(A) ** -float(n3)))
        return bool(np.all(np.abs(self.evaluator(B1, B2, S, A)) <= bound * (1 + 1e-12)))

    @classmethod
    def bump(cls, centre=(0.0, 0.0, 0.0, 0.0), widths=(1.0, 1.0, 1.0, 0.5)) -> "SlowGrowthFunction4D":
        """Separable Gaussian in ``(b, s, log |a|)``; bounded by 2 with exponents 0."""
        c1, c2, cs, ca = centre
        w1, w2, ws, wa = widths

        def ev(b1, b2, s, a):
            return np.exp(-np.pi * (((b1 - c1) / w1) ** 2 + ((b2 - c2) / w2) ** 2
                                    + ((s - cs) / ws) ** 2 + ((np.log(np.abs(a)) - ca) / wa) ** 2))
        return cls(ev, (0.0, 0.0, 0.0), 1.0, "bump")


def _as_coefficients(Phi, grid):
    if isinstance(Phi, CoefficientArray):
        return Phi
    if isinstance(Phi, SlowGrowthFunction4D):
        return Phi.sample(grid if grid is not None else ParamGrid.default())
    raise InvalidArgumentError("Phi must be a CoefficientArray or a SlowGrowthFunction4D")


# ---------------------------------------------------------------------------
# transforms

def distributional_shearlet(d: LizorkinDistribution, Phi, psi: AdmissibleVector,
                            grid: ParamGrid | None = None) -> complex:
    """``(S_psi d, Phi) = (d, S^t_{conj psi} Phi)``."""
    c = _as_coefficients(Phi, grid)
    if not check_boundary_decay(c):
        warnings.warn("Phi does not decay on the grid boundary", BoundaryDecayWarning, stacklevel=2)
    if not np.any(c.values):
        return 0j
    return d.pair(synthesized_function(c, psi.conjugate()))


def desingularized_shearlet(d: LizorkinDistribution, g: GroupElement, psi: AdmissibleVector) -> complex:
    """``(d, S_g conj(psi))``; equal to ``(d, S_g psi)`` for real generators."""
    if g.a == 0:
        raise InvalidScaleError("scale must be non-zero")
    return d.pair(rep_apply(psi.conjugate(), g))


def desingularized_grid(d: LizorkinDistribution, psi: AdmissibleVector, grid: ParamGrid,
                        mask: np.ndarray | None = None) -> CoefficientArray:
    """:func:`desingularized_shearlet` at every grid node.

    Atoms of one ``(s, a)`` slab are translates of the ``b = 0`` atom and are
    paired in one batch.  Slabs where ``mask`` is all false are left at 0.
    """
    out = np.zeros(grid.shape, dtype=complex)
    b1, b2 = grid.b1_grid.nodes, grid.b2_grid.nodes
    conj_psi = psi.conjugate()
    for k, s in enumerate(grid.s_grid.nodes):
        for l, a in enumerate(grid.a_nodes):
            if mask is not None and not np.any(mask[:, :, k, l]):
                continue
            atom = rep_apply(conj_psi, GroupElement((0.0, 0.0), float(s), float(a)))
            out[:, :, k, l] = d.pair_translates(atom, b1, b2)
    return CoefficientArray(grid, out)


@dataclass(frozen=True)
class ConsistencyResult:
    discrepancy: float
    distributional: complex
    desingularized: complex
    degenerate: bool


def consistency_check(d: LizorkinDistribution, Phi, psi: AdmissibleVector,
                      grid: ParamGrid | None = None, floor: float = 1e-12) -> ConsistencyResult:
    """Duality definition against the Haar-weighted sum of desingularized values."""
    c = _as_coefficients(Phi, grid)
    lhs = distributional_shearlet(d, c, psi)
    des = desingularized_grid(d, psi, c.grid, mask=c.values != 0)
    rhs = complex(np.sum(c.grid.haar_weights * c.values * des.values))
    disc, degenerate = relative_discrepancy(lhs, rhs, floor)
    return ConsistencyResult(disc, lhs, rhs, degenerate)


# ---------------------------------------------------------------------------
# anisotropic decay along a line singularity

@dataclass(frozen=True)
class DecayProfile:
    scales: tuple
    matched: tuple
    mismatched: tuple
    matched_slope: float
    mismatched_slope: float

    @property
    def slope_ratio(self) -> float:
        """Mismatched slope over the magnitude of the matched one.

        Slopes are of ``log |c|`` against ``log a``; on the singular line the
        matched coefficient can grow as ``a -> 0`` so its slope may be negative.
        """
        m = abs(self.matched_slope)
        return self.mismatched_slope / m if m else float("inf")


def _fit_slope(a, c):
    # exponentially small coefficients underflow to 0; floor at the smallest normal double
    mag = np.maximum(np.abs(np.asarray(c)), np.finfo(float).tiny)
    return float(np.polyfit(np.log(a), np.log(mag), 1)[0])


def line_delta_decay(d: LineDelta, psi: AdmissibleVector, scales: Sequence = (0.4, 0.2, 0.1, 0.05),
                     b=(0.0, 0.0), shear_offset: float = 1.0) -> DecayProfile:
    """Coefficients at ``b`` over ``scales`` for the matched shear and one offset from it."""
    s0 = d.matched_shear
    a = np.asarray(scales, float)
    m = [desingularized_shearlet(d, GroupElement(tuple(b), s0, float(x)), psi) for x in a]
    mm = [desingularized_shearlet(d, GroupElement(tuple(b), s0 + shear_offset, float(x)), psi) for x in a]
    return DecayProfile(tuple(a), tuple(m), tuple(mm), _fit_slope(a, m), _fit_slope(a, mm))
