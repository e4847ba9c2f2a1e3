"""Registry of numerical identity checks run by ``lizshear verify``.

Every check returns a :class:`CheckRecord`; the pass flag is exactly
``error <= tolerance`` where ``error`` is the absolute or relative error named
by ``metric``.  Computations are deterministic, so two runs with the same
configuration produce identical records.
"""
from __future__ import annotations

import platform
import time
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy

from .distributions import (Dirac, LineDelta, Polynomial, SlowGrowthFunction4D, consistency_check,
                            desingularized_shearlet, distributional_shearlet, line_delta_decay)
from .numerics import Grid1D, LogSymmetricGrid, fourier_at
from .radon import (affine_slices, polar_to_affine, radon_affine_direct, radon_polar)
from .ridgelet import ridgelet_side
from .shearlet import (GroupElement, ParamGrid, admissibility_constant, analyze_direct,
                       analyze_factorized, analyze_spectral, analyze_spectral_at,
                       builtin_admissible_vector)
from .synthesis import duality_check, gaussian_bump, reconstruct
from .testfn import (antiderivative_s0, builtin_chi1, directional_moment_check, gaussian2d,
                     gaussian_dx2d, lizorkin2d, moment)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    lhs: float
    rhs: float
    abs_error: float
    rel_error: float
    metric: str
    tolerance: float
    passed: bool

    @property
    def error(self) -> float:
        return self.abs_error if self.metric == "abs" else self.rel_error

    def as_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.name:<26} {self.metric}_error={self.error:.3e} "
                f"tol={self.tolerance:.1e}  [{self.anchor}]")


def _record(name, anchor, lhs, rhs, abs_err, rel_err, metric, tol) -> CheckRecord:
    err = abs_err if metric == "abs" else rel_err
    return CheckRecord(name, anchor, float(lhs), float(rhs), float(abs_err), float(rel_err),
                       metric, float(tol), bool(err <= tol))


def _rel(a, b):
    return a / b if b else (0.0 if a == 0 else float("inf"))


def _compare(name, anchor, lhs, rhs, metric, tol) -> CheckRecord:
    """Max-abs comparison of two arrays; the relative error is against ``max |rhs|``."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    d = float(np.max(np.abs(lhs - rhs)))
    scale = float(np.max(np.abs(rhs)))
    return _record(name, anchor, np.max(np.abs(lhs)), scale, d, _rel(d, scale), metric, tol)


# ---------------------------------------------------------------------------
# shared fixtures

THREE_PATH_GRID = ParamGrid(Grid1D(-2.0, 2.0, 8), Grid1D(-2.0, 2.0, 8), Grid1D(-1.5, 1.5, 8),
                            LogSymmetricGrid(0.25, 2.0, 4))
BUMP_GRID = ParamGrid(Grid1D(-3.0, 3.0, 13), Grid1D(-3.0, 3.0, 13), Grid1D(-1.5, 1.5, 7),
                      LogSymmetricGrid(0.25, 2.0, 4))
BUMP_CENTRE = (0.5, -0.3, 0.3, -0.35)
BUMP_WIDTHS = (1.0, 1.0, 0.6, 0.5)
RIDGELET_POINTS = (GroupElement((0.2, -0.3), 0.5, 0.5), GroupElement((0.0, 0.0), 0.0, 1.0),
                   GroupElement((-0.4, 0.1), -0.7, 1.0), GroupElement((0.3, 0.3), 1.2, 2.0),
                   GroupElement((0.1, -0.2), 0.3, 2.0))
POLY_POINTS = (GroupElement((0.3, -0.2), 0.4, 0.5), GroupElement((0.0, 0.0), 0.0, 1.0),
               GroupElement((-1.0, 0.5), -1.0, -0.7))
POLY_COEFFS = {(4, 0): 1.0, (2, 2): -0.5, (0, 3): 0.25, (1, 0): 2.0, (0, 0): 1.0}


def bump_function() -> SlowGrowthFunction4D:
    return SlowGrowthFunction4D.bump(centre=BUMP_CENTRE, widths=BUMP_WIDTHS)


# ---------------------------------------------------------------------------
# checks

def check_slice_theorem(cfg, tol):
    f = gaussian2d()
    v = np.linspace(-3.0, 3.0, 13)
    t = Grid1D(-4.0, 4.0, 33)
    return _compare("slice-theorem",
                    "projection of f along x + v y = t equals the inverse transform of tau -> Ff(tau, tau v)",
                    affine_slices(f, v, t.nodes), radon_affine_direct(f, v, t).values, "abs", tol)


def check_polar_affine(cfg, tol):
    f = gaussian2d()
    v = np.linspace(-2.0, 2.0, 9)
    t = Grid1D(-2.0, 2.0, 9)
    th = Grid1D(-1.2, 1.2, 241)
    q = Grid1D(-4.0, 4.0, 321)
    p = radon_polar(f, th, q)
    V, T = np.meshgrid(v, t.nodes, indexing="ij")
    return _compare("polar-affine",
                    "affine projection at (v, t) is (1+v^2)^(-1/2) times the polar one at (arctan v, t/(1+v^2)^(1/2))",
                    polar_to_affine(p, V, T), radon_affine_direct(f, v, t).values, "abs", tol)


def check_admissibility(cfg, tol):
    r = admissibility_constant(builtin_admissible_vector(), rtol=1.0)
    d = abs(r.value - r.factorized)
    return _record("admissibility",
                   "C_psi by 2D quadrature of |F psi|^2/xi1^2 equals the Calderon constant times ||phi2||^2",
                   r.value, r.factorized, d, _rel(d, abs(r.factorized)), "rel", tol)


def check_admissibility_homogeneity(cfg, tol):
    psi = builtin_admissible_vector()
    c = 0.6 - 1.3j
    base = admissibility_constant(psi).value
    scaled = admissibility_constant(psi.scaled(c)).value
    want = abs(c) ** 2 * base
    d = abs(scaled - want)
    return _record("admissibility-homogeneity", "C_{c psi} = |c|^2 C_psi",
                   scaled, want, d, _rel(d, want), "rel", tol)


def check_three_path(cfg, tol):
    psi = builtin_admissible_vector()
    threads = cfg.get("threads", 1)
    worst, scale = 0.0, 0.0
    for f in (gaussian2d(), gaussian_dx2d()):
        S = analyze_spectral(f, psi, THREE_PATH_GRID, threads).values
        D = analyze_direct(f, psi, THREE_PATH_GRID, threads).values
        F = analyze_factorized(f, psi, THREE_PATH_GRID, threads).values
        worst = max(worst, float(np.max(np.abs(D - S))), float(np.max(np.abs(F - S))))
        scale = max(scale, float(np.max(np.abs(S))))
    return _record("three-path",
                   "space-domain, frequency-domain and projection-wavelet shearlet coefficients coincide",
                   scale, scale, worst, _rel(worst, scale), "abs", tol)


@lru_cache(maxsize=2)
def _default_grid_coefficients(threads: int = 1):
    """Lizorkin builtin on the default grid, shared by the isometry and reconstruction checks."""
    return analyze_spectral(lizorkin2d(), builtin_admissible_vector(), ParamGrid.default(), threads)


def check_isometry(cfg, tol):
    f = lizorkin2d()
    psi = builtin_admissible_vector()
    C = admissibility_constant(psi).value
    energy = _default_grid_coefficients(cfg.get("threads", 1)).energy()
    g1, g2 = f.space_grids()
    x1, x2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
    norm2 = float(np.sum(np.outer(g1.weights, g2.weights) * np.abs(f.space(x1, x2)) ** 2))
    want = C * norm2
    d = abs(energy - want)
    return _record("isometry", "Haar-weighted coefficient energy equals C_psi ||f||^2",
                   energy, want, d, _rel(d, want), "rel", tol)


def check_reconstruction(cfg, tol):
    f = lizorkin2d()
    psi = builtin_admissible_vector()
    r = reconstruct(f, psi, ParamGrid.default(), _default_grid_coefficients(cfg.get("threads", 1)))
    norm = r.field.l2_norm()
    res = r.residual
    return _record("reconstruction", "f = C_psi^(-1) S^t_psi S_psi f (relative L2 residual)",
                   norm, norm, res * norm, res, "rel", tol)


def check_duality(cfg, tol):
    grid = BUMP_GRID
    Phi = gaussian_bump(grid, BUMP_CENTRE, BUMP_WIDTHS)
    r = duality_check(gaussian2d(), Phi, builtin_admissible_vector())
    d = abs(r.lhs - r.rhs)
    return _record("duality", "int f S^t_{conj psi} Phi dx = int S_psi f Phi dmu (Haar measure)",
                   abs(r.lhs), abs(r.rhs), d, r.discrepancy, "rel", tol)


def check_desingularization(cfg, tol):
    r = consistency_check(Dirac((0.5, -0.5)), bump_function(), builtin_admissible_vector(), BUMP_GRID)
    d = abs(r.distributional - r.desingularized)
    return _record("desingularization",
                   "distributional shearlet transform equals pairing with (d, S_{b,s,a} conj psi) (Dirac input)",
                   abs(r.distributional), abs(r.desingularized), d, r.discrepancy, "rel", tol)


def check_ridgelet(cfg, tol):
    f = gaussian2d()
    psi = builtin_admissible_vector()
    lhs = ridgelet_side(f, psi, RIDGELET_POINTS)
    rhs = analyze_spectral_at(f, psi, RIDGELET_POINTS)
    rel = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
    return _record("ridgelet",
                   "shearlet coefficient is a v-integral of ridgelet coefficients weighted by conj(phi2)",
                   np.max(np.abs(lhs)), np.max(np.abs(rhs)), np.max(np.abs(lhs - rhs)), rel, "rel", tol)


def check_moments(cfg, tol):
    chi = builtin_chi1()
    worst = max(abs(moment(chi, m)) for m in range(7))
    liz = lizorkin2d()
    # wide box: the x1 profile of the 2D builtin decays only like exp(-c |x1|^(2/3))
    worst = max(worst, max(directional_moment_check(liz, 1, m, (0.0, 0.3, -0.7), extent=160.0)
                           for m in range(7)))
    return _record("moments", "all moments of order <= 6 of the Lizorkin builtins vanish",
                   worst, 0.0, worst, float("inf") if worst else 0.0, "abs", tol)


def check_antiderivative(cfg, tol):
    f = builtin_chi1()
    g = antiderivative_s0(f)
    xi = np.array([0.3, 0.7, 1.5])
    grid = Grid1D.with_spacing(-80.0, 80.0, 1.0 / (4.0 * f.bandwidth))
    # Fourier transform of the space-domain antiderivative, independent of g's own spectrum
    Fg = fourier_at(g.space(grid.nodes), grid, xi)
    lhs = f.freq(xi)
    rhs = 2j * np.pi * xi * Fg
    worst = float(np.max(np.abs(lhs - rhs)))
    worst = max(worst, max(abs(moment(g, m)) for m in range(5)))
    scale = float(np.max(np.abs(lhs)))
    return _record("antiderivative",
                   "Ff(xi) = 2 pi i xi Fg(xi) for the decaying antiderivative g, whose moments vanish",
                   scale, float(np.max(np.abs(rhs))), worst, _rel(worst, scale), "abs", tol)


def check_polynomial(cfg, tol):
    psi = builtin_admissible_vector()
    p = Polynomial(POLY_COEFFS)
    des = max(abs(desingularized_shearlet(p, g, psi)) for g in POLY_POINTS)
    dist = abs(distributional_shearlet(p, bump_function(), psi, BUMP_GRID))
    worst = max(des, dist)
    return _record("polynomial-annihilation",
                   "polynomials of degree <= 4 have vanishing shearlet transform",
                   worst, 0.0, worst, float("inf") if worst else 0.0, "abs", tol)


def check_line_delta(cfg, tol):
    prof = line_delta_decay(LineDelta(1.0, 0.0), builtin_admissible_vector())
    ratio = prof.slope_ratio
    # error is the reciprocal ratio, so tolerance 0.5 means "mismatched slope >= 2 |matched slope|"
    inv = 1.0 / ratio if ratio else float("inf")
    return _record("line-delta-anisotropy",
                   "coefficients off the singular direction decay much faster as a -> 0",
                   prof.mismatched_slope, abs(prof.matched_slope), inv, inv, "rel", tol)


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable
    tolerance: float


CHECKS = {c.name: c for c in (
    Check("slice-theorem", check_slice_theorem, 1e-7),
    Check("polar-affine", check_polar_affine, 1e-5),
    Check("admissibility", check_admissibility, 1e-6),
    Check("admissibility-homogeneity", check_admissibility_homogeneity, 1e-10),
    Check("three-path", check_three_path, 1e-5),
    Check("isometry", check_isometry, 5e-2),
    Check("reconstruction", check_reconstruction, 5e-2),
    Check("duality", check_duality, 1e-4),
    Check("desingularization", check_desingularization, 1e-3),
    Check("ridgelet", check_ridgelet, 1e-3),
    Check("moments", check_moments, 1e-7),
    Check("antiderivative", check_antiderivative, 1e-8),
    Check("polynomial-annihilation", check_polynomial, 1e-6),
    Check("line-delta-anisotropy", check_line_delta, 0.5),
)}


def environment() -> dict:
    return {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__}


def run_checks(cfg: dict, only=None, progress=None) -> tuple[list, float]:
    """Run the selected checks; returns ``(records, wall_seconds)``."""
    names = list(CHECKS) if not only else list(only)
    t0 = time.perf_counter()
    records = []
    for n in names:
        chk = CHECKS[n]
        tol = cfg.get("tolerances", {}).get(n, chk.tolerance)
        rec = chk.run(cfg, tol)
        records.append(rec)
        if progress is not None:
            progress(rec)
    return records, time.perf_counter() - t0
