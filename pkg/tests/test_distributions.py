import dataclasses
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lizshear.distributions import (DerivativeOfFunction, Dirac, LineDelta, Polynomial,
                                    SampledFunction, SlowGrowthFunction4D, consistency_check,
                                    desingularized_grid, desingularized_shearlet,
                                    distributional_shearlet, line_delta_decay)
from lizshear.exceptions import CapabilityError, InvalidArgumentError, InvalidScaleError
from lizshear.numerics import Grid1D, LogSymmetricGrid
from lizshear.shearlet import (GroupElement, ParamGrid, analyze_spectral, builtin_admissible_vector,
                               rep_apply)
from lizshear.synthesis import BoundaryDecayWarning
from lizshear.testfn import builtin_chi1, gaussian1d, gaussian2d, gaussian_dx2d, tensor

PSI = builtin_admissible_vector()
GRID = ParamGrid(Grid1D(-3, 3, 13), Grid1D(-3, 3, 13), Grid1D(-1.5, 1.5, 7), LogSymmetricGrid(0.25, 2.0, 4))
BUMP = SlowGrowthFunction4D.bump(centre=(0.5, -0.3, 0.3, -0.35), widths=(1.0, 1.0, 0.6, 0.5))
POINTS = [GroupElement((0.3, -0.2), 0.4, 0.5), GroupElement((0, 0), 0, 1.0),
          GroupElement((-1.0, 0.5), -1.0, -0.7)]


def in_frequency(f):
    return dataclasses.replace(f, pairing="frequency")


def test_polynomial_annihilates_s0_function():
    phi = tensor(builtin_chi1(), gaussian1d())
    assert abs(Polynomial({(2, 0): 1.0}).pair(phi)) <= 1e-8


def test_polynomial_pairs_gaussian_with_moments():
    # int x1^2 exp(-pi |x|^2) = 1 / (2 pi); both routes
    p = Polynomial({(2, 0): 1.0, (0, 0): 3.0})
    want = 1 / (2 * np.pi) + 3.0
    assert p.pair(gaussian2d()) == pytest.approx(want, abs=1e-10)
    assert p.pair(in_frequency(gaussian2d())) == pytest.approx(want, abs=1e-6)


def test_polynomial_degree_limit():
    with pytest.raises(CapabilityError):
        Polynomial({(3, 2): 1.0})


@pytest.mark.parametrize("route", [lambda f: f, in_frequency])
def test_line_delta_against_gaussian(route):
    assert LineDelta(0.0, 0.0).pair(route(gaussian2d())) == pytest.approx(1.0, abs=1e-9)
    # slanted line x2 = x1 + 0.5: int exp(-pi (t^2 + (t + 0.5)^2)) dt
    want = 2 ** -0.5 * np.exp(-np.pi * 0.125)
    assert LineDelta(1.0, 0.5).pair(route(gaussian2d())) == pytest.approx(want, abs=1e-9)


def test_dirac_is_point_evaluation():
    assert Dirac((0.2, -0.1)).pair(gaussian2d()) == pytest.approx(np.exp(-np.pi * 0.05))


def test_derivative_matches_closed_form_derivative():
    # the stencil is 4th order: shrinking the step tightens agreement
    ref = SampledFunction(gaussian_dx2d())
    atom = rep_apply(PSI, GroupElement((0.2, 0.1), 0.3, 0.6))
    phi = gaussian2d().translated((0.3, 0.0))
    for step, tol in ((None, 1e-5), ((0.01, 0.01), 1e-7)):
        d = DerivativeOfFunction(gaussian2d(), (1, 0), step)
        assert d.pair(atom) == pytest.approx(ref.pair(atom), abs=tol)
        assert d.pair(phi) == pytest.approx(ref.pair(phi), abs=tol)
    with pytest.raises(CapabilityError):
        DerivativeOfFunction(gaussian2d(), (3, 0))


def test_sampled_function_routes_agree():
    d = SampledFunction(gaussian2d())
    phi = gaussian_dx2d().translated((0.4, 0.2))
    assert d.pair(phi) == pytest.approx(d.pair(in_frequency(phi)), abs=1e-12)


def test_distributional_polynomial_vanishes():
    p = Polynomial({(4, 0): 1.0, (2, 2): -0.5, (0, 3): 0.25, (1, 0): 2.0, (0, 0): 1.0})
    assert abs(distributional_shearlet(p, BUMP, PSI, GRID)) <= 1e-6


def test_distributional_matches_classical_transform():
    d = SampledFunction(gaussian2d())
    c = BUMP.sample(GRID)
    lhs = distributional_shearlet(d, c, PSI)
    rhs = np.sum(GRID.haar_weights * analyze_spectral(gaussian2d(), PSI, GRID).values * c.values)
    assert abs(lhs - rhs) <= 1e-4 * abs(rhs)


@pytest.mark.parametrize("g", POINTS)
def test_desingularized_polynomial_vanishes(g):
    p = Polynomial({(4, 0): 1.0, (2, 2): -0.5, (0, 3): 0.25, (1, 0): 2.0, (0, 0): 1.0})
    assert abs(desingularized_shearlet(p, g, PSI)) <= 1e-8


def test_desingularized_regular_function_is_the_coefficient():
    vals = [desingularized_shearlet(SampledFunction(gaussian_dx2d()), g, PSI) for g in POINTS]
    from lizshear.shearlet import analyze_spectral_at
    assert np.allclose(vals, analyze_spectral_at(gaussian_dx2d(), PSI, POINTS), atol=1e-8)


def test_line_delta_anisotropy():
    prof = line_delta_decay(LineDelta(1.0, 0.0), PSI)
    assert prof.scales == (0.4, 0.2, 0.1, 0.05)
    assert prof.slope_ratio >= 2.0
    with pytest.raises(InvalidArgumentError):
        LineDelta(0.0).matched_shear


@pytest.mark.parametrize("d", [Dirac((0.5, -0.5)), SampledFunction(gaussian2d())])
def test_consistency(d):
    r = consistency_check(d, BUMP, PSI, GRID)
    assert r.discrepancy <= 1e-3 and not r.degenerate


def test_consistency_polynomial_is_degenerate():
    r = consistency_check(Polynomial({(2, 1): 1.0}), BUMP, PSI, GRID)
    assert abs(r.distributional) <= 1e-6 and abs(r.desingularized) <= 1e-6
    assert r.degenerate and r.discrepancy == 0.0


def test_phi_type_and_boundary_checks():
    with pytest.raises(InvalidArgumentError):
        distributional_shearlet(Dirac(), "nope", PSI, GRID)
    flat = SlowGrowthFunction4D(lambda b1, b2, s, a: 1.0 + 0 * b1)
    with pytest.warns(BoundaryDecayWarning):
        distributional_shearlet(Dirac(), flat, PSI, ParamGrid(Grid1D(-1, 1, 3), Grid1D(-1, 1, 3),
                                                               Grid1D(-1, 1, 3), LogSymmetricGrid(0.5, 1, 2)))
    with pytest.raises(InvalidScaleError):
        GroupElement((0, 0), 0, 0)


def test_bump_growth_bound():
    assert BUMP.growth_ok(GRID)
    wild = SlowGrowthFunction4D(lambda b1, b2, s, a: np.exp(np.abs(b1)), (1.0, 0.0, 0.0))
    assert not wild.growth_ok(ParamGrid(Grid1D(-8, 8, 9), Grid1D(-1, 1, 3), Grid1D(-1, 1, 3),
                                        LogSymmetricGrid(0.5, 1, 2)))


@settings(max_examples=15)
@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
       st.floats(-1, 1), st.floats(-1, 1))
def test_pairing_is_linear(c, x, y):
    phi = rep_apply(PSI, GroupElement((0.1, -0.2), 0.5, 0.8))
    d1, d2 = Dirac((x, y)), LineDelta(0.5, 0.1)
    assert (d1 + c * d2).pair(phi) == pytest.approx(d1.pair(phi) + c * d2.pair(phi), abs=1e-10)


@settings(max_examples=10)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_dirac_grid_is_translated_atom(x, y):
    g = ParamGrid(Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), Grid1D(-1, 1, 2), LogSymmetricGrid(0.5, 1.0, 2))
    des = desingularized_grid(Dirac((x, y)), PSI, g).values
    i, j, k, l = 2, 0, 1, 3
    atom = rep_apply(PSI, g.element(i, j, k, l))
    assert des[i, j, k, l] == pytest.approx(complex(atom.space(x, y)), abs=1e-12)
