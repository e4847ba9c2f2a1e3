import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from lizshear.exceptions import InvalidArgumentError, InvalidScaleError
from lizshear.ridgelet import ridgelet_shearlet_check, ridgelet_side, ridgelet_transform
from lizshear.shearlet import GroupElement, analyze_spectral_at, builtin_admissible_vector
from lizshear.testfn import builtin_chi1, gaussian1d, gaussian2d, gaussian_dx2d
from lizshear.wavelet import wavelet_transform

PSI = builtin_admissible_vector()
CHI = builtin_chi1()


def test_matches_defining_double_integral():
    theta, b, a = 0.0, 0.3, 1.5
    n = (np.cos(theta), np.sin(theta))

    def integrand(x2, x1):
        u = (x1 * n[0] + x2 * n[1] - b) / a
        return np.exp(-np.pi * (x1 * x1 + x2 * x2)) / a * float(CHI.space(u).real)

    oracle = integrate.dblquad(integrand, -6, 6, -6, 6, epsabs=1e-11, epsrel=1e-11)[0]
    got = ridgelet_transform(gaussian2d(), CHI, [theta], [b], [a])[0, 0, 0]
    assert abs(got - oracle) <= 1e-6


def test_theta_zero_column_is_a_wavelet_transform():
    b = np.linspace(-2, 2, 9)
    a = np.array([0.5, 1.0, 2.0])
    got = ridgelet_transform(gaussian2d(), CHI, [0.0], b, a)[0]
    # the theta = 0 projection of the 2D Gaussian is the 1D Gaussian
    want = wavelet_transform(gaussian1d(), CHI, b, a) * a[None, :] ** -0.5
    assert np.max(np.abs(got - want)) <= 1e-7


def test_shearlet_relation_interpolated():
    pts = [GroupElement((0.2, -0.3), 0.5, 0.5), GroupElement((0, 0), 0, 1.0),
           GroupElement((-0.4, 0.1), -0.7, 1.0), GroupElement((0.3, 0.3), 1.2, 2.0),
           GroupElement((0.1, -0.2), 0.3, 2.0)]
    assert ridgelet_shearlet_check(gaussian2d(), PSI, pts) <= 1e-3


def test_shearlet_relation_exact_nodes():
    g = GroupElement((0, 0), 0, 1.0)
    lhs = ridgelet_side(gaussian2d(), PSI, [g], mode="exact")[0]
    rhs = analyze_spectral_at(gaussian2d(), PSI, [g])[0]
    assert abs(lhs - rhs) <= 1e-4 * abs(rhs)


def test_invalid_inputs():
    with pytest.raises(InvalidScaleError):
        ridgelet_transform(gaussian2d(), CHI, [0.0], [0.0], [-1.0])
    with pytest.raises(InvalidScaleError):
        ridgelet_side(gaussian2d(), PSI, [GroupElement((0, 0), 0, -1.0)])
    with pytest.raises(InvalidArgumentError):
        ridgelet_side(gaussian2d(), PSI, [GroupElement()], mode="bogus")


@settings(max_examples=10)
@given(st.floats(-np.pi, np.pi))
def test_rotation_invariant_input(theta):
    b, a = [0.0, 0.6], [0.7, 1.4]
    ref = ridgelet_transform(gaussian2d(), CHI, [0.0], b, a)
    assert np.allclose(ridgelet_transform(gaussian2d(), CHI, [theta], b, a), ref, atol=1e-10)


@settings(max_examples=10)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_ridgelet_is_linear(p, q):
    f, h = gaussian2d(), gaussian_dx2d()
    args = ([0.3], [0.0, 0.5], [1.0])
    lhs = ridgelet_transform(f.scaled(p) + h.scaled(q), CHI, *args)
    rhs = p * ridgelet_transform(f, CHI, *args) + q * ridgelet_transform(h, CHI, *args)
    assert np.allclose(lhs, rhs, atol=1e-12)
