import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from lizshear.exceptions import InvalidScaleError, NotAdmissibleError
from lizshear.numerics import Grid1D, LogSymmetricGrid, SampledSignal1D
from lizshear.testfn import AnalyticFunction1D, builtin_chi1, gaussian1d, gaussian_derivative1d
from lizshear.wavelet import (WaveletAtomParams, calderon_constant, wavelet_energy,
                              wavelet_transform, wavelet_transform_space)


def test_calderon_constant_closed_form():
    # int exp(-2/t^2 - 2 t^2) dt/|t| over R is 2 K_0(4)
    assert calderon_constant(builtin_chi1()) == pytest.approx(2 * special.k0(4.0), rel=1e-10)


def test_calderon_two_resolutions_agree():
    chi = builtin_chi1()
    a = calderon_constant(chi, n_per_decade=200)
    b = calderon_constant(chi, n_per_decade=800)
    assert abs(a - b) <= 1e-6 * b


def test_gaussian_wavelet_is_not_admissible():
    with pytest.raises(NotAdmissibleError, match="diverges"):
        calderon_constant(gaussian1d())


def test_zero_wavelet_is_not_admissible():
    zero = AnalyticFunction1D(lambda t: 0 * t, lambda x: 0 * x)
    with pytest.raises(NotAdmissibleError):
        calderon_constant(zero)


def test_wavelet_transform_matches_space_quadrature():
    f, psi = gaussian1d(), builtin_chi1()
    b, a = 0.5, 2.0
    integrand = lambda x: np.exp(-np.pi * x * x) * abs(a) ** -0.5 * float(psi.space((x - b) / a).real)
    oracle = integrate.quad(integrand, -8, 8, epsabs=1e-14, limit=200)[0]
    W = wavelet_transform(f, psi, [b], [a])[0, 0]
    assert abs(W - oracle) <= 1e-7


def test_frequency_and_space_paths_agree():
    f, psi = gaussian_derivative1d(), builtin_chi1()
    b = np.linspace(-2, 2, 9)
    a = np.array([-1.5, 0.5, 1.0, 3.0])
    assert np.max(np.abs(wavelet_transform(f, psi, b, a) - wavelet_transform_space(f, psi, b, a))) <= 1e-7


def test_sampled_input():
    g = Grid1D(-6, 6, 601)
    s = SampledSignal1D(g, np.exp(-np.pi * g.nodes ** 2))
    b, a = np.array([0.0, 0.7]), np.array([0.8, 2.0])
    assert np.allclose(wavelet_transform(s, builtin_chi1(), b, a),
                       wavelet_transform(gaussian1d(), builtin_chi1(), b, a), atol=1e-9)


def test_calderon_isometry():
    # sum |W|^2 db da / a^2 = C_psi ||f||^2 for f in L^2
    f, psi = gaussian_derivative1d(), builtin_chi1()
    bg = Grid1D(-30, 30, 601)
    ag = LogSymmetricGrid(0.02, 40.0, 120)
    E = wavelet_energy(wavelet_transform(f, psi, bg, ag), bg, ag)
    norm2 = np.pi / np.sqrt(2)  # int (2 pi x)^2 exp(-2 pi x^2) dx
    assert E == pytest.approx(calderon_constant(psi) * norm2, rel=1e-3)


def test_zero_scale_rejected():
    with pytest.raises(InvalidScaleError):
        WaveletAtomParams(0.0, 0.0)
    with pytest.raises(InvalidScaleError):
        wavelet_transform(gaussian1d(), builtin_chi1(), [0.0], [0.0, 1.0])


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.3, 3.0))
def test_linearity_and_translation_covariance(c, shift, a):
    psi = builtin_chi1()
    f = gaussian_derivative1d()
    b = np.array([0.0, 0.5])
    W = wavelet_transform(f, psi, b, [a])
    assert np.allclose(wavelet_transform(f.scaled(c), psi, b, [a]), c * W, atol=1e-12)
    moved = AnalyticFunction1D(lambda t: np.exp(-2j * np.pi * shift * t) * f.freq(t),
                               extent=f.extent + abs(shift), bandwidth=f.bandwidth)
    assert np.allclose(wavelet_transform(moved, psi, b + shift, [a]), W, atol=1e-9)
