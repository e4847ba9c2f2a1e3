import numpy as np
import pytest
from hypothesis import given, strategies as st

from lizshear.exceptions import InvalidArgumentError, OutOfRangeError
from lizshear.numerics import Grid1D, quad
from lizshear.radon import (PolarSinogram, affine_slices, polar_to_affine, radon_affine_direct,
                            radon_affine_spectral, radon_polar, radon_polar_column)
from lizshear.testfn import gaussian1d, gaussian2d, gaussian_dx2d, lizorkin2d, tensor


def g1(t):
    return np.exp(-np.pi * np.asarray(t) ** 2)


def test_polar_gaussian_is_theta_independent():
    th = Grid1D(-np.pi, np.pi - 2 * np.pi / 16, 16)
    q = Grid1D(-3, 3, 25)
    p = radon_polar(gaussian2d(), th, q)
    assert np.max(np.abs(p.values - g1(q.nodes)[None, :])) <= 1e-8


@pytest.mark.parametrize("v,scale", [(0.0, 1.0), (1.0, 2 ** -0.5)])
def test_affine_gaussian_closed_form(v, scale):
    t = Grid1D(-3, 3, 31)
    r = radon_affine_direct(gaussian2d(), [v], t).values[0]
    want = scale * np.exp(-np.pi * t.nodes ** 2 / (1 + v * v))
    assert np.max(np.abs(r - want)) <= 1e-8


def test_slice_theorem_single_slope():
    t = Grid1D(-4, 4, 33)
    spec = radon_affine_spectral(gaussian2d(), 0.7, t).values
    direct = radon_affine_direct(gaussian2d(), [0.7], t).values[0]
    assert np.max(np.abs(spec - direct)) <= 1e-7


def test_slice_of_separable_gaussian():
    f = tensor(gaussian1d(), gaussian1d())
    t = Grid1D(-3, 3, 31)
    assert np.max(np.abs(radon_affine_spectral(f, 0.0, t).values - g1(t.nodes))) <= 1e-8


def test_slice_theorem_on_non_gaussian_inputs():
    v = np.linspace(-3, 3, 7)
    t = Grid1D(-4, 4, 33)
    for f in (gaussian_dx2d(), lizorkin2d(width=1.0)):
        line = Grid1D(-40, 40, 4001) if f.label == "lizorkin" else Grid1D(-8, 8, 801)
        d = affine_slices(f, v, t.nodes) - radon_affine_direct(f, v, t, line_grid=line).values
        assert np.max(np.abs(d)) <= 1e-7


def test_polar_to_affine_point():
    th = Grid1D(-1.2, 1.2, 241)
    q = Grid1D(-4, 4, 321)
    p = radon_polar(gaussian2d(), th, q)
    assert abs(polar_to_affine(p, 1.0, 1.0) - 2 ** -0.5 * np.exp(-np.pi / 2)) <= 1e-6


def test_polar_to_affine_grid():
    th = Grid1D(-1.2, 1.2, 241)
    q = Grid1D(-4, 4, 321)
    p = radon_polar(gaussian2d(), th, q)
    v = np.linspace(-2, 2, 9)
    t = Grid1D(-2, 2, 9)
    V, T = np.meshgrid(v, t.nodes, indexing="ij")
    assert np.max(np.abs(polar_to_affine(p, V, T) - radon_affine_direct(gaussian2d(), v, t).values)) <= 1e-5


def test_range_errors():
    th = Grid1D(-1.0, 1.0, 9)
    q = Grid1D(-1, 1, 9)
    p = radon_polar(gaussian2d(), th, q)
    with pytest.raises(OutOfRangeError):
        p(1.5, 0.0)
    with pytest.raises(OutOfRangeError):
        radon_affine_direct(gaussian2d(), [11.0], q)
    with pytest.raises(InvalidArgumentError):
        PolarSinogram(Grid1D(-1, 4, 3), q, np.zeros((3, 9)))


@given(st.floats(-np.pi, np.pi - 1e-9))
def test_projection_preserves_mass(theta):
    # every projection of f integrates to int f = Ff(0)
    f = gaussian_dx2d().translated((0.3, -0.2)) + gaussian2d()
    q = Grid1D(-8, 8, 401)
    col = radon_polar_column(f, theta, q.nodes)
    assert quad(col, q) == pytest.approx(1.0, abs=1e-10)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-1.5, 1.5))
def test_translation_shifts_projections(b1, b2, theta):
    f = gaussian_dx2d()
    q = np.linspace(-1, 1, 5)
    shift = b1 * np.cos(theta) + b2 * np.sin(theta)
    lhs = radon_polar_column(f.translated((b1, b2)), theta, q, Grid1D(-12, 12, 1201))
    rhs = radon_polar_column(f, theta, q - shift)
    assert np.allclose(lhs, rhs, atol=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_affine_transform_is_linear(a, b):
    t = Grid1D(-2, 2, 9)
    f, g = gaussian2d(), gaussian_dx2d()
    lhs = affine_slices(f.scaled(a) + g.scaled(b), [0.4], t.nodes)
    rhs = a * affine_slices(f, [0.4], t.nodes) + b * affine_slices(g, [0.4], t.nodes)
    assert np.allclose(lhs, rhs, atol=1e-12)
