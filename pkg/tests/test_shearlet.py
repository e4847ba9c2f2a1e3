import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lizshear.exceptions import (InconsistentAdmissibilityError, InvalidArgumentError,
                                 InvalidScaleError, NotAdmissibleError)
from lizshear.numerics import Grid1D, LogSymmetricGrid, SampledField2D, fourier_at, quad
from lizshear.shearlet import (CoefficientArray, GroupElement, ParamGrid, admissibility_constant,
                               analyze_direct, analyze_factorized, analyze_spectral,
                               analyze_spectral_at, builtin_admissible_vector,
                               coefficient_seminorm, complex_admissible_vector, group_product,
                               rep_apply, seminorm_levels, seminorm_profile,
                               zero_admissible_vector)
from lizshear.testfn import builtin_chi1, gaussian1d, gaussian2d, gaussian_dx2d, tensor
from lizshear.wavelet import calderon_constant

PSI = builtin_admissible_vector()
SMALL = ParamGrid(Grid1D(-2, 2, 8), Grid1D(-2, 2, 8), Grid1D(-1.5, 1.5, 8), LogSymmetricGrid(0.25, 2.0, 4))

elements = st.builds(
    GroupElement,
    st.tuples(st.floats(-3, 3), st.floats(-3, 3)),
    st.floats(-3, 3),
    st.one_of(st.floats(0.1, 5), st.floats(-5, -0.1)))


def close(g, h, tol=1e-12):
    return np.allclose(g.as_tuple(), h.as_tuple(), rtol=tol, atol=tol)


# -- group ------------------------------------------------------------------

@given(elements)
def test_inverse(g):
    assert close(g * g.inverse(), GroupElement.identity())
    assert close(g.inverse() * g, GroupElement.identity())


def test_inverse_closed_form():
    g = GroupElement((0.7, -1.1), 0.9, -2.5)
    M = g.matrix
    want = (-np.linalg.solve(M, g.b), -abs(g.a) ** -0.5 * g.s, 1 / g.a)
    got = g.inverse()
    assert np.allclose(got.b, want[0], atol=1e-12) and got.s == pytest.approx(want[1]) and got.a == want[2]


@given(elements, elements, elements)
def test_associativity(g, h, k):
    assert close((g * h) * k, g * (h * k), 1e-10)


@given(elements, elements)
def test_product_matches_matrix_law(g, h):
    # the action x -> b + M x composes like the group law
    x = np.array([0.3, -0.8])
    act = lambda e, y: np.asarray(e.b) + e.matrix @ y
    assert np.allclose(act(group_product(g, h), x), act(g, act(h, x)), atol=1e-10)


def test_zero_scale_rejected():
    with pytest.raises(InvalidScaleError):
        GroupElement((0, 0), 0, 0.0)
    with pytest.raises(InvalidArgumentError):
        GroupElement((0, 0, 0), 0, 1.0)


# -- representation -------------------------------------------------------------

def _freq_energy(fn, b1, b2):
    g1 = Grid1D(-b1, b1, 2401)
    g2 = Grid1D(-b2, b2, 2401)
    v = np.abs(fn(g1.nodes[:, None], g2.nodes[None, :])) ** 2
    return float(quad(quad(v, g2), g1))


def test_representation_is_unitary():
    g = GroupElement((1, -1), 0.5, 2.0)
    atom = rep_apply(PSI, g)
    n0 = _freq_energy(PSI.freq, *PSI.bandwidth)
    n1 = _freq_energy(atom.freq, *atom.bandwidth)
    assert abs(np.sqrt(n1) - np.sqrt(n0)) <= 1e-7


@pytest.mark.parametrize("g", [GroupElement.identity(), GroupElement((0.3, -0.2), 0.4, 0.5)])
def test_frequency_evaluator_matches_space_evaluator(g, rng):
    atom = rep_apply(PSI, g)
    g1 = Grid1D.with_spacing(-atom.extent[0], atom.extent[0], 1 / (2.2 * atom.bandwidth[0]))
    g2 = Grid1D.with_spacing(-atom.extent[1], atom.extent[1], 1 / (2.2 * atom.bandwidth[1]))
    x1, x2 = np.meshgrid(g1.nodes, g2.nodes, indexing="ij")
    vals = atom.space(x1, x2)
    xi = rng.uniform(-1, 1, size=(5, 2)) * np.array(atom.bandwidth) * 0.5
    for k1, k2 in xi:
        F = fourier_at(fourier_at(vals, g2, np.array([k2]))[:, 0], g1, np.array([k1]))[0]
        assert abs(F - atom.freq(k1, k2)) <= 1e-7


@given(elements, elements, st.floats(-2, 2), st.floats(-6, 6))
def test_representation_is_a_homomorphism(g, h, k1, k2):
    # F(pi(g) phi)(xi) = |a|^(3/4) exp(-2 pi i b.xi) F phi(M^t xi) with phi = pi(h) psi
    inner = rep_apply(PSI, h)
    e = g.matrix.T @ np.array([k1, k2])
    lhs = abs(g.a) ** 0.75 * np.exp(-2j * np.pi * np.dot(g.b, [k1, k2])) * inner.freq(*e)
    assert np.allclose(rep_apply(PSI, g * h).freq(k1, k2), lhs, atol=1e-12)


# -- admissibility ----------------------------------------------------------------

def test_admissibility_two_routes():
    r = admissibility_constant(PSI)
    assert r.value > 0 and np.isfinite(r.value)
    assert r.relative_difference <= 1e-6
    # factored form: Calderon constant of chi1 / |tau| times ||phi2||^2 = 1/sqrt(2)
    assert r.window_part == pytest.approx(2 ** -0.5, rel=1e-12)


def test_complex_generator_is_admissible():
    r = admissibility_constant(complex_admissible_vector())
    assert r.relative_difference <= 1e-6
    assert r.value > admissibility_constant(PSI).value


def test_zero_generator_not_admissible():
    with pytest.raises(NotAdmissibleError):
        admissibility_constant(zero_admissible_vector())


def test_inconsistent_admissibility_is_reported(monkeypatch):
    from lizshear import shearlet
    monkeypatch.setattr(shearlet, "calderon_constant", lambda p: 1.01 * calderon_constant(p))
    with pytest.raises(InconsistentAdmissibilityError):
        admissibility_constant(PSI)


@settings(max_examples=6)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_admissibility_homogeneity(c):
    base = admissibility_constant(PSI).value
    assert admissibility_constant(PSI.scaled(c)).value == pytest.approx(abs(c) ** 2 * base, rel=1e-10)


# -- analysis -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def spectral_gaussian():
    return analyze_spectral(gaussian2d(), PSI, SMALL)


def test_direct_matches_spectral(spectral_gaussian):
    D = analyze_direct(gaussian2d(), PSI, SMALL)
    assert np.max(np.abs(D.values - spectral_gaussian.values)) <= 1e-6


def test_factorized_matches_spectral(spectral_gaussian):
    F = analyze_factorized(gaussian2d(), PSI, SMALL)
    assert np.max(np.abs(F.values - spectral_gaussian.values)) <= 1e-5


def test_three_paths_at_identity():
    f = tensor(gaussian1d(), builtin_chi1())
    one = ParamGrid(Grid1D(0, 1, 2), Grid1D(0, 1, 2), Grid1D(0, 1, 2), LogSymmetricGrid(1.0, 2.0, 2))
    vals = [m(f, PSI, one).values[0, 0, 0, 2] for m in (analyze_spectral, analyze_direct, analyze_factorized)]
    assert max(abs(vals[0] - vals[1]), abs(vals[0] - vals[2]), abs(vals[1] - vals[2])) <= 1e-5
    assert abs(analyze_spectral_at(f, PSI, [GroupElement.identity()])[0] - vals[0]) <= 1e-14


def test_conjugate_symmetry(spectral_gaussian):
    # real even f and real even psi: S f(-b, s, a) = conj S f(b, s, a)
    c = spectral_gaussian.values
    assert np.max(np.abs(c[::-1, ::-1] - np.conj(c))) <= 1e-8


def test_threads_do_not_change_results(spectral_gaussian):
    assert np.array_equal(analyze_spectral(gaussian2d(), PSI, SMALL, threads=3).values,
                          spectral_gaussian.values)


def test_complex_generator_paths_agree():
    g = ParamGrid(Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), LogSymmetricGrid(0.5, 1.0, 2))
    psi = complex_admissible_vector()
    S = analyze_spectral(gaussian_dx2d(), psi, g).values
    D = analyze_direct(gaussian_dx2d(), psi, g).values
    assert np.max(np.abs(S - D)) <= 1e-6


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_translation_covariance(i, j):
    # S(T_c f)(b, s, a) = S f(b - c, s, a) on lattice shifts
    g = ParamGrid(Grid1D(-3, 3, 13), Grid1D(-3, 3, 13), Grid1D(-0.5, 0.5, 2), LogSymmetricGrid(0.5, 1.0, 2))
    c = (0.5 * i, 0.5 * j)
    base = analyze_spectral(gaussian_dx2d(), PSI, g).values
    moved = analyze_spectral(gaussian_dx2d().translated(c), PSI, g).values
    sl = lambda k: slice(max(k, 0), 13 + min(k, 0))
    sr = lambda k: slice(max(-k, 0), 13 + min(-k, 0))
    assert np.allclose(moved[sl(i), sl(j)], base[sr(i), sr(j)], atol=1e-10)


@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_analysis_is_linear(p, q):
    g = ParamGrid(Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), LogSymmetricGrid(0.5, 1.0, 2))
    f, h = gaussian2d(), gaussian_dx2d()
    lhs = analyze_spectral(f.scaled(p) + h.scaled(q), PSI, g).values
    rhs = p * analyze_spectral(f, PSI, g).values + q * analyze_spectral(h, PSI, g).values
    assert np.allclose(lhs, rhs, atol=1e-12)


# -- grids and seminorms --------------------------------------------------------------

def test_param_grid_default_shape():
    g = ParamGrid.default()
    assert g.shape == (33, 33, 17, 32) and g.size == 33 * 33 * 17 * 32
    assert g.haar_weights.shape == g.shape
    assert ParamGrid.from_spec((4, 33), (3, 17), (0.05, 4, 16)) == g


def test_coarsening_is_nested():
    g = ParamGrid.default()
    c = g.coarsened()
    assert c.shape == (17, 17, 9, 12)
    assert np.allclose(g.a_grid.positive_nodes[::3], c.a_grid.positive_nodes)
    with pytest.raises(InvalidArgumentError):
        g.coarsened(b_factor=5)


def test_coefficient_shape_validated():
    with pytest.raises(InvalidArgumentError):
        CoefficientArray(SMALL, np.zeros((2, 2, 2, 2)))


def test_seminorm_weights():
    g = ParamGrid(Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), Grid1D(-1, 1, 3), LogSymmetricGrid(0.5, 2.0, 2))
    v = np.zeros(g.shape)
    v[2, 0, 1, 3] = 1.0  # b = (1, -1), s = 0, a = 2
    c = CoefficientArray(g, v)
    assert coefficient_seminorm(c, 0, 0, 0, 0) == pytest.approx(2.0)
    assert coefficient_seminorm(c, 2, 2, 0, 1) == pytest.approx(2 * 2 * 2.5)


def test_seminorm_levels_are_nested():
    levels = seminorm_levels()
    for small, big in zip(levels, levels[1:]):
        for a, b in ((small.b1_grid, big.b1_grid), (small.s_grid, big.s_grid)):
            assert set(np.round(a.nodes, 9)) <= set(np.round(b.nodes, 9))
        assert set(np.round(small.a_nodes, 9)) <= set(np.round(big.a_nodes, 9))
    assert levels[-1].a_grid.a_min == pytest.approx(1e-2) and levels[-1].b1_grid.max == 8


def test_seminorm_order_validation():
    with pytest.raises(InvalidArgumentError):
        seminorm_profile(gaussian2d(), PSI, orders=[(1, 2, 3)])
