import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from lizshear.estimator import ShearletTransform
from lizshear.exceptions import InvalidArgumentError
from lizshear.numerics import Grid1D
from lizshear.shearlet import ParamGrid, analyze_spectral, builtin_admissible_vector
from lizshear.testfn import gaussian2d, gaussian_dx2d, lizorkin2d

SMALL = dict(b_max=2.0, n_b=5, s_max=1.0, n_s=3, a_min=0.5, a_max=1.0, n_a=2)


def samples(f, extent=4.0, n=33):
    g = Grid1D(-extent, extent, n)
    x1, x2 = np.meshgrid(g.nodes, g.nodes, indexing="ij")
    return f.space(x1, x2).real


def test_params_roundtrip():
    est = ShearletTransform(**SMALL, generator="complex")
    p = est.get_params()
    assert p["generator"] == "complex" and p["n_b"] == 5
    assert clone(est).get_params() == p
    est.set_params(method="direct")
    assert est.method == "direct"


def test_transform_shape_and_agreement_with_analysis():
    X = np.stack([samples(gaussian2d()), samples(gaussian_dx2d())])
    est = ShearletTransform(**SMALL).fit(X)
    C = est.transform(X)
    assert C.shape == (2, 5 * 5 * 3 * 4) and est.n_features_out_ == C.shape[1]
    ref = analyze_spectral(gaussian2d(), builtin_admissible_vector(), est.grid_).values.ravel()
    assert np.max(np.abs(C[0] - ref)) <= 1e-5 * np.abs(ref).max()


def test_analytic_inputs():
    est = ShearletTransform(**SMALL)
    C = est.fit_transform([gaussian2d()])
    grid = ParamGrid.from_spec((2.0, 5), (1.0, 3), (0.5, 1.0, 2))
    ref = analyze_spectral(gaussian2d(), builtin_admissible_vector(), grid).values.ravel()
    assert np.array_equal(C[0], ref)


@pytest.mark.parametrize("method", ["direct", "factorized"])
def test_methods_agree(method):
    spec = ShearletTransform(**SMALL).fit_transform([gaussian_dx2d()])
    other = ShearletTransform(**SMALL, method=method).fit_transform([gaussian_dx2d()])
    assert np.max(np.abs(spec - other)) <= 1e-5


def test_inverse_transform_reconstructs():
    X = samples(lizorkin2d(), extent=16.0, n=129)[None]
    est = ShearletTransform(extent=16.0).fit(X)
    rec = est.inverse_transform(est.transform(X))
    assert rec.shape == X.shape
    w = slice(48, 81)  # central |x| <= 4 window covered by the translation grid
    err = np.linalg.norm(rec[0][w, w] - X[0][w, w]) / np.linalg.norm(X[0][w, w])
    assert err <= 5e-2


def test_validation():
    X = samples(gaussian2d())[None]
    with pytest.raises(NotFittedError):
        ShearletTransform().transform(X)
    for bad in (dict(generator="x"), dict(method="x"), dict(n_b=1), dict(a_min=-1.0), dict(threads=0)):
        with pytest.raises(InvalidArgumentError):
            ShearletTransform(**bad).fit(X)
    est = ShearletTransform(**SMALL).fit(X)
    with pytest.raises(InvalidArgumentError):
        est.transform(np.zeros((1, 17, 17)))
    with pytest.raises(InvalidArgumentError):
        est.transform(np.full((1, 33, 33), np.nan))
    with pytest.raises(InvalidArgumentError):
        est.transform(np.zeros((1, 2, 3, 4, 5)))
    with pytest.raises(InvalidArgumentError):
        est.inverse_transform(np.zeros((1, 7)))


def test_pipeline_compatible():
    X = np.stack([samples(gaussian2d()), samples(gaussian_dx2d())])
    pipe = make_pipeline(ShearletTransform(**SMALL))
    assert pipe.fit_transform(X).shape == (2, 300)
