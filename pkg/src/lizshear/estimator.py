"""scikit-learn style wrapper around analysis and reconstruction."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InvalidArgumentError
from .numerics import Grid1D, SampledField2D
from .shearlet import (CoefficientArray, ParamGrid, admissibility_constant, analyze_direct,
                       analyze_factorized, analyze_spectral, builtin_admissible_vector,
                       complex_admissible_vector)
from .synthesis import band_limited_field
from .testfn import AnalyticFunction2D, sampled_function

_GENERATORS = {"builtin": builtin_admissible_vector, "complex": complex_admissible_vector}
_METHODS = {"spectral": analyze_spectral, "direct": analyze_direct, "factorized": analyze_factorized}


class ShearletTransform(BaseEstimator, TransformerMixin):
    """Continuous shearlet coefficients of images on a fixed parameter lattice.

    Parameters
    ----------
    b_max, n_b : float, int
        Translations ``b1, b2`` on ``n_b`` nodes in ``[-b_max, b_max]``.
    s_max, n_s : float, int
        Shears on ``n_s`` nodes in ``[-s_max, s_max]``.
    a_min, a_max, n_a : float, float, int
        Scales ``+-a_min r^k`` with ``n_a`` nodes per sign up to ``a_max``.
    generator : {"builtin", "complex"}
        Admissible vector.
    method : {"spectral", "direct", "factorized"}
        Analysis path; all three agree to quadrature accuracy.
    extent : float
        Images are samples on ``[-extent, extent]^2`` (node count from the data).
    threads : int
        Worker threads for the analysis.

    Notes
    -----
    ``X`` is either an array ``(n_samples, n_x, n_y)`` of samples, with row
    index along ``x``, or a sequence of :class:`AnalyticFunction2D`.  Sampled
    images are treated as band-limited to the Nyquist box of their grid.
    ``transform`` returns complex coefficients flattened in ``(b1, b2, s, a)``
    C order, one row per sample.
    """

    def __init__(self, b_max=4.0, n_b=33, s_max=3.0, n_s=17, a_min=0.05, a_max=4.0, n_a=16,
                 generator="builtin", method="spectral", extent=4.0, threads=1):
        self.b_max = b_max
        self.n_b = n_b
        self.s_max = s_max
        self.n_s = n_s
        self.a_min = a_min
        self.a_max = a_max
        self.n_a = n_a
        self.generator = generator
        self.method = method
        self.extent = extent
        self.threads = threads

    # -- validation --------------------------------------------------------

    def _check_params(self):
        if self.generator not in _GENERATORS:
            raise InvalidArgumentError(f"generator must be one of {sorted(_GENERATORS)}")
        if self.method not in _METHODS:
            raise InvalidArgumentError(f"method must be one of {sorted(_METHODS)}")
        for name in ("b_max", "s_max", "a_min", "a_max", "extent"):
            v = getattr(self, name)
            if not (np.isscalar(v) and np.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be a positive number")
        for name in ("n_b", "n_s", "n_a"):
            v = getattr(self, name)
            if int(v) != v or v < 2:
                raise InvalidArgumentError(f"{name} must be an integer >= 2")
        if int(self.threads) != self.threads or self.threads < 1:
            raise InvalidArgumentError("threads must be an integer >= 1")
        return ParamGrid.from_spec((self.b_max, self.n_b), (self.s_max, self.n_s),
                                   (self.a_min, self.a_max, self.n_a))

    def _as_functions(self, X, fitting=False):
        if isinstance(X, AnalyticFunction2D):
            X = [X]
        if isinstance(X, (list, tuple)) and X and all(isinstance(f, AnalyticFunction2D) for f in X):
            return list(X), None
        arr = np.asarray(X)
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
            raise InvalidArgumentError("X must be numeric samples or AnalyticFunction2D objects")
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[0] == 0:
            raise InvalidArgumentError(f"X must have shape (n_samples, n_x, n_y), got {arr.shape}")
        if min(arr.shape[1:]) < 4:
            raise InvalidArgumentError("images need at least 4 nodes per axis")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError("X contains NaN or infinite values")
        if not fitting and getattr(self, "image_shape_", None) not in (None, arr.shape[1:]):
            raise InvalidArgumentError(
                f"images have shape {arr.shape[1:]}, estimator was fitted on {self.image_shape_}")
        xg = Grid1D(-float(self.extent), float(self.extent), arr.shape[1])
        yg = Grid1D(-float(self.extent), float(self.extent), arr.shape[2])
        return [sampled_function(SampledField2D(xg, yg, a)) for a in arr], (xg, yg)

    # -- estimator API -----------------------------------------------------

    def fit(self, X, y=None):
        """Validate parameters and inputs and fix the lattice and output grid."""
        grid = self._check_params()
        _, grids = self._as_functions(X, fitting=True)
        self.grid_ = grid
        self.psi_ = _GENERATORS[self.generator]()
        self.C_psi_ = admissibility_constant(self.psi_).value
        if grids is None:
            n = 2 * int(self.n_b) - 1
            grids = (Grid1D(-float(self.extent), float(self.extent), n),) * 2
            self.image_shape_ = None
        else:
            self.image_shape_ = (grids[0].n, grids[1].n)
        self.x_grid_, self.y_grid_ = grids
        self.n_features_out_ = grid.size
        return self

    def transform(self, X):
        """Coefficients as a complex array ``(n_samples, grid size)``."""
        check_is_fitted(self, "grid_")
        funcs, _ = self._as_functions(X)
        analyze = _METHODS[self.method]
        return np.stack([analyze(f, self.psi_, self.grid_, int(self.threads)).values.ravel()
                         for f in funcs])

    def inverse_transform(self, C):
        """``C_psi^{-1} S^t`` of each coefficient row, sampled on the fitted image grid."""
        check_is_fitted(self, "grid_")
        C = np.asarray(C)
        if C.ndim == 1:
            C = C[None]
        if C.ndim != 2 or C.shape[1] != self.grid_.size:
            raise InvalidArgumentError(
                f"coefficients must have shape (n_samples, {self.grid_.size}), got {C.shape}")
        out = []
        for row in C:
            coeffs = CoefficientArray(self.grid_, row.reshape(self.grid_.shape) / self.C_psi_)
            out.append(band_limited_field(coeffs, self.psi_, self.x_grid_, self.y_grid_).values)
        return np.stack(out)
