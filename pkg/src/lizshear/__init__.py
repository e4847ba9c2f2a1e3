"""Continuous shearlet analysis on Lizorkin test functions and distributions."""
from .distributions import (Combination, DerivativeOfFunction, Dirac, LineDelta,
                            LizorkinDistribution, Polynomial, SampledFunction,
                            SlowGrowthFunction4D, consistency_check, desingularized_shearlet,
                            distributional_shearlet, line_delta_decay)
from .estimator import ShearletTransform
from .exceptions import (CapabilityError, ConfigError, InconsistentAdmissibilityError,
                         InputFormatError, InvalidArgumentError, InvalidScaleError,
                         LizshearError, NotAdmissibleError, NotInS0Error, OutOfRangeError)
from .numerics import Grid1D, LogSymmetricGrid, SampledField2D, SampledSignal1D
from .radon import (affine_slices, polar_to_affine, radon_affine_direct, radon_affine_spectral,
                    radon_polar)
from .ridgelet import ridgelet_shearlet_check, ridgelet_transform
from .shearlet import (AdmissibleVector, CoefficientArray, GroupElement, ParamGrid,
                       admissibility_constant, analyze_direct, analyze_factorized,
                       analyze_spectral, builtin_admissible_vector, coefficient_seminorm,
                       complex_admissible_vector, group_product, seminorm_profile)
from .synthesis import (duality_check, reconstruct, synthesize, synthesize_spectral,
                        synthesized_function)
from .testfn import (AnalyticFunction1D, AnalyticFunction2D, antiderivative_s0, builtin2d,
                     builtin_chi1, moment, sampled_function)
from .wavelet import calderon_constant, wavelet_transform

__version__ = "0.1.0"
