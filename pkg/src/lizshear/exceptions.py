"""Exception hierarchy used across the package."""


class LizshearError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(LizshearError, ValueError):
    """Shape, length or value of an argument is not acceptable."""


class InvalidScaleError(InvalidArgumentError):
    """A scale parameter is zero (or non-positive where only R+ is allowed)."""


class CapabilityError(LizshearError):
    """The object lacks an evaluator or feature needed for the request."""


class NotAdmissibleError(LizshearError):
    """An admissibility integral is zero, infinite or numerically diverging."""


class NotInS0Error(LizshearError):
    """A function expected to have vanishing moments does not."""


class InconsistentAdmissibilityError(LizshearError):
    """Two quadratures of the same admissibility constant disagree."""


class OutOfRangeError(LizshearError):
    """A requested point lies outside the sampled domain."""


class InputFormatError(LizshearError):
    """An input file is missing, empty or does not follow its schema."""


class ConfigError(LizshearError):
    """A run configuration is malformed or violates its invariants."""
