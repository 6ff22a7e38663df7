"""Exception hierarchy for the specfake package.

Every error raised on a domain-level failure (bad input data, failed
training, corrupt model file) derives from SpecfakeError so callers and
the CLI can distinguish them from programming errors.
"""


class SpecfakeError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionError(SpecfakeError):
    """An array has the wrong rank, shape, or an unsupported size."""


class ParameterError(SpecfakeError):
    """A configuration value is out of its valid range."""


class DegenerateImageError(SpecfakeError):
    """An image carries no usable spectral content (e.g. constant zero)."""


class TrainingError(SpecfakeError):
    """An optimizer failed to reach its convergence criterion."""


class ModelIntegrityError(SpecfakeError):
    """A model file is malformed or internally inconsistent."""


class DataError(SpecfakeError):
    """A manifest, cache, or result file is malformed or inconsistent."""
