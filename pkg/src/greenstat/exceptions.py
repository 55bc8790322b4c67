"""Exception types raised across the package."""


class GreenstatError(Exception):
    """Base class for all package errors."""


class ParameterError(GreenstatError, ValueError):
    """A parameter lies outside its admissible domain."""


class DegenerateSampleError(GreenstatError, ValueError):
    """A statistic is undefined for the given data (e.g. an all-zero sample)."""


class DegenerateCovarianceError(ParameterError):
    """A covariance matrix carries no usable scale (zero or singular where positive definite is required)."""


class EmptyConfidenceSetError(GreenstatError):
    """Test inversion retained no parameter value on the search grid."""


class CsvFormatError(GreenstatError, ValueError):
    """An input file could not be parsed as one- or two-column numeric CSV."""
