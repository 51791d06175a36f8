"""Exceptions raised by effnet-mini"""


class EffNetMiniError(Exception):
    """Base class for all effnet-mini errors"""


class ConfigurationError(EffNetMiniError, ValueError):
    """A configuration value is invalid or inconsistent"""


class ShapeError(EffNetMiniError, ValueError):
    """Tensor shapes do not agree"""


class UsageError(EffNetMiniError, RuntimeError):
    """An API was called in a way its contract does not allow"""


class DataError(EffNetMiniError, ValueError):
    """Data on disk is missing, malformed or mislabeled, or an output file cannot be written"""


class NumericalError(EffNetMiniError, ArithmeticError):
    """A computation produced NaN or Inf"""


class CheckpointError(EffNetMiniError):
    """A checkpoint file cannot be read or does not match its configuration"""
