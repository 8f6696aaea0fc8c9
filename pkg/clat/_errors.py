"""Exceptions raised by clat

The command line maps them to exit codes:
`SchemaError`, `DataFormatError` and `LatentSpaceError` exit with 3,
`NumericalError` exits with 4.
"""


class SchemaError(ValueError):
    """A multi-condition or record does not conform to the condition schema"""


class DataFormatError(ValueError):
    """A file on disk is malformed or has unexpected shapes"""


class LatentSpaceError(ValueError):
    """A latent vector was passed to an operation for another space"""


class NumericalError(ArithmeticError):
    """A factorization or optimization failed numerically"""
