"""Exception types shared across the package.

Two failure families are kept apart because callers react to them
differently: bad input data can usually be repaired upstream, while a
structural problem (reducible chain, undefined transition rows) means the
requested computation is not meaningful for this matrix at all.
"""


class RespchainError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RespchainError):
    """Input violates a documented precondition (bad state, bad shape, bad file)."""


class StructuralError(RespchainError):
    """The chain's structure rules out the requested computation.

    Raised for reducible or periodic matrices where a stationary
    distribution is requested, and for operations on rows that were never
    observed and therefore have no defined distribution.
    """
