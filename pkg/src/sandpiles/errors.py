"""Exception types shared across the package.

Everything raised for a bad argument or unusable configuration derives from
``ValueError`` so that callers (and the CLI) can treat "the inputs were wrong"
uniformly without masking genuine bugs, which still surface as ordinary
exceptions.
"""

from __future__ import annotations


class InvalidParamsError(ValueError):
    """A model/experiment parameter is outside its documented range."""


class NotPrimeError(ValueError):
    """A modulus that must be prime is not."""


class InvalidShapeError(ValueError):
    """A matrix or index collection has an impossible shape."""


class DimensionMismatchError(ValueError):
    """Two objects that must agree in dimension do not."""


class SingularBlockError(ValueError):
    """A block that must be invertible over the working field is singular."""


class DisconnectedError(ValueError):
    """An operation defined only for connected graphs got a disconnected one."""


class TooSmallError(ValueError):
    """A graph is too small for the requested trimming construction."""


class EmptyConditioningEventError(ValueError):
    """A conditional expectation was requested on a probability-zero event."""


class OutOfSupportError(ValueError):
    """A point mass was requested outside the distribution's support."""


class OutOfRangeError(ValueError):
    """An approximation was requested outside its validity window."""


class GuardExceededError(ValueError):
    """A configured safety limit (e.g. exact-arithmetic size cap) was exceeded."""


class EmptyInputError(ValueError):
    """An aggregate statistic was requested for an empty sample."""
