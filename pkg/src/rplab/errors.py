"""Exception taxonomy for the lattice covariance laboratory.

Every error raised by the package derives from :class:`RPLabError`, so callers
can catch one type.  The concrete subclasses name the *mathematical* reason a
computation cannot proceed, not the code path that noticed it.
"""


class RPLabError(Exception):
    """Base class for all errors raised by this package."""


class GridMismatch(RPLabError):
    """An operation was asked to run on a grid whose axis layout does not
    support it (wrong axis kind, axis index out of range, incompatible
    extents, or more non-compact axes than the construction can resolve)."""


class SupportError(RPLabError):
    """A test function violates a required support constraint, e.g. it is not
    supported on the positive half of the reflection axis."""


class NotACovariance(RPLabError):
    """A matrix or kernel that must behave as a covariance fails a structural
    requirement (symmetry, positive Gram, ...) beyond tolerance."""


class HermitianPartNotPositive(RPLabError):
    """The real part of a symbol, or the Hermitian part of an operator, is not
    positive where positivity is required."""


class OracleTooLarge(RPLabError):
    """A dense matrix requested for exact checking would exceed the size cap;
    the computation refuses rather than silently thrash memory."""


class NoDecay(RPLabError):
    """A kernel does not decay enough inside the available window for an image
    sum / periodization to be trustworthy at the requested tolerance."""


class NoSpatialAxis(RPLabError):
    """Quantization was requested on a grid with no transverse axis to label
    the momentum sectors of the transfer operator."""


class ZeroSpace(RPLabError):
    """The positive-time Gram matrix of a momentum sector has numerical rank
    zero: the quotient Hilbert space is empty."""


class HamiltonianUndefined(RPLabError):
    """The unit-step transfer operator of a sector has no positive leading
    eigenvalue, so minus-log of its spectrum defines no energy."""
