"""Exception hierarchy shared across the package.

Every error raised by the public API derives from :class:`DiagresError`,
so callers can catch one base class at the CLI boundary.
"""


class DiagresError(Exception):
    """Base class for all package errors."""


# numeric ------------------------------------------------------------------

class NonPrime(DiagresError):
    """A prime argument was required but the value is not prime."""


class PrimeTooSmall(DiagresError):
    """The balanced digit system needs p >= 5."""


# polyring -----------------------------------------------------------------

class RingMismatch(DiagresError):
    """Operands live over different coefficient rings."""


class NonIntegralCoefficient(DiagresError):
    """A closed-form coefficient failed to be an integer."""


class NotInS(DiagresError):
    """The requested index is outside the admissible set for the characteristic."""


class NonUnit(DiagresError):
    """A scalar expected to be invertible in the coefficient field is not."""


# pfaffian -----------------------------------------------------------------

class OddSize(DiagresError):
    """Operation requires an even-sized alternating matrix."""


class IndexOutOfRange(DiagresError):
    """Row/column index outside the matrix."""


class SizeMismatch(DiagresError):
    """Block sizes of the supplied matrices are incompatible."""


# resolver -----------------------------------------------------------------

class NotInfinite(DiagresError):
    """Construction only exists when the projective dimension is infinite."""


class CritFailed(DiagresError):
    """The certifying matrix identity did not hold; construction aborted."""


# finitepd -----------------------------------------------------------------

class NotFinite(DiagresError):
    """Construction only exists when the projective dimension is finite."""


class OutOfRange(DiagresError):
    """A numeric argument lies outside the domain of the construction."""


class ConstructionFailed(DiagresError):
    """No certified finite resolution could be produced."""


class ShapeNotFound(DiagresError):
    """No syzygy of the requested divisibility shape exists."""


# frobenius ----------------------------------------------------------------

class NotCoprime(DiagresError):
    """Arguments were required to be coprime."""


class Unsupported(DiagresError):
    """The requested parameter range is outside the implemented criterion."""


class ConditionFails(DiagresError):
    """The hypothesis of the requested construction does not hold."""


class Divisible(DiagresError):
    """An argument was required to be coprime to the exponent n."""


# oracle -------------------------------------------------------------------

class CutoffExceeded(DiagresError):
    """A graded computation needed degrees beyond the configured cutoff."""


class Inconclusive(DiagresError):
    """The bounded probe could neither certify nor give structured evidence."""
