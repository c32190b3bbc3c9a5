"""Exception hierarchy shared by all modules."""


class HinfMatchError(Exception):
    """Base class for errors raised by hinfmatch."""


class OrderMismatchError(HinfMatchError, ValueError):
    """Two truncated series of different orders were combined."""


class SeriesDomainError(HinfMatchError, ValueError):
    """A series operation was applied outside its domain (e.g. 1/f with f(0) = 0)."""


class PoleError(HinfMatchError, ZeroDivisionError):
    """A rational function was evaluated at (or numerically at) a pole."""


class LensDomainError(HinfMatchError, ValueError):
    """A point lies outside the domain of a conformal map."""


class InstanceValidationError(HinfMatchError, ValueError):
    """Problem data violates stability or boundary non-vanishing."""


class UnsupportedStructureError(HinfMatchError):
    """The zero structure of ``b`` is outside the supported cases."""


class DegenerateInstanceError(HinfMatchError):
    """The instance admits a constant matched entry (or has nothing to match)."""


class NotAtBoundaryError(HinfMatchError):
    """Inner-function recovery requested away from the feasibility boundary."""
