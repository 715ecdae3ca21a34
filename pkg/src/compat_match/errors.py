"""Exception types raised by compat_match."""


class CompatMatchError(Exception):
    """Base class for every error raised by this package."""


class DegenerateSegmentError(CompatMatchError, ValueError):
    """A segment was given with identical endpoints."""


class CoincidentPointError(CompatMatchError, ValueError):
    """Two points that must be distinct coincide."""


class GeneralPositionError(CompatMatchError, ValueError):
    """The operation needs points with no three collinear."""


class IncompatibleMatchingError(CompatMatchError, ValueError):
    def __init__(self, message, pair=None, other=None):
        super().__init__(message)
        self.pair = pair
        self.other = other


class NotMaximalError(CompatMatchError, ValueError):
    """The matching can still be extended by a compatible edge."""


class GraphClassError(CompatMatchError, ValueError):
    pass


class ParameterRangeError(CompatMatchError, ValueError):
    pass


class BudgetExceededError(CompatMatchError):
    """Search exhausted its node budget before finishing."""
    def __init__(self, message, nodes=0, partial=None):
        super().__init__(message)
        self.nodes = nodes
        self.partial = partial


class CertificateError(CompatMatchError):
    """A generated construction failed re-verification of its claims."""


class DocumentError(CompatMatchError, ValueError):
    """An instance document could not be parsed."""
