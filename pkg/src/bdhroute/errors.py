"""Exception hierarchy for the routing package."""


class RoutingError(Exception):
    """Base class for every error raised by bdhroute."""


class InvalidInstance(RoutingError, ValueError):
    """Network or demand data breaks a structural invariant."""


class NoSuchEdge(RoutingError, ValueError):
    pass


class NotSimple(RoutingError, ValueError):
    pass


class EndpointMismatch(RoutingError, ValueError):
    pass


class UnknownDemand(RoutingError, KeyError):
    pass


class ZeroResidual(RoutingError, ValueError):
    pass


class InsufficientResidual(RoutingError, ValueError):
    pass


class TooLarge(RoutingError):
    """The brute-force oracle refused an instance above its size guard."""


class GenerationFailure(RoutingError):
    """The instance generator exhausted its sampling budget."""


class FormatError(RoutingError, ValueError):
    """A textual instance or solution file could not be parsed."""
