"""Exception hierarchy shared by all turnroute modules."""

from __future__ import annotations


class RoutingError(Exception):
    """Base class for every error raised by turnroute."""


class NetworkError(RoutingError):
    """A road network violates a structural invariant."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OverlappingRoads(NetworkError):
    pass


class OrphanNode(NetworkError):
    pass


class NonPositiveLength(NetworkError):
    pass


class DanglingNodeRef(NetworkError):
    pass


class InvalidTurnCost(NetworkError):
    pass


class NetworkSyntaxError(NetworkError):
    pass


class InvalidRoute(RoutingError):
    pass


class NodeNotOnRoad(RoutingError):
    pass


class Unreachable(RoutingError):
    """No route exists from the source to the target."""


class EpsilonNegative(RoutingError, ValueError):
    pass


class UnsupportedCostTable(RoutingError):
    """The algorithm requires uniform turn costs."""


class TooLarge(RoutingError):
    """Exhaustive enumeration refused: network exceeds the size guard."""


class EmptySet(RoutingError):
    pass


class TauTooSmall(RoutingError, ValueError):
    pass


class IncompatibleTemplate(RoutingError):
    pass
