"""Exception types raised across the package."""


class HubtomoError(Exception):
    """Base class for all errors raised by hubtomo."""


class ParameterError(HubtomoError, ValueError):
    """An argument is outside its documented domain."""


class GraphFormatError(HubtomoError, ValueError):
    """An edge-list file or event log is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DisconnectedError(HubtomoError, ValueError):
    """A connected graph was required.

    ``vertex`` names one vertex that cannot be reached from the start vertex.
    """

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class StructureError(HubtomoError, ValueError):
    """Inconsistent structure: bad path, mismatched dimensions, broken matching."""


class DominationError(HubtomoError, ValueError):
    """A matching is not maximal, so its edges do not dominate the line graph."""

    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class InvalidHubError(HubtomoError, ValueError):
    """A hub set failed connected-dominating-set certification."""


class EventError(HubtomoError, ValueError):
    """A dynamic insert/delete event cannot be applied to the current graph."""


class RecoveryError(HubtomoError, RuntimeError):
    """A sparse solver could not make progress or diverged."""
