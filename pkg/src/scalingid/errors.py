"""Exception hierarchy shared by all modules."""


class ScalingIdError(Exception):
    """Base class for every error raised by this package."""


class GraphError(ScalingIdError, ValueError):
    """Malformed graph input (bad labels, loops, duplicate edges)."""


class GraphParseError(GraphError):
    pass


class NotStronglyConnected(ScalingIdError):
    def __init__(self, graph=None, message="graph is not strongly connected"):
        super().__init__(message)
        self.graph = graph


class ParameterMismatch(ScalingIdError, ValueError):
    pass


class NoExchangeWith(ScalingIdError, ValueError):
    def __init__(self, vertex):
        super().__init__(f"graph has no exchange with vertex {vertex}")
        self.vertex = vertex


class NoSuchEdge(ScalingIdError, ValueError):
    pass


class UnknownVertex(ScalingIdError, ValueError):
    pass


class OverlapViolation(ScalingIdError, ValueError):
    pass


class UnsupportedSize(ScalingIdError, ValueError):
    pass


class OracleDisagreement(ScalingIdError, AssertionError):
    """The rank criterion and an independent check disagreed; indicates a bug."""
