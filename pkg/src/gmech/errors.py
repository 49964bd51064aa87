"""Exception hierarchy shared by all modules.

Each class carries the process exit code the command line uses for it.
"""


class MechanismError(Exception):
    exit_code = 1


class MalformedInputError(MechanismError, ValueError):
    """Input that cannot be parsed or violates a structural rule."""

    exit_code = 2


class InvalidQueryError(MechanismError, ValueError):
    """A query that makes no sense, e.g. converting a commodity to itself."""

    exit_code = 2


class DomainError(MechanismError, ValueError):
    """Numeric input outside the domain (nonpositive market state, offer off the graph)."""

    exit_code = 3


class InfeasibleError(MechanismError):
    """The model admits no answer: a disconnected graph, a zero aggregate edge."""

    exit_code = 3


class ResourceLimitError(MechanismError):
    """Request exceeds the exhaustive-computation bounds."""

    exit_code = 2
