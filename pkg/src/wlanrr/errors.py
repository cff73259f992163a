"""Exception types shared across the library.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class WlanRRError(Exception):
    """Base class for library errors."""


class DomainError(WlanRRError, ValueError):
    """An input lies outside an operation's mathematical domain."""


class PreconditionError(WlanRRError, ValueError):
    """A structural precondition is violated (e.g. point not on the boundary)."""


class InfeasibleError(WlanRRError, RuntimeError):
    """An optimization problem has no feasible point or is unbounded."""
