"""Exception types shared across the package."""


class RelaycastError(Exception):
    """Base class for all package-specific errors."""


class InvalidDegreeError(RelaycastError, ValueError):
    """Requested per-user relay degree is outside [1, num_relays]."""


class InvalidUserError(RelaycastError, ValueError):
    """A user index is outside [1, num_users]."""


class TopologyFormatError(RelaycastError, ValueError):
    """A topology file is malformed or violates a structural invariant."""


class UnsupportedMemoryError(RelaycastError, ValueError):
    """Cache size does not give an integer replication parameter."""


class InvalidCapacityError(RelaycastError, ValueError):
    """A link capacity is zero or negative."""


class UnsupportedTopologyError(RelaycastError, ValueError):
    """A baseline scheme requires a uniform-degree topology."""


class MalformedProblemError(RelaycastError, ValueError):
    """An LP has inconsistent dimensions or non-finite coefficients."""


class InfeasibleRoutingError(RelaycastError, RuntimeError):
    """No routing allocation exists (or the solver reported none)."""


class NumericalError(RelaycastError, RuntimeError):
    """A solver result failed an internal consistency check."""
