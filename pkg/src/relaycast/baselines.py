"""Reference delivery schemes expressed as share allocations.

Both require every user to reach the same number of relays L.  The erasure-
coded scheme ("mds") sends one symbol of 1/L of each message to every relay,
whether or not the relay serves an interested user.  The topology-aware
variant ("mgl") keeps the same symbol size but drops the symbols destined
for relays that serve nobody in the message's group.
"""
from __future__ import annotations

from relaycast.errors import UnsupportedTopologyError
from relaycast.routing import RoutingAllocation
from relaycast.topology import Topology, relays_of_group


def _uniform_degree(topology: Topology, degree: int | None) -> int:
    actual = topology.uniform_degree()
    if actual is None:
        raise UnsupportedTopologyError(
            "baseline schemes need every user connected to the same number of relays"
        )
    if degree is not None and degree != actual:
        raise UnsupportedTopologyError(
            f"stated degree {degree} does not match topology degree {actual}"
        )
    return actual


def mds_allocation(topology: Topology, groups, degree: int | None = None) -> RoutingAllocation:
    """1/L of every message on every relay (structural zeros deliberately
    violated, so the allocation is stored with that check disabled)."""
    L = _uniform_degree(topology, degree)
    share = 1.0 / L
    shares = {
        (tuple(group), h): share
        for group in groups
        for h in range(1, topology.num_relays + 1)
    }
    return RoutingAllocation(shares=shares, enforce_structural=False)


def mgl_allocation(topology: Topology, groups, degree: int | None = None) -> RoutingAllocation:
    """1/L of each message, but only on the relays serving its group."""
    L = _uniform_degree(topology, degree)
    share = 1.0 / L
    shares = {}
    for group in groups:
        group = tuple(group)
        for h in sorted(relays_of_group(topology, group)):
            shares[(group, h)] = share
    return RoutingAllocation(shares=shares, enforce_structural=True)
