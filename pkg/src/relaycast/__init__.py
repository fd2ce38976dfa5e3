"""Coded-caching delivery planning and simulation for two-hop relay networks."""

__version__ = "0.1.0"

from relaycast.placement import PlacementConfig, multicast_groups
from relaycast.routing import (
    RoutingAllocation,
    build_delivery_time_lp,
    build_maxlink_lp,
    check_feasible,
    compute_loads,
    solve_delivery_time,
    solve_max_link_load,
)
from relaycast.simplex import LpProblem, LpSolution, solve, solve_exact
from relaycast.topology import Topology, generate_combination, generate_random_uniform

__all__ = [
    "__version__",
    "PlacementConfig",
    "multicast_groups",
    "RoutingAllocation",
    "build_delivery_time_lp",
    "build_maxlink_lp",
    "check_feasible",
    "compute_loads",
    "solve_delivery_time",
    "solve_max_link_load",
    "LpProblem",
    "LpSolution",
    "solve",
    "solve_exact",
    "Topology",
    "generate_combination",
    "generate_random_uniform",
]
