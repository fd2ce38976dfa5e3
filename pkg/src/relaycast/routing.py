"""Share-routing LPs and the load metrics derived from an allocation.

Each multicast message is cut into per-relay shares; ``shares[(group, h)]``
is the fraction of that message carried over the server link to relay h.
A user can decode a message when the shares reaching it through its own
relays sum to at least one full message.  Two epigraph LPs are built over
these shares: minimize the worst per-relay load (identical capacities),
and minimize the worst link time (fronthaul and edge capacities differ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from relaycast.errors import (
    InfeasibleRoutingError,
    InvalidCapacityError,
    NumericalError,
)
from relaycast.placement import Group, PlacementConfig
from relaycast.simplex import FEAS_TOL, LpProblem, LpSolution, solve, solve_exact
from relaycast.topology import Topology, relays_of_group


@dataclass
class RoutingAllocation:
    """Map (group, relay) -> share fraction in [0, 1].

    ``enforce_structural`` marks whether shares must vanish on relays that
    serve no user of the group; baseline schemes that ship a symbol to every
    relay construct allocations with the flag off.
    """

    shares: dict[tuple[Group, int], float] = field(default_factory=dict)
    enforce_structural: bool = True

    def share(self, group: Group, relay: int) -> float:
        return self.shares.get((group, relay), 0.0)


@dataclass
class LoadReport:
    """Per-link loads in message units plus the two link times.

    One message unit is F / C(K, t) bits; dividing a load by C(K, t) gives
    the same quantity in units of whole files.
    """

    relay_loads: list[float]
    edge_loads: dict[tuple[int, int], float]
    fronthaul_time: float
    edge_time: float
    total_time: float
    num_subfiles: int

    @property
    def max_relay_load(self) -> float:
        return max(self.relay_loads) if self.relay_loads else 0.0

    @property
    def max_edge_load(self) -> float:
        return max(self.edge_loads.values()) if self.edge_loads else 0.0

    @property
    def max_relay_load_file_units(self) -> float:
        return self.max_relay_load / self.num_subfiles


@dataclass
class RoutingLp:
    """An LP plus the bookkeeping to map solver variables back to shares."""

    problem: LpProblem
    variables: list[tuple[Group, int]]
    topology: Topology
    groups: list[Group]
    objective_kind: str  # "max_link_load" | "delivery_time"


def _validate_groups(topology: Topology, groups) -> list[frozenset[int]]:
    if not groups:
        raise InfeasibleRoutingError("no multicast groups to route")
    supports = []
    for group in groups:
        support = relays_of_group(topology, group)
        if not support:
            raise InfeasibleRoutingError(f"group {group} reaches no relay")
        supports.append(support)
    return supports


def _share_variables(groups, supports):
    variables = []
    index = {}
    for group, support in zip(groups, supports):
        for h in sorted(support):
            index[(group, h)] = len(variables)
            variables.append((group, h))
    return variables, index


def _coverage_rows(topology, groups, index, nvars):
    rows = []
    for group in groups:
        for k in group:
            coefs = [0.0] * nvars
            for h in topology.relays_of_user(k):
                coefs[index[(group, h)]] = 1.0
            rows.append((coefs, ">=", 1.0))
    return rows


def build_maxlink_lp(
    topology: Topology, groups, initial_loads=None
) -> RoutingLp:
    """Epigraph LP: minimize z >= (load of relay h) + initial_loads[h].

    Shares for relays outside a group's support are never created; the
    variable vector is the concatenated per-group supports plus z last.
    """
    groups = [tuple(g) for g in groups]
    supports = _validate_groups(topology, groups)
    H = topology.num_relays
    if initial_loads is None:
        initial_loads = [0.0] * H
    initial_loads = [float(v) for v in initial_loads]
    if len(initial_loads) != H:
        raise ValueError(f"initial_loads must have length {H}")
    if any(v < 0 for v in initial_loads):
        raise ValueError("initial_loads must be nonnegative")

    variables, index = _share_variables(groups, supports)
    nvars = len(variables) + 1
    z = nvars - 1

    rows = []
    for h in range(1, H + 1):
        coefs = [0.0] * nvars
        for group, support in zip(groups, supports):
            if h in support:
                coefs[index[(group, h)]] = 1.0
        coefs[z] = -1.0
        rows.append((coefs, "<=", -initial_loads[h - 1]))
    rows.extend(_coverage_rows(topology, groups, index, nvars))

    objective = [0.0] * nvars
    objective[z] = 1.0
    bounds = [(0.0, 1.0)] * len(variables) + [(0.0, None)]
    problem = LpProblem(objective=objective, constraints=rows, bounds=bounds)
    return RoutingLp(problem, variables, topology, groups, "max_link_load")


def build_delivery_time_lp(
    topology: Topology, groups, placement: PlacementConfig
) -> RoutingLp:
    """Epigraph LP in channel uses: z bounds every fronthaul and edge time."""
    if topology.fronthaul_capacity <= 0 or topology.edge_capacity <= 0:
        raise InvalidCapacityError("capacities must be positive")
    groups = [tuple(g) for g in groups]
    supports = _validate_groups(topology, groups)
    H = topology.num_relays
    unit = float(placement.message_size_bits)

    variables, index = _share_variables(groups, supports)
    nvars = len(variables) + 1
    z = nvars - 1

    rows = []
    front = unit / topology.fronthaul_capacity
    for h in range(1, H + 1):
        coefs = [0.0] * nvars
        for group, support in zip(groups, supports):
            if h in support:
                coefs[index[(group, h)]] = front
        coefs[z] = -1.0
        rows.append((coefs, "<=", 0.0))
    edge = unit / topology.edge_capacity
    for h in range(1, H + 1):
        for k in sorted(topology.users_of_relay(h)):
            coefs = [0.0] * nvars
            for group, support in zip(groups, supports):
                if k in group and h in support:
                    coefs[index[(group, h)]] = edge
            coefs[z] = -1.0
            rows.append((coefs, "<=", 0.0))
    rows.extend(_coverage_rows(topology, groups, index, nvars))

    objective = [0.0] * nvars
    objective[z] = 1.0
    bounds = [(0.0, 1.0)] * len(variables) + [(0.0, None)]
    problem = LpProblem(objective=objective, constraints=rows, bounds=bounds)
    return RoutingLp(problem, variables, topology, groups, "delivery_time")


def allocation_from_solution(
    routing_lp: RoutingLp, solution: LpSolution, tol: float = FEAS_TOL
) -> RoutingAllocation:
    """Map solver variables back to (group, relay) shares, clamped to [0, 1]."""
    if solution.status != "optimal":
        raise InfeasibleRoutingError(
            f"no allocation: solver status {solution.status}"
        )
    shares = {}
    for key, value in zip(routing_lp.variables, solution.x):
        value = float(value)
        if value < -tol or value > 1.0 + tol:
            raise NumericalError(f"share {key} = {value} outside [0, 1]")
        shares[key] = min(1.0, max(0.0, value))
    return RoutingAllocation(shares=shares, enforce_structural=True)


def compute_loads(
    topology: Topology, groups, allocation: RoutingAllocation,
    placement: PlacementConfig,
) -> LoadReport:
    """Relay and edge loads (message units) and the two link times."""
    groups = [tuple(g) for g in groups]
    relay_loads = [0.0] * topology.num_relays
    edge_loads: dict[tuple[int, int], float] = {}
    for h in range(1, topology.num_relays + 1):
        for k in sorted(topology.users_of_relay(h)):
            edge_loads[(h, k)] = 0.0
    for (group, h), y in allocation.shares.items():
        relay_loads[h - 1] += y
        users = topology.users_of_relay(h)
        for k in group:
            if k in users:
                edge_loads[(h, k)] += y
    unit = float(placement.message_size_bits)
    fronthaul_time = max(relay_loads) * unit / topology.fronthaul_capacity
    max_edge = max(edge_loads.values()) if edge_loads else 0.0
    edge_time = max_edge * unit / topology.edge_capacity
    return LoadReport(
        relay_loads=relay_loads,
        edge_loads=edge_loads,
        fronthaul_time=fronthaul_time,
        edge_time=edge_time,
        total_time=max(fronthaul_time, edge_time),
        num_subfiles=placement.num_subfiles,
    )


def check_feasible(
    topology: Topology, groups, allocation: RoutingAllocation,
    tol: float = FEAS_TOL,
):
    """Check decodability coverage, box bounds and (if enforced) structural
    zeros; returns (ok, violations) with one entry per failed condition."""
    groups = [tuple(g) for g in groups]
    violations = []
    for group in groups:
        for k in group:
            total = sum(
                allocation.share(group, h) for h in topology.relays_of_user(k)
            )
            if total < 1.0 - tol:
                violations.append(("coverage", group, k, total))
    for (group, h), y in allocation.shares.items():
        if y < -tol or y > 1.0 + tol:
            violations.append(("bounds", group, h, y))
    if allocation.enforce_structural:
        support_cache: dict[Group, frozenset[int]] = {}
        for (group, h), y in allocation.shares.items():
            if group not in support_cache:
                support_cache[group] = relays_of_group(topology, group)
            if h not in support_cache[group] and abs(y) > tol:
                violations.append(("structural", group, h, y))
    return not violations, violations


def solve_max_link_load(
    topology: Topology, groups, initial_loads=None, exact: bool = False
):
    """Build, solve, and extract; returns (objective, allocation, solution)."""
    routing_lp = build_maxlink_lp(topology, groups, initial_loads)
    solution = solve_exact(routing_lp.problem) if exact else solve(routing_lp.problem)
    if solution.status != "optimal":
        raise InfeasibleRoutingError(f"solver status {solution.status}")
    allocation = allocation_from_solution(routing_lp, solution)
    return solution.objective, allocation, solution


def solve_delivery_time(
    topology: Topology, groups, placement: PlacementConfig, exact: bool = False
):
    """As :func:`solve_max_link_load` but for the channel-use objective."""
    routing_lp = build_delivery_time_lp(topology, groups, placement)
    solution = solve_exact(routing_lp.problem) if exact else solve(routing_lp.problem)
    if solution.status != "optimal":
        raise InfeasibleRoutingError(f"solver status {solution.status}")
    allocation = allocation_from_solution(routing_lp, solution)
    return solution.objective, allocation, solution


def default_placement(num_users: int, replication: int, file_size_bits: int = 1):
    """Library of K files, cache sized for the given replication."""
    return PlacementConfig.from_replication(
        num_files=num_users,
        num_users=num_users,
        replication=replication,
        file_size_bits=file_size_bits,
    )


def groups_per_user(num_users: int, replication: int) -> int:
    """How many multicast groups contain a fixed user: C(K-1, t)."""
    return comb(num_users - 1, replication)
