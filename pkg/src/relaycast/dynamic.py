"""Grouped sequential approximation of the full routing LP.

Messages are shuffled into G batches; each batch is routed by a small
max-link LP whose per-relay loads start from the loads accumulated by the
batches already placed.  With one batch this is exactly the full LP; more
batches trade optimality for much smaller solves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from relaycast.errors import InfeasibleRoutingError
from relaycast.placement import Group, PlacementConfig
from relaycast.routing import (
    LoadReport,
    RoutingAllocation,
    allocation_from_solution,
    build_maxlink_lp,
    compute_loads,
    default_placement,
)
from relaycast.simplex import solve


@dataclass(frozen=True)
class GroupPartition:
    """Disjoint batches covering every multicast group.

    When G does not divide the message count n, the first
    n - G*floor(n/G) batches hold ceil(n/G) messages and the remaining
    batches hold one fewer, so batch sizes differ by at most one.
    """

    batches: tuple[tuple[Group, ...], ...]

    @property
    def num_batches(self) -> int:
        return len(self.batches)

    @property
    def max_batch_size(self) -> int:
        return max(len(b) for b in self.batches)


def partition_groups(all_groups, num_batches: int, seed: int) -> GroupPartition:
    """Seeded uniform shuffle, then the uneven split described above."""
    groups = [tuple(g) for g in all_groups]
    n = len(groups)
    if not (1 <= num_batches <= n):
        raise ValueError(f"num_batches {num_batches} outside [1, {n}]")
    rng = random.Random(seed)
    rng.shuffle(groups)
    g = -(-n // num_batches)  # ceil
    n_large = n - num_batches * (g - 1)
    sizes = [g] * n_large + [g - 1] * (num_batches - n_large)
    batches = []
    at = 0
    for size in sizes:
        batches.append(tuple(groups[at : at + size]))
        at += size
    return GroupPartition(batches=tuple(batches))


def batch_count_for_size(num_messages: int, batch_size: int) -> int:
    """Smallest G whose resulting max batch size ceil(n/G) is the target."""
    if not (1 <= batch_size <= num_messages):
        raise ValueError(f"batch_size {batch_size} outside [1, {num_messages}]")
    return -(-num_messages // batch_size)


@dataclass
class GroupedSolveResult:
    allocation: RoutingAllocation
    report: LoadReport
    partition: GroupPartition
    step_objectives: list[float]
    step_duals: list[list[float]]
    step_relay_loads: list[list[float]]
    objective: float


def solve_dynamic(
    topology,
    all_groups,
    num_batches: int,
    seed: int,
    placement: PlacementConfig | None = None,
) -> GroupedSolveResult:
    """Route batches sequentially, accumulating per-relay initial loads.

    The initial load of step i is the sum of the optimal per-relay loads of
    steps 1..i-1; the reported objective is the final worst relay load over
    all batches together.  Any infeasible step aborts with its step index.
    """
    partition = partition_groups(all_groups, num_batches, seed)
    H = topology.num_relays
    initial = [0.0] * H
    merged: dict = {}
    step_objectives = []
    step_duals = []
    step_relay_loads = []
    for i, batch in enumerate(partition.batches, start=1):
        routing_lp = build_maxlink_lp(topology, batch, initial_loads=initial)
        solution = solve(routing_lp.problem)
        if solution.status != "optimal":
            raise InfeasibleRoutingError(
                f"batch {i}/{partition.num_batches}: solver status {solution.status}"
            )
        alloc = allocation_from_solution(routing_lp, solution)
        merged.update(alloc.shares)
        loads = [0.0] * H
        for (_, h), y in alloc.shares.items():
            loads[h - 1] += y
        for h in range(H):
            initial[h] += loads[h]
        step_objectives.append(float(solution.objective))
        step_duals.append(list(solution.duals or []))
        step_relay_loads.append(loads)

    allocation = RoutingAllocation(shares=merged, enforce_structural=True)
    if placement is None:
        t = len(next(iter(all_groups))) - 1
        placement = default_placement(topology.num_users, t)
    report = compute_loads(topology, all_groups, allocation, placement)
    return GroupedSolveResult(
        allocation=allocation,
        report=report,
        partition=partition,
        step_objectives=step_objectives,
        step_duals=step_duals,
        step_relay_loads=step_relay_loads,
        objective=max(initial),
    )
