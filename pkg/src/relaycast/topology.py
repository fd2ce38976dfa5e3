"""Two-hop server-relay-user network topologies.

A topology is a bipartite connectivity pattern between relays and cache-
equipped users, plus the two link capacities: server to relay (fronthaul)
and relay to user (edge).  Relay and user indices are 1-based everywhere
they are visible (files, CLI output, error messages).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from itertools import combinations
from pathlib import Path
from typing import Iterable

from relaycast.errors import (
    InvalidCapacityError,
    InvalidDegreeError,
    InvalidUserError,
    TopologyFormatError,
)


@dataclass(frozen=True)
class Topology:
    """Immutable relay-user connectivity with link capacities.

    ``user_relays[k-1]`` is the set of relay indices user ``k`` can hear.
    Every user must reach at least one relay, otherwise it could never
    decode anything.
    """

    num_relays: int
    user_relays: tuple[frozenset[int], ...]
    fronthaul_capacity: float = 1.0
    edge_capacity: float = 1.0

    def __post_init__(self):
        if self.num_relays < 1:
            raise TopologyFormatError("num_relays must be >= 1")
        if not self.user_relays:
            raise TopologyFormatError("topology has no users")
        if self.fronthaul_capacity <= 0:
            raise InvalidCapacityError(
                f"fronthaul_capacity must be positive, got {self.fronthaul_capacity}"
            )
        if self.edge_capacity <= 0:
            raise InvalidCapacityError(
                f"edge_capacity must be positive, got {self.edge_capacity}"
            )
        for k, relays in enumerate(self.user_relays, start=1):
            if not relays:
                raise TopologyFormatError(f"user {k} has an empty relay set")
            for h in relays:
                if not (1 <= h <= self.num_relays):
                    raise TopologyFormatError(
                        f"user {k} references relay {h} outside [1, {self.num_relays}]"
                    )

    @property
    def num_users(self) -> int:
        return len(self.user_relays)

    def relays_of_user(self, k: int) -> frozenset[int]:
        if not (1 <= k <= self.num_users):
            raise InvalidUserError(f"user {k} outside [1, {self.num_users}]")
        return self.user_relays[k - 1]

    def users_of_relay(self, h: int) -> frozenset[int]:
        return frozenset(
            k for k, relays in enumerate(self.user_relays, start=1) if h in relays
        )

    def uniform_degree(self) -> int | None:
        """The common |H_k| when all users have equal degree, else None."""
        degrees = {len(r) for r in self.user_relays}
        return degrees.pop() if len(degrees) == 1 else None

    def with_capacities(
        self, fronthaul: float | None = None, edge: float | None = None
    ) -> "Topology":
        return replace(
            self,
            fronthaul_capacity=self.fronthaul_capacity if fronthaul is None else fronthaul,
            edge_capacity=self.edge_capacity if edge is None else edge,
        )


def relays_of_group(topology: Topology, users: Iterable[int]) -> frozenset[int]:
    """Union of the relay sets of the given users (may be empty for no users)."""
    out: set[int] = set()
    for k in users:
        out |= topology.relays_of_user(k)
    return frozenset(out)


def generate_random_uniform(
    num_relays: int, num_users: int, degree: int, seed: int
) -> Topology:
    """Each user independently picks a uniform random ``degree``-subset of relays.

    The subset is drawn by a seeded partial Fisher-Yates shuffle, which is
    exactly uniform over all C(num_relays, degree) subsets and reproducible.
    """
    _check_degree(degree, num_relays)
    rng = random.Random(seed)
    users = []
    for _ in range(num_users):
        pool = list(range(1, num_relays + 1))
        for i in range(degree):
            j = rng.randrange(i, num_relays)
            pool[i], pool[j] = pool[j], pool[i]
        users.append(frozenset(pool[:degree]))
    return Topology(num_relays=num_relays, user_relays=tuple(users))


def generate_combination(num_relays: int, degree: int) -> Topology:
    """One user per ``degree``-subset of relays, in lexicographic order."""
    _check_degree(degree, num_relays)
    users = tuple(
        frozenset(c) for c in combinations(range(1, num_relays + 1), degree)
    )
    return Topology(num_relays=num_relays, user_relays=users)


def _check_degree(degree: int, num_relays: int) -> None:
    if not (1 <= degree <= num_relays):
        raise InvalidDegreeError(
            f"degree {degree} outside [1, {num_relays}]"
        )


def save(topology: Topology, path: str | Path) -> None:
    """Write the topology as JSON; relay indices are 1-based and sorted."""
    doc = {
        "num_relays": topology.num_relays,
        "fronthaul_capacity": topology.fronthaul_capacity,
        "edge_capacity": topology.edge_capacity,
        "users": [sorted(r) for r in topology.user_relays],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load(path: str | Path) -> Topology:
    """Read a topology written by :func:`save`, validating every invariant."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TopologyFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TopologyFormatError("top level must be an object")
    for key in ("num_relays", "users"):
        if key not in doc:
            raise TopologyFormatError(f"missing required key {key!r}")
    num_relays = doc["num_relays"]
    if not isinstance(num_relays, int):
        raise TopologyFormatError("num_relays must be an integer")
    users_raw = doc["users"]
    if not isinstance(users_raw, list):
        raise TopologyFormatError("users must be a list of relay-index lists")
    users = []
    for k, entry in enumerate(users_raw, start=1):
        if not isinstance(entry, list) or not all(isinstance(h, int) for h in entry):
            raise TopologyFormatError(f"users[{k}] must be a list of integers")
        if len(set(entry)) != len(entry):
            raise TopologyFormatError(f"users[{k}] has duplicate relay indices")
        users.append(frozenset(entry))
    try:
        return Topology(
            num_relays=num_relays,
            user_relays=tuple(users),
            fronthaul_capacity=float(doc.get("fronthaul_capacity", 1.0)),
            edge_capacity=float(doc.get("edge_capacity", 1.0)),
        )
    except InvalidCapacityError as exc:
        raise TopologyFormatError(str(exc)) from exc
