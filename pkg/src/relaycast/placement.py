"""Maddah-Ali/Niesen uncoded prefetching combinatorics.

Files are split into C(K, t) equal subfiles labeled by t-subsets of users;
user k caches every subfile whose label contains k.  Delivery sends one
XOR message per (t+1)-subset of users.  All loads downstream depend only
on this group structure, never on which file each user asked for.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from relaycast.errors import InvalidUserError, UnsupportedMemoryError

# A multicast group is a sorted tuple of 1-based user indices.
Group = tuple[int, ...]


def replication_param(num_files: int, num_users: int, cache_size) -> int:
    """Integer replication parameter t = K*M/N.

    Non-integer values are rejected: memory sharing between neighbouring
    integer points is out of scope here.
    """
    m = Fraction(cache_size)
    if m < 0 or m > num_files:
        raise UnsupportedMemoryError(
            f"cache size {cache_size} outside [0, {num_files}]"
        )
    t = Fraction(num_users) * m / num_files
    if t.denominator != 1:
        raise UnsupportedMemoryError(
            f"replication parameter K*M/N = {t} is not an integer"
        )
    return int(t)


@dataclass(frozen=True)
class PlacementConfig:
    """Cache placement parameters; constructing one validates integrality of t."""

    num_files: int
    num_users: int
    cache_size: Fraction
    file_size_bits: int = 1

    def __post_init__(self):
        if self.num_files < 1:
            raise ValueError("num_files must be >= 1")
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")
        if self.file_size_bits < 1:
            raise ValueError("file_size_bits must be >= 1")
        object.__setattr__(self, "cache_size", Fraction(self.cache_size))
        # raises UnsupportedMemoryError when K*M/N is not an integer
        replication_param(self.num_files, self.num_users, self.cache_size)

    @classmethod
    def from_replication(
        cls, num_files: int, num_users: int, replication: int, file_size_bits: int = 1
    ) -> "PlacementConfig":
        if not (0 <= replication <= num_users):
            raise UnsupportedMemoryError(
                f"replication {replication} outside [0, {num_users}]"
            )
        cache = Fraction(replication * num_files, num_users)
        return cls(num_files, num_users, cache, file_size_bits)

    @property
    def replication(self) -> int:
        return replication_param(self.num_files, self.num_users, self.cache_size)

    @property
    def num_subfiles(self) -> int:
        return comb(self.num_users, self.replication)

    @property
    def message_size_bits(self) -> Fraction:
        """Length of one multicast message: F / C(K, t) bits."""
        return Fraction(self.file_size_bits, self.num_subfiles)


def subfile_index_sets(num_users: int, replication: int) -> list[Group]:
    """All t-subsets of [K] in lexicographic order (the subfile labels)."""
    if not (0 <= replication <= num_users):
        raise ValueError(f"replication {replication} outside [0, {num_users}]")
    return list(combinations(range(1, num_users + 1), replication))


def cache_index_sets(num_users: int, replication: int, user: int) -> list[Group]:
    """Labels of the subfiles cached by ``user``: the t-subsets containing it."""
    if not (1 <= user <= num_users):
        raise InvalidUserError(f"user {user} outside [1, {num_users}]")
    return [s for s in subfile_index_sets(num_users, replication) if user in s]


def multicast_groups(num_users: int, replication: int) -> list[Group]:
    """All (t+1)-subsets of [K] in lexicographic order; empty when t = K."""
    if replication > num_users:
        raise ValueError(f"replication {replication} exceeds num_users {num_users}")
    return list(combinations(range(1, num_users + 1), replication + 1))


def message_composition(
    group: Group, demands: tuple[int, ...], num_files: int
) -> list[tuple[int, Group]]:
    """The XOR terms of one multicast message.

    For each user k in the group, the term is the subfile of k's demanded
    file labeled by the other group members; every other member of the
    group holds that subfile in its cache.
    """
    terms = []
    for k in group:
        if not (1 <= k <= len(demands)):
            raise InvalidUserError(f"user {k} has no demand entry")
        d = demands[k - 1]
        if not (1 <= d <= num_files):
            raise ValueError(f"demand {d} of user {k} outside [1, {num_files}]")
        terms.append((d, tuple(u for u in group if u != k)))
    return terms


def worst_case_demands(num_files: int, num_users: int) -> tuple[int, ...]:
    """Distinct demands when the library is large enough, cycling otherwise."""
    return tuple((k - 1) % num_files + 1 for k in range(1, num_users + 1))
