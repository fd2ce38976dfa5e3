from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from relaycast.errors import InvalidUserError, UnsupportedMemoryError
from relaycast.placement import (
    PlacementConfig,
    cache_index_sets,
    message_composition,
    multicast_groups,
    replication_param,
    subfile_index_sets,
    worst_case_demands,
)


def test_replication_param_values():
    assert replication_param(10, 5, 4) == 2
    assert replication_param(6, 6, 1) == 1
    assert replication_param(4, 4, 0) == 0
    assert replication_param(4, 4, 4) == 4


def test_replication_param_rejects_non_integer():
    with pytest.raises(UnsupportedMemoryError):
        replication_param(10, 5, 3)  # t = 1.5
    with pytest.raises(UnsupportedMemoryError):
        replication_param(4, 4, 5)  # M > N


def test_subfile_index_sets():
    assert subfile_index_sets(3, 1) == [(1,), (2,), (3,)]
    assert len(subfile_index_sets(5, 2)) == 10
    assert subfile_index_sets(4, 0) == [()]
    assert subfile_index_sets(5, 2) == list(combinations(range(1, 6), 2))


def test_subfile_partition_distinct_and_complete():
    sets = subfile_index_sets(6, 3)
    assert len(set(sets)) == len(sets) == comb(6, 3)


def test_cache_index_sets():
    assert cache_index_sets(3, 1, 2) == [(2,)]
    got = cache_index_sets(5, 2, 1)
    assert got == [(1, 2), (1, 3), (1, 4), (1, 5)]
    assert all(1 in s for s in got)
    with pytest.raises(InvalidUserError):
        cache_index_sets(5, 2, 6)


def test_cached_bits_identity():
    # N * C(K-1, t-1) / C(K, t) * F == M * F, checked in exact arithmetic
    N, K, M = 10, 5, 4
    t = replication_param(N, K, M)
    cached = Fraction(N * comb(K - 1, t - 1), comb(K, t))
    assert cached == Fraction(M)


def test_multicast_groups():
    assert len(multicast_groups(5, 2)) == 10
    assert multicast_groups(4, 4) == []
    assert multicast_groups(3, 0) == [(1,), (2,), (3,)]
    groups = multicast_groups(6, 2)
    assert groups == list(combinations(range(1, 7), 3))


def test_groups_per_user_count():
    # user k belongs to C(K-1, t) groups, one per subfile it still needs
    K, t = 6, 2
    groups = multicast_groups(K, t)
    for k in range(1, K + 1):
        assert sum(1 for g in groups if k in g) == comb(K - 1, t)


def test_message_composition_basic():
    terms = message_composition((1, 2), demands=(2, 1, 3), num_files=3)
    assert terms == [(2, (2,)), (1, (1,))]


def test_message_composition_t0():
    terms = message_composition((3,), demands=(1, 1, 5), num_files=5)
    assert terms == [(5, ())]


def test_message_composition_errors():
    with pytest.raises(ValueError, match="demand"):
        message_composition((1, 2), demands=(9, 1), num_files=3)


def test_message_terms_are_cached_by_other_members():
    # for j != k in the group, k appears in the label of j's term, so k
    # holds every term except its own in its cache
    for K, t in [(5, 2), (6, 3), (4, 1)]:
        for group in multicast_groups(K, t)[:8]:
            demands = worst_case_demands(K, K)
            terms = message_composition(group, demands, K)
            assert len(terms) == t + 1
            for k, (_, label) in zip(group, terms):
                assert len(label) == t and k not in label
                for other in group:
                    if other != k:
                        assert other in label


def test_cache_covers_other_terms():
    K, t = 5, 2
    for group in multicast_groups(K, t):
        for k in group:
            cached = set(cache_index_sets(K, t, k))
            for j in group:
                label = tuple(u for u in group if u != j)
                if j != k:
                    assert label in cached
                else:
                    assert label not in cached


def test_placement_config_validates():
    cfg = PlacementConfig(num_files=10, num_users=5, cache_size=4, file_size_bits=80)
    assert cfg.replication == 2
    assert cfg.num_subfiles == 10
    assert cfg.message_size_bits == Fraction(80, 10)
    with pytest.raises(UnsupportedMemoryError):
        PlacementConfig(num_files=10, num_users=5, cache_size=3)


def test_placement_from_replication():
    cfg = PlacementConfig.from_replication(5, 5, 2)
    assert cfg.cache_size == Fraction(2)
    assert cfg.replication == 2
    with pytest.raises(UnsupportedMemoryError):
        PlacementConfig.from_replication(5, 5, 6)


def test_worst_case_demands():
    assert worst_case_demands(5, 5) == (1, 2, 3, 4, 5)
    assert worst_case_demands(8, 5) == (1, 2, 3, 4, 5)
    assert worst_case_demands(3, 5) == (1, 2, 3, 1, 2)
