import json
from itertools import combinations
from math import comb

import pytest

from relaycast.errors import (
    InvalidDegreeError,
    InvalidUserError,
    TopologyFormatError,
)
from relaycast.topology import (
    Topology,
    generate_combination,
    generate_random_uniform,
    load,
    relays_of_group,
    save,
)


def test_combination_h4_l2_is_all_pairs_lexicographic():
    topo = generate_combination(4, 2)
    assert topo.num_users == 6
    expected = [frozenset(c) for c in combinations(range(1, 5), 2)]
    assert list(topo.user_relays) == expected


def test_combination_single_full_subset():
    topo = generate_combination(3, 3)
    assert topo.num_users == 1
    assert topo.user_relays[0] == frozenset({1, 2, 3})


def test_combination_singletons():
    topo = generate_combination(5, 1)
    assert topo.num_users == 5
    assert [set(r) for r in topo.user_relays] == [{1}, {2}, {3}, {4}, {5}]


def test_combination_relay_degree_identity():
    # every relay serves C(H-1, L-1) users in the combination construction
    for H, L in [(4, 2), (5, 2), (5, 3), (6, 1)]:
        topo = generate_combination(H, L)
        for h in range(1, H + 1):
            assert len(topo.users_of_relay(h)) == comb(H - 1, L - 1)


def test_random_uniform_single_relay_forced():
    topo = generate_random_uniform(1, 3, 1, seed=99)
    assert all(r == frozenset({1}) for r in topo.user_relays)


def test_random_uniform_structure():
    topo = generate_random_uniform(4, 6, 2, seed=7)
    assert topo.num_users == 6
    for r in topo.user_relays:
        assert len(r) == 2
        assert r <= frozenset(range(1, 5))


def test_random_uniform_deterministic_and_seed_sensitive():
    a = generate_random_uniform(6, 10, 3, seed=5)
    b = generate_random_uniform(6, 10, 3, seed=5)
    c = generate_random_uniform(6, 10, 3, seed=6)
    assert a == b
    assert a != c


def test_random_uniform_full_degree_is_fully_connected():
    topo = generate_random_uniform(5, 4, 5, seed=0)
    assert all(r == frozenset(range(1, 6)) for r in topo.user_relays)


def test_random_uniform_subsets_are_uniform():
    # empirical frequency over all C(4,2)=6 subsets; each should be ~1/6
    topo = generate_random_uniform(4, 10000, 2, seed=2024)
    counts = {frozenset(c): 0 for c in combinations(range(1, 5), 2)}
    for r in topo.user_relays:
        counts[r] += 1
    for subset, count in counts.items():
        assert abs(count / 10000 - 1 / 6) <= 0.02, (subset, count)


@pytest.mark.parametrize("degree", [0, 5, -1])
def test_invalid_degree_rejected(degree):
    with pytest.raises(InvalidDegreeError):
        generate_random_uniform(4, 3, degree, seed=1)
    with pytest.raises(InvalidDegreeError):
        generate_combination(4, degree)


def test_relays_of_group_union():
    topo = generate_combination(4, 2)  # user 1 -> {1,2}, user 2 -> {1,3}
    assert relays_of_group(topo, {1, 2}) == frozenset({1, 2, 3})
    assert relays_of_group(topo, set()) == frozenset()
    full = generate_random_uniform(4, 5, 4, seed=0)
    assert relays_of_group(full, {2, 3}) == frozenset(range(1, 5))


def test_relays_of_group_bad_user():
    topo = generate_combination(4, 2)
    with pytest.raises(InvalidUserError):
        relays_of_group(topo, {7})


def test_save_load_round_trip(tmp_path):
    topo = generate_combination(4, 2).with_capacities(2.5, 0.75)
    path = tmp_path / "topo.json"
    save(topo, path)
    again = load(path)
    assert again == topo


def test_save_uses_exact_schema(tmp_path):
    topo = generate_combination(3, 2)
    path = tmp_path / "t.json"
    save(topo, path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"num_relays", "fronthaul_capacity", "edge_capacity", "users"}
    assert doc["num_relays"] == 3
    assert doc["users"] == [[1, 2], [1, 3], [2, 3]]


def test_load_rejects_empty_relay_list(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"num_relays": 3, "users": [[1], []]}')
    with pytest.raises(TopologyFormatError, match="user 2"):
        load(path)


def test_load_rejects_out_of_range_relay(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"num_relays": 3, "users": [[1, 4]]}')
    with pytest.raises(TopologyFormatError, match="relay 4"):
        load(path)


def test_load_rejects_duplicates_and_garbage(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"num_relays": 3, "users": [[1, 1]]}')
    with pytest.raises(TopologyFormatError, match="duplicate"):
        load(path)
    path.write_text("{nope")
    with pytest.raises(TopologyFormatError, match="JSON"):
        load(path)
    path.write_text('{"users": [[1]]}')
    with pytest.raises(TopologyFormatError, match="num_relays"):
        load(path)


def test_capacity_validation():
    with pytest.raises(Exception, match="capacity"):
        Topology(num_relays=2, user_relays=(frozenset({1}),), edge_capacity=0.0)


def test_users_of_relay_consistency():
    topo = generate_random_uniform(5, 8, 2, seed=3)
    for h in range(1, 6):
        for k in topo.users_of_relay(h):
            assert h in topo.relays_of_user(k)
    for k in range(1, 9):
        for h in topo.relays_of_user(k):
            assert k in topo.users_of_relay(h)
