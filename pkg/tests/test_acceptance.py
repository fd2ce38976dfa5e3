"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with  pytest tests/test_acceptance.py -v -s  to see the criterion lines.
"""
import random
import time
from math import comb

import pytest

from lp_random import random_lp
from relaycast.baselines import mds_allocation, mgl_allocation
from relaycast.dynamic import solve_dynamic
from relaycast.harness import ExperimentSpec, derive_seed, run_experiment
from relaycast.placement import (
    PlacementConfig,
    multicast_groups,
    worst_case_demands,
)
from relaycast.rlnc import verify_end_to_end
from relaycast.routing import (
    check_feasible,
    compute_loads,
    default_placement,
    solve_delivery_time,
    solve_max_link_load,
)
from relaycast.simplex import solve, solve_exact
from relaycast.topology import Topology, generate_random_uniform


def _report(number, name, ok, started, limit, detail=""):
    elapsed = time.perf_counter() - started
    verdict = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"[criterion {number}] {name}: {verdict} ({elapsed:.1f}s / limit {limit:.0f}s){suffix}")
    assert ok, f"criterion {number} {name}{suffix}"
    assert elapsed < limit, f"criterion {number} exceeded {limit}s ({elapsed:.1f}s)"


def test_criterion_1_closed_form_fully_connected():
    started = time.perf_counter()
    worst = 0.0
    for K in (4, 5, 6):
        for H in range(2, 7):
            for t in (1, 2):
                topo = generate_random_uniform(H, K, H, seed=1)
                groups = multicast_groups(K, t)
                obj, _, _ = solve_max_link_load(topo, groups)
                expect = comb(K, t + 1) / H
                worst = max(worst, abs(obj - expect))
    _report(1, "closed-form optimum on fully connected topologies",
            worst <= 1e-6, started, 10, f"max deviation {worst:.2e}")


def test_criterion_2_dominance_per_instance():
    started = time.perf_counter()
    placement = default_placement(5, 2)
    groups = multicast_groups(5, 2)
    bad = 0
    total = 0
    for H in (5, 10, 15):
        for trial in range(100):
            seed = derive_seed(42, "dominance", H, trial)
            topo = generate_random_uniform(H, 5, 2, seed)
            opt, _, _ = solve_max_link_load(topo, groups)
            mgl = compute_loads(
                topo, groups, mgl_allocation(topo, groups), placement
            ).max_relay_load
            mds = compute_loads(
                topo, groups, mds_allocation(topo, groups), placement
            ).max_relay_load
            total += 1
            if not (opt <= mgl + 1e-9 and mgl <= mds + 1e-9):
                bad += 1
    _report(2, "LP <= MGL <= MDS on paired random topologies",
            bad == 0, started, 60, f"{total - bad}/{total} ordered")


def test_criterion_3_grouped_solver_consistency():
    started = time.perf_counter()
    groups = multicast_groups(5, 2)
    rng = random.Random(99)
    single_ok = True
    worst_gap = 0.0
    every_ok = True
    for i in range(50):
        topo = generate_random_uniform(10, 5, 2, seed=rng.randint(0, 10**9))
        full, _, _ = solve_max_link_load(topo, groups)
        one = solve_dynamic(topo, groups, 1, seed=i)
        gap = abs(one.objective - full)
        worst_gap = max(worst_gap, gap)
        if gap > 1e-6 * (1 + full):
            single_ok = False
        for G in (2, 3, 5, 10):
            result = solve_dynamic(topo, groups, G, seed=i)
            feasible, _ = check_feasible(topo, groups, result.allocation)
            if not feasible or result.objective < full - 1e-9:
                every_ok = False
    _report(3, "grouped solver: G=1 matches full LP, all G feasible and dominated",
            single_ok and every_ok, started, 120, f"max G=1 gap {worst_gap:.2e}")


def test_criterion_4_mean_objective_nonincreasing_in_g():
    started = time.perf_counter()
    spec = ExperimentSpec(
        num_users=5, num_relays=10, degree=2, replication=2,
        schemes=("dynamic",), sweep="g", sweep_values=(1, 2, 3, 5, 10),
        trials=200, master_seed=2024,
    )
    result = run_experiment(spec)
    means = [a.mean for a in result.aggregates]
    ok = all(later <= earlier * 1.01 for earlier, later in zip(means, means[1:]))
    detail = " -> ".join(f"{m:.4f}" for m in means)
    _report(4, "mean grouped objective nonincreasing in g", ok, started, 300, detail)


def test_criterion_5_capacity_sweep_plateau():
    started = time.perf_counter()
    groups = multicast_groups(5, 2)
    placement = default_placement(5, 2)
    unit = float(placement.message_size_bits)
    capacities = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
    seeds = [derive_seed(7, "capacity", i) for i in range(20)]
    sums = {ce: 0.0 for ce in capacities}
    bound_sum = 0.0
    for seed in seeds:
        topo = generate_random_uniform(10, 5, 2, seed)
        load_opt, _, _ = solve_max_link_load(topo, groups)
        bound_sum += load_opt * unit  # fronthaul-only bound at C_F = 1
        for ce in capacities:
            t, _, _ = solve_delivery_time(
                topo.with_capacities(1.0, ce), groups, placement
            )
            sums[ce] += t
    means = [sums[ce] / len(seeds) for ce in capacities]
    bound = bound_sum / len(seeds)
    monotone = all(b <= a + 1e-9 for a, b in zip(means, means[1:]))
    plateau = abs(means[-1] - bound) <= 1e-6 * (1 + bound)
    detail = (
        " -> ".join(f"{m:.4f}" for m in means) + f"; fronthaul bound {bound:.4f}"
    )
    _report(5, "mean delivery time nonincreasing in edge capacity with plateau",
            monotone and plateau, started, 120, detail)


def test_criterion_6_end_to_end_decodability():
    started = time.perf_counter()
    groups = multicast_groups(4, 1)
    placement = PlacementConfig.from_replication(4, 4, 1, file_size_bits=8192)
    demands = worst_case_demands(4, 4)
    all_ok = True
    resamples = 0
    for i in range(20):
        seed = derive_seed(11, "verify", i)
        topo = generate_random_uniform(3, 4, 2, seed)
        _, alloc, _ = solve_max_link_load(topo, groups)
        report = verify_end_to_end(
            topo, placement, demands, alloc, packets=32, seed=seed
        )
        resamples += report.resample_events
        if not report.all_ok:
            all_ok = False
    _report(6, "every user reconstructs its file byte-exactly",
            all_ok, started, 30, f"resample events: {resamples}")


def test_criterion_7_solver_soundness():
    started = time.perf_counter()
    rng = random.Random(777)
    mismatch = 0
    gap_bad = 0
    optimal = 0
    for _ in range(500):
        problem = random_lp(rng)
        f = solve(problem)
        e = solve_exact(problem)
        if f.status != e.status:
            mismatch += 1
            continue
        if f.status == "optimal":
            optimal += 1
            exact = float(e.objective)
            if abs(f.objective - exact) > 1e-6 * (1 + abs(exact)):
                mismatch += 1
            if abs(f.objective - f.dual_objective) > 1e-8 * (1 + abs(f.objective)):
                gap_bad += 1
    _report(7, "float simplex agrees with exact oracle on 500 random LPs",
            mismatch == 0 and gap_bad == 0, started, 120,
            f"{optimal} optimal instances, {mismatch} mismatches, {gap_bad} gap failures")


def test_criterion_8_scale_and_dead_relay_invariance():
    started = time.perf_counter()
    groups = multicast_groups(5, 2)
    placement = default_placement(5, 2)
    rng = random.Random(55)
    scale_ok = True
    dead_ok = True
    for i in range(50):
        topo = generate_random_uniform(8, 5, 2, seed=rng.randint(0, 10**9))
        base, _, _ = solve_delivery_time(
            topo.with_capacities(1.0, 0.5), groups, placement
        )
        c = rng.choice([0.5, 2.0, 3.0, 8.0])
        scaled, _, _ = solve_delivery_time(
            topo.with_capacities(c, 0.5 * c), groups, placement
        )
        if abs(scaled - base / c) > 1e-9 * (1 + base):
            scale_ok = False
    for i in range(50):
        topo = generate_random_uniform(8, 5, 2, seed=rng.randint(0, 10**9))
        grown = Topology(
            num_relays=topo.num_relays + 1,
            user_relays=topo.user_relays,
            fronthaul_capacity=topo.fronthaul_capacity,
            edge_capacity=topo.edge_capacity,
        )
        a, _, _ = solve_max_link_load(topo, groups)
        b, _, _ = solve_max_link_load(grown, groups)
        ta, _, _ = solve_delivery_time(topo, groups, placement)
        tb, _, _ = solve_delivery_time(grown, groups, placement)
        if abs(a - b) > 1e-9 * (1 + a) or abs(ta - tb) > 1e-9 * (1 + ta):
            dead_ok = False
    _report(8, "capacity scale invariance and dead-relay invariance",
            scale_ok and dead_ok, started, 120)
