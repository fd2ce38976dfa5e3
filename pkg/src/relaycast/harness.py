"""Seeded Monte Carlo experiment runner with CSV output.

Every trial draws one random topology from a seed derived as
sha256("{master_seed}:topology:{trial}") truncated to 63 bits, so all
schemes and all sweep values inside a trial see the identical topology
(paired comparison).  Batch-partition shuffles use an independent stream,
sha256("{master_seed}:partition:{trial}:{g}").  Rows are emitted sorted by
(scheme, sweep value, trial) and are byte-reproducible.
"""
from __future__ import annotations

import csv
import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt

from relaycast.baselines import mds_allocation, mgl_allocation
from relaycast.dynamic import batch_count_for_size, solve_dynamic
from relaycast.errors import InfeasibleRoutingError
from relaycast.placement import PlacementConfig, multicast_groups
from relaycast.routing import (
    compute_loads,
    default_placement,
    solve_delivery_time,
    solve_max_link_load,
)
from relaycast.topology import Topology, generate_random_uniform

SCHEMES = ("lp", "dynamic", "mds", "mgl")
SWEEPS = ("g", "edge_capacity", "none")
CSV_COLUMNS = (
    "scheme",
    "sweep_name",
    "sweep_value",
    "trial",
    "seed",
    "objective_message_units",
    "objective_file_units",
    "wallclock_ms",
)

THREADS_ENV = "RELAYCAST_THREADS"


def derive_seed(master_seed: int, label: str, *parts) -> int:
    """Published trial-seed derivation: sha256 of the joined parts, 63 bits."""
    data = ":".join(str(p) for p in (master_seed, label, *parts)).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big") >> 1


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: fixed system parameters, schemes, sweep, trials."""

    num_users: int
    num_relays: int
    degree: int
    replication: int
    schemes: tuple[str, ...] = SCHEMES
    sweep: str = "none"
    sweep_values: tuple[float, ...] = ()
    trials: int = 100
    master_seed: int = 0
    num_files: int | None = None
    fronthaul_capacity: float = 1.0
    edge_capacity: float = 1.0
    file_size_bits: int = 1
    dynamic_batch_size: int | None = None  # g used when sweep is not "g"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sweep not in SWEEPS:
            raise ValueError(f"sweep must be one of {SWEEPS}")
        if self.sweep != "none" and not self.sweep_values:
            raise ValueError("sweep_values required for a sweep")
        if any(v <= 0 for v in self.sweep_values):
            raise ValueError("sweep values must be positive")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r}")

    def placement(self) -> PlacementConfig:
        num_files = self.num_files if self.num_files is not None else self.num_users
        return PlacementConfig.from_replication(
            num_files=num_files,
            num_users=self.num_users,
            replication=self.replication,
            file_size_bits=self.file_size_bits,
        )


@dataclass(frozen=True)
class ResultRow:
    scheme: str
    sweep_name: str
    sweep_value: float | None
    trial: int
    seed: int
    objective_message_units: float
    objective_file_units: float
    wallclock_ms: float


@dataclass
class Aggregate:
    scheme: str
    sweep_value: float | None
    mean: float
    std_error: float
    trials: int


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list[ResultRow]
    aggregates: list[Aggregate] = field(default_factory=list)
    skipped: int = 0


def _trial_topology(spec: ExperimentSpec, trial: int) -> Topology:
    seed = derive_seed(spec.master_seed, "topology", trial)
    topo = generate_random_uniform(
        spec.num_relays, spec.num_users, spec.degree, seed
    )
    return topo.with_capacities(spec.fronthaul_capacity, spec.edge_capacity)


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1e3


def _run_trial(spec: ExperimentSpec, trial: int) -> list[ResultRow]:
    seed = derive_seed(spec.master_seed, "topology", trial)
    topology = _trial_topology(spec, trial)
    placement = spec.placement()
    groups = multicast_groups(spec.num_users, spec.replication)
    n_messages = len(groups)
    rows: list[ResultRow] = []
    subfiles = placement.num_subfiles

    def emit(scheme, sweep_value, message_units, file_units, ms):
        rows.append(
            ResultRow(
                scheme=scheme,
                sweep_name=spec.sweep,
                sweep_value=sweep_value,
                trial=trial,
                seed=seed,
                objective_message_units=message_units,
                objective_file_units=file_units,
                wallclock_ms=ms,
            )
        )

    if spec.sweep == "edge_capacity":
        for value in spec.sweep_values:
            topo = topology.with_capacities(edge=float(value))
            for scheme in spec.schemes:
                t_val, ms = _timed(
                    lambda: _delivery_time_objective(spec, topo, groups, placement, scheme, trial)
                )
                # delivery times are in channel uses; both columns carry it
                emit(scheme, float(value), t_val, t_val, ms)
        return rows

    # max-link-load objectives (message units); g sweep or single point
    cache: dict[str, tuple[float, float]] = {}
    for scheme in spec.schemes:
        if scheme == "lp":
            (obj, _, _), ms = _timed(lambda: solve_max_link_load(topology, groups))
            cache["lp"] = (float(obj), ms)
        elif scheme == "mds":
            alloc, ms = _timed(lambda: mds_allocation(topology, groups))
            load = compute_loads(topology, groups, alloc, placement).max_relay_load
            cache["mds"] = (load, ms)
        elif scheme == "mgl":
            alloc, ms = _timed(lambda: mgl_allocation(topology, groups))
            load = compute_loads(topology, groups, alloc, placement).max_relay_load
            cache["mgl"] = (load, ms)

    if spec.sweep == "g":
        for value in spec.sweep_values:
            g = int(value)
            for scheme in spec.schemes:
                if scheme == "dynamic":
                    num_batches = batch_count_for_size(n_messages, g)
                    part_seed = derive_seed(spec.master_seed, "partition", trial, g)
                    result, ms = _timed(
                        lambda: solve_dynamic(
                            topology, groups, num_batches, part_seed, placement
                        )
                    )
                    emit("dynamic", float(g), result.objective,
                         result.objective / subfiles, ms)
                else:
                    obj, ms = cache[scheme]
                    emit(scheme, float(g), obj, obj / subfiles, ms)
    else:
        for scheme in spec.schemes:
            if scheme == "dynamic":
                g = spec.dynamic_batch_size or n_messages
                num_batches = batch_count_for_size(n_messages, g)
                part_seed = derive_seed(spec.master_seed, "partition", trial, g)
                result, ms = _timed(
                    lambda: solve_dynamic(topology, groups, num_batches, part_seed, placement)
                )
                emit("dynamic", None, result.objective, result.objective / subfiles, ms)
            else:
                obj, ms = cache[scheme]
                emit(scheme, None, obj, obj / subfiles, ms)
    return rows


def _delivery_time_objective(spec, topology, groups, placement, scheme, trial):
    if scheme == "lp":
        obj, _, _ = solve_delivery_time(topology, groups, placement)
        return float(obj)
    if scheme == "dynamic":
        g = spec.dynamic_batch_size or len(groups)
        num_batches = batch_count_for_size(len(groups), g)
        part_seed = derive_seed(spec.master_seed, "partition", trial, g)
        result = solve_dynamic(topology, groups, num_batches, part_seed, placement)
        return compute_loads(topology, groups, result.allocation, placement).total_time
    alloc = mds_allocation(topology, groups) if scheme == "mds" else mgl_allocation(topology, groups)
    return compute_loads(topology, groups, alloc, placement).total_time


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run all trials (optionally in parallel) and aggregate by scheme/value.

    Output ordering is independent of scheduling: rows are sorted by
    (scheme, sweep value, trial index) before aggregation.
    """
    workers = int(os.environ.get(THREADS_ENV, "1"))
    trials = range(spec.trials)

    def guarded(i: int) -> list[ResultRow]:
        # cannot happen for degree >= 1 topologies, recorded defensively
        try:
            return _run_trial(spec, i)
        except InfeasibleRoutingError:
            return []

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(guarded, trials))
    else:
        per_trial = [guarded(i) for i in trials]
    skipped = sum(1 for chunk in per_trial if not chunk)
    rows = [row for chunk in per_trial for row in chunk]
    rows.sort(key=lambda r: (r.scheme, _sort_value(r.sweep_value), r.trial))
    return ExperimentResult(
        spec=spec, rows=rows, aggregates=aggregate(rows), skipped=skipped
    )


def _sort_value(value):
    return -1.0 if value is None else float(value)


def aggregate(rows: list[ResultRow]) -> list[Aggregate]:
    """Mean and standard error of the message-unit objective per cell."""
    cells: dict[tuple[str, float | None], list[float]] = {}
    for row in rows:
        cells.setdefault((row.scheme, row.sweep_value), []).append(
            row.objective_message_units
        )
    out = []
    for (scheme, value), vals in sorted(
        cells.items(), key=lambda kv: (kv[0][0], _sort_value(kv[0][1]))
    ):
        n = len(vals)
        mean = sum(vals) / n
        if n > 1:
            var = sum((v - mean) ** 2 for v in vals) / (n - 1)
            stderr = sqrt(var / n)
        else:
            stderr = 0.0
        out.append(Aggregate(scheme, value, mean, stderr, n))
    return out


def write_csv(rows: list[ResultRow], path) -> None:
    """Single deterministic write; floats use shortest round-trip repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.scheme,
                    r.sweep_name,
                    "" if r.sweep_value is None else repr(r.sweep_value),
                    r.trial,
                    r.seed,
                    repr(r.objective_message_units),
                    repr(r.objective_file_units),
                    repr(r.wallclock_ms),
                ]
            )


def read_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"CSV missing columns: {sorted(missing)}")
        for rec in reader:
            rows.append(
                ResultRow(
                    scheme=rec["scheme"],
                    sweep_name=rec["sweep_name"],
                    sweep_value=(
                        None if rec["sweep_value"] == "" else float(rec["sweep_value"])
                    ),
                    trial=int(rec["trial"]),
                    seed=int(rec["seed"]),
                    objective_message_units=float(rec["objective_message_units"]),
                    objective_file_units=float(rec["objective_file_units"]),
                    wallclock_ms=float(rec["wallclock_ms"]),
                )
            )
    return rows


def format_aggregates(aggregates: list[Aggregate]) -> str:
    lines = ["scheme        sweep_value  mean           stderr         trials"]
    for a in aggregates:
        sv = "-" if a.sweep_value is None else f"{a.sweep_value:g}"
        lines.append(
            f"{a.scheme:<13} {sv:<12} {a.mean:<14.8g} {a.std_error:<14.4g} {a.trials}"
        )
    return "\n".join(lines)
