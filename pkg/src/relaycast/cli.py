"""Command line interface.

Subcommands: gen-topology, solve, dynamic, compare, sweep-g,
sweep-capacity, verify.  Parameter flags follow the conventional symbols:
--K users, --H relays, --L per-user degree, --t replication.
"""
from __future__ import annotations

import argparse
import sys

from relaycast import topology as topo_mod
from relaycast.dynamic import batch_count_for_size, solve_dynamic
from relaycast.errors import RelaycastError
from relaycast.harness import (
    SCHEMES,
    ExperimentSpec,
    format_aggregates,
    run_experiment,
    write_csv,
)
from relaycast.placement import (
    PlacementConfig,
    multicast_groups,
    worst_case_demands,
)
from relaycast.routing import (
    compute_loads,
    solve_delivery_time,
    solve_max_link_load,
)
from relaycast.rlnc import verify_end_to_end


def _add_system_args(parser, topology_file=False):
    if topology_file:
        parser.add_argument("--topology", required=True, help="topology JSON file")
    else:
        parser.add_argument("--K", type=int, required=True, help="number of users")
        parser.add_argument("--H", type=int, required=True, help="number of relays")
        parser.add_argument("--L", type=int, required=True, help="relays per user")
    parser.add_argument("--t", type=int, required=True, help="replication parameter")
    parser.add_argument("--N", type=int, default=None, help="library size (default K)")
    parser.add_argument("--F", type=int, default=1, help="file size in bits")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaycast",
        description="Coded-caching delivery planner for two-hop relay networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-topology", help="generate and save a topology")
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--K", type=int, help="number of users (random mode)")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--combination", action="store_true",
                   help="one user per L-subset instead of random draws")
    p.add_argument("--CF", type=float, default=1.0, help="fronthaul capacity")
    p.add_argument("--CE", type=float, default=1.0, help="edge capacity")
    p.add_argument("--out", required=True)

    p = sub.add_parser("solve", help="solve the routing LP for one topology")
    _add_system_args(p, topology_file=True)
    p.add_argument("--objective", choices=("maxload", "time"), default="maxload")

    p = sub.add_parser("dynamic", help="grouped sequential solve for one topology")
    _add_system_args(p, topology_file=True)
    p.add_argument("--g", type=int, required=True, help="max messages per batch")
    p.add_argument("--seed", type=int, default=0, help="partition shuffle seed")

    p = sub.add_parser("compare", help="all schemes on paired random topologies")
    _add_system_args(p)
    p.add_argument("--schemes", default=",".join(SCHEMES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV output path")

    p = sub.add_parser("sweep-g", help="sweep the batch size g")
    _add_system_args(p)
    p.add_argument("--g", default="1,2,3,5,10", help="comma-separated g values")
    p.add_argument("--schemes", default=",".join(SCHEMES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("sweep-capacity", help="sweep the edge capacity")
    _add_system_args(p)
    p.add_argument("--values", default="0.25,0.5,1,2,4,8",
                   help="comma-separated edge capacities")
    p.add_argument("--schemes", default="lp")
    p.add_argument("--CF", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="end-to-end byte-level delivery check")
    _add_system_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--P", type=int, default=32, help="packets per message")
    return parser


def _placement(args, num_users: int) -> PlacementConfig:
    num_files = args.N if args.N is not None else num_users
    return PlacementConfig.from_replication(
        num_files=num_files,
        num_users=num_users,
        replication=args.t,
        file_size_bits=args.F,
    )


def _cmd_gen_topology(args) -> int:
    if args.combination:
        topo = topo_mod.generate_combination(args.H, args.L)
    else:
        if args.K is None:
            raise RelaycastError("--K is required unless --combination is given")
        topo = topo_mod.generate_random_uniform(args.H, args.K, args.L, args.seed)
    topo = topo.with_capacities(args.CF, args.CE)
    topo_mod.save(topo, args.out)
    print(f"wrote {args.out}: H={topo.num_relays} K={topo.num_users}")
    return 0


def _cmd_solve(args) -> int:
    topo = topo_mod.load(args.topology)
    placement = _placement(args, topo.num_users)
    groups = multicast_groups(topo.num_users, args.t)
    if args.objective == "time":
        obj, alloc, _ = solve_delivery_time(topo, groups, placement)
        print(f"delivery time: {obj:.9g} channel uses")
    else:
        obj, alloc, _ = solve_max_link_load(topo, groups)
        print(f"max-link load: {obj:.9g} message units "
              f"({obj / placement.num_subfiles:.9g} file units)")
    report = compute_loads(topo, groups, alloc, placement)
    for h, load in enumerate(report.relay_loads, start=1):
        print(f"relay {h}: load {load:.9g} message units")
    return 0


def _cmd_dynamic(args) -> int:
    topo = topo_mod.load(args.topology)
    placement = _placement(args, topo.num_users)
    groups = multicast_groups(topo.num_users, args.t)
    num_batches = batch_count_for_size(len(groups), args.g)
    result = solve_dynamic(topo, groups, num_batches, args.seed, placement)
    print(f"grouped objective: {result.objective:.9g} message units "
          f"(G={result.partition.num_batches}, g={result.partition.max_batch_size})")
    for i, obj in enumerate(result.step_objectives, start=1):
        print(f"step {i}: {obj:.9g}")
    return 0


def _parse_values(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _run_and_report(spec: ExperimentSpec, out: str | None) -> int:
    result = run_experiment(spec)
    if out:
        write_csv(result.rows, out)
        print(f"wrote {len(result.rows)} rows to {out}")
    print(format_aggregates(result.aggregates))
    return 0


def _cmd_compare(args) -> int:
    spec = ExperimentSpec(
        num_users=args.K,
        num_relays=args.H,
        degree=args.L,
        replication=args.t,
        schemes=tuple(args.schemes.split(",")),
        sweep="none",
        trials=args.trials,
        master_seed=args.seed,
        num_files=args.N,
        file_size_bits=args.F,
    )
    return _run_and_report(spec, args.out)


def _cmd_sweep_g(args) -> int:
    spec = ExperimentSpec(
        num_users=args.K,
        num_relays=args.H,
        degree=args.L,
        replication=args.t,
        schemes=tuple(args.schemes.split(",")),
        sweep="g",
        sweep_values=_parse_values(args.g),
        trials=args.trials,
        master_seed=args.seed,
        num_files=args.N,
        file_size_bits=args.F,
    )
    return _run_and_report(spec, args.out)


def _cmd_sweep_capacity(args) -> int:
    spec = ExperimentSpec(
        num_users=args.K,
        num_relays=args.H,
        degree=args.L,
        replication=args.t,
        schemes=tuple(args.schemes.split(",")),
        sweep="edge_capacity",
        sweep_values=_parse_values(args.values),
        trials=args.trials,
        master_seed=args.seed,
        num_files=args.N,
        fronthaul_capacity=args.CF,
        file_size_bits=args.F,
    )
    return _run_and_report(spec, args.out)


def _cmd_verify(args) -> int:
    topo = topo_mod.generate_random_uniform(args.H, args.K, args.L, args.seed)
    placement = _placement(args, args.K)
    groups = multicast_groups(args.K, args.t)
    demands = worst_case_demands(placement.num_files, args.K)
    if groups:
        _, allocation, _ = solve_max_link_load(topo, groups)
    else:
        from relaycast.routing import RoutingAllocation

        allocation = RoutingAllocation()
    report = verify_end_to_end(
        topo, placement, demands, allocation, packets=args.P, seed=args.seed
    )
    print(f"all users decoded: {str(report.all_ok).lower()}")
    print(f"resample events: {report.resample_events}")
    print(f"over-delivery: {report.over_delivery * 100:.2f}%")
    return 0 if report.all_ok else 1


_COMMANDS = {
    "gen-topology": _cmd_gen_topology,
    "solve": _cmd_solve,
    "dynamic": _cmd_dynamic,
    "compare": _cmd_compare,
    "sweep-g": _cmd_sweep_g,
    "sweep-capacity": _cmd_sweep_capacity,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RelaycastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
