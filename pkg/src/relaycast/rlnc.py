"""Byte-level proof that an allocation actually delivers.

Every multicast message is split into P packets and each relay with a
positive share receives ceil(share * P) random linear combinations of them
over GF(256).  A user stacks the combinations arriving through its own
relays and decodes by Gaussian elimination; with the cached XOR terms
removed it recovers its missing subfiles and finally its whole file,
compared byte for byte against the original.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from relaycast import kernels
from relaycast.errors import InfeasibleRoutingError
from relaycast.gf256 import INV_TABLE, MUL_TABLE, matmul
from relaycast.placement import (
    Group,
    PlacementConfig,
    multicast_groups,
    subfile_index_sets,
)
from relaycast.routing import RoutingAllocation, check_feasible
from relaycast.topology import Topology


@dataclass
class CodedShare:
    """Coded packets bound for one relay: coefficients and payload rows."""

    group: Group
    relay: int
    coefficients: np.ndarray  # (n, P) uint8
    payload: np.ndarray  # (n, packet_len) uint8


def _derive_seed(*parts) -> int:
    data = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def packet_count(share: float, packets: int) -> int:
    """ceil(share * P); over-delivery is allowed, under-delivery never."""
    return math.ceil(share * packets)


def encode_shares(
    message: bytes, group: Group, allocation: RoutingAllocation,
    packets: int, seed: int,
) -> list[CodedShare]:
    """Cut one message into packets and code them per relay, seeded."""
    if not message:
        raise ValueError("cannot encode an empty message")
    if packets < 1:
        raise ValueError("packets must be >= 1")
    group = tuple(group)
    packet_len = -(-len(message) // packets)
    padded = message + b"\x00" * (packets * packet_len - len(message))
    matrix = np.frombuffer(padded, dtype=np.uint8).reshape(packets, packet_len)

    shares = []
    relays = sorted(
        h for (g, h), y in allocation.shares.items() if g == group and y > 0.0
    )
    rng = np.random.default_rng(_derive_seed(seed, "coeffs", group))
    for h in relays:
        n = packet_count(allocation.share(group, h), packets)
        coeffs = rng.integers(0, 256, size=(n, packets), dtype=np.uint8)
        payload = matmul(coeffs, matrix)
        shares.append(CodedShare(group, h, coeffs, payload))
    return shares


def decode_user(shares: list[CodedShare], packets: int) -> bytes | None:
    """Recover the message from stacked shares, or None when rank < P."""
    if not shares:
        return None
    coeffs = np.concatenate([s.coefficients for s in shares], axis=0)
    payload = np.concatenate([s.payload for s in shares], axis=0)
    if coeffs.shape[0] < packets:
        return None
    aug = np.ascontiguousarray(np.concatenate([coeffs, payload], axis=1))
    rank = kernels.gf256_eliminate(aug, packets, MUL_TABLE, INV_TABLE)
    if rank < packets:
        return None
    return aug[:packets, packets:].tobytes()


@dataclass
class VerifyReport:
    """Outcome of one end-to-end delivery check."""

    user_ok: dict[int, bool]
    resample_events: int
    packets_sent: int
    packets_minimum: int
    failed_groups: list[Group] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(self.user_ok.values())

    @property
    def over_delivery(self) -> float:
        """Extra packets shipped because fractional shares round up."""
        if self.packets_minimum == 0:
            return 0.0
        return self.packets_sent / self.packets_minimum - 1.0


def verify_end_to_end(
    topology: Topology,
    placement: PlacementConfig,
    demands: tuple[int, ...],
    allocation: RoutingAllocation,
    packets: int = 32,
    seed: int = 0,
    max_retries: int = 10,
) -> VerifyReport:
    """Generate real file bytes, cache, XOR, encode, route, decode, compare.

    Coefficient draws that leave a user rank-deficient trigger a re-encode
    of that group's shares with a stepped seed (counted, capped).
    """
    K = topology.num_users
    N = placement.num_files
    t = placement.replication
    if len(demands) != K:
        raise ValueError(f"need {K} demands, got {len(demands)}")
    for k, d in enumerate(demands, start=1):
        if not (1 <= d <= N):
            raise ValueError(f"demand {d} of user {k} outside [1, {N}]")

    groups = multicast_groups(K, t)
    if groups:
        ok, violations = check_feasible(topology, groups, allocation)
        if not ok:
            raise InfeasibleRoutingError(
                f"allocation infeasible: {len(violations)} violations, "
                f"first {violations[0]}"
            )

    labels = subfile_index_sets(K, t)
    file_bytes = -(-placement.file_size_bits // 8)
    sub_len = -(-file_bytes // len(labels))
    rng = np.random.default_rng(_derive_seed(seed, "files"))
    files = {
        i: rng.integers(0, 256, size=len(labels) * sub_len, dtype=np.uint8).tobytes()
        for i in range(1, N + 1)
    }
    subfile = {
        (i, label): files[i][j * sub_len : (j + 1) * sub_len]
        for i in files
        for j, label in enumerate(labels)
    }

    resample_events = 0
    packets_sent = 0
    failed_groups: list[Group] = []
    decoded: dict[tuple[Group, int], bytes] = {}
    for group in groups:
        acc = np.zeros(sub_len, dtype=np.uint8)
        for k in group:
            label = tuple(u for u in group if u != k)
            acc ^= np.frombuffer(subfile[(demands[k - 1], label)], dtype=np.uint8)
        message = acc.tobytes()

        for attempt in range(max_retries + 1):
            shares = encode_shares(
                message, group, allocation, packets, _derive_seed(seed, group, attempt)
            )
            by_relay = {s.relay: s for s in shares}
            results = {}
            for k in group:
                mine = [
                    by_relay[h]
                    for h in sorted(topology.relays_of_user(k))
                    if h in by_relay
                ]
                results[k] = decode_user(mine, packets)
            if all(v is not None for v in results.values()):
                break
            resample_events += 1
        else:
            failed_groups.append(group)
            continue
        packets_sent += sum(s.coefficients.shape[0] for s in shares)
        for k, recovered in results.items():
            # strip the cached terms of the other group members off the
            # decoded message; what remains is this user's missing subfile
            piece = np.frombuffer(recovered[:sub_len], dtype=np.uint8).copy()
            for j in group:
                if j == k:
                    continue
                label_j = tuple(u for u in group if u != j)
                piece ^= np.frombuffer(subfile[(demands[j - 1], label_j)], dtype=np.uint8)
            decoded[(group, k)] = piece.tobytes()

    user_ok = {}
    for k in range(1, K + 1):
        d = demands[k - 1]
        parts = []
        complete = True
        for label in labels:
            if k in label:
                parts.append(subfile[(d, label)])
            else:
                group = tuple(sorted(label + (k,)))
                piece = decoded.get((group, k))
                if piece is None:
                    complete = False
                    break
                parts.append(piece)
        if not complete:
            user_ok[k] = False
            continue
        rebuilt = b"".join(parts)[:file_bytes]
        user_ok[k] = rebuilt == files[d][:file_bytes]

    return VerifyReport(
        user_ok=user_ok,
        resample_events=resample_events,
        packets_sent=packets_sent,
        packets_minimum=packets * len(groups),
        failed_groups=failed_groups,
    )
