"""GF(2^8) arithmetic with the AES reduction polynomial x^8+x^4+x^3+x+1.

Log/antilog tables are generated from the primitive element 0x03 (0x02 is
not primitive for this polynomial).  A full 256x256 product table and an
inverse table feed the elimination kernels and the vectorized encoder.
"""
from __future__ import annotations

import numpy as np

POLY = 0x11B
GENERATOR = 0x03


def mul_slow(a: int, b: int) -> int:
    """Carry-less peasant multiplication with reduction; table-free oracle."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= POLY
        b >>= 1
    return p


def _build_tables():
    exp = np.zeros(510, dtype=np.uint8)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x = mul_slow(x, GENERATOR)
    exp[255:510] = exp[0:255]
    la = log[1:]
    mul = np.zeros((256, 256), dtype=np.uint8)
    mul[1:, 1:] = exp[(la[:, None] + la[None, :]) % 255]
    inv = np.zeros(256, dtype=np.uint8)
    inv[1:] = exp[(255 - la) % 255]
    return exp, log, mul, inv


EXP, LOG, MUL_TABLE, INV_TABLE = _build_tables()


def mul(a: int, b: int) -> int:
    return int(MUL_TABLE[a, b])


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return int(INV_TABLE[a])


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(256): XOR-accumulated table lookups."""
    a = np.ascontiguousarray(a, dtype=np.uint8)
    b = np.ascontiguousarray(b, dtype=np.uint8)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for k in range(a.shape[1]):
        out ^= MUL_TABLE[a[:, k][:, None], b[k, :][None, :]]
    return out
