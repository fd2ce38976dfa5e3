"""Numpy implementations of the two hot kernels.

The compiled extension in ``_kernel.pyx`` mirrors these functions exactly:
same pivot selection, same tie-breaking, same floating-point operation
order.  Either backend may be active at runtime; results are identical.
"""
from __future__ import annotations

import numpy as np


def simplex_phase(tableau, obj, basis, entering_limit, tol, max_iter):
    """Run Bland-rule pivots in place until no entering column remains.

    tableau: (m, w) float64, right-hand side in the last column.
    obj: (w,) float64 reduced-cost row, objective cell last.
    basis: (m,) int64 basic-variable index per row, updated in place.
    entering_limit: only columns < limit may enter (bars artificials).

    Returns (status, iterations) with status 0 = optimal, 1 = unbounded,
    2 = iteration cap hit.
    """
    m, width = tableau.shape
    rhs = width - 1
    for it in range(max_iter):
        negative = np.flatnonzero(obj[:entering_limit] < -tol)
        if negative.size == 0:
            return 0, it
        col = int(negative[0])
        colvals = tableau[:, col]
        candidates = np.flatnonzero(colvals > tol)
        if candidates.size == 0:
            return 1, it
        ratios = tableau[candidates, rhs] / colvals[candidates]
        best = ratios.min()
        tied = candidates[ratios == best]
        if tied.size == 1:
            row = int(tied[0])
        else:
            row = int(tied[np.argmin(basis[tied])])
        _pivot(tableau, obj, basis, row, col)
    return 2, max_iter


def _pivot(tableau, obj, basis, row, col):
    piv = tableau[row, col]
    tableau[row, :] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    f = obj[col]
    if f != 0.0:
        obj -= f * tableau[row]
        obj[col] = 0.0
    basis[row] = col


def gf256_eliminate(aug, ncoef, mul_table, inv_table):
    """Gauss-Jordan over GF(256) on the first ``ncoef`` columns, in place.

    aug: (rows, ncoef + payload) uint8 augmented matrix.
    mul_table: (256, 256) uint8 multiplication table.
    inv_table: (256,) uint8 multiplicative inverses (entry 0 unused).

    Returns the rank of the coefficient block.  When rank == ncoef the
    first ncoef rows hold the identity followed by the solved payload.
    """
    rows = aug.shape[0]
    rank = 0
    for col in range(ncoef):
        nonzero = np.flatnonzero(aug[rank:, col])
        if nonzero.size == 0:
            continue
        pivot_row = rank + int(nonzero[0])
        if pivot_row != rank:
            aug[[rank, pivot_row]] = aug[[pivot_row, rank]]
        inv = inv_table[aug[rank, col]]
        if inv != 1:
            aug[rank, :] = mul_table[inv][aug[rank, :]]
        for r in range(rows):
            if r != rank and aug[r, col]:
                aug[r, :] ^= mul_table[aug[r, col]][aug[rank, :]]
        rank += 1
        if rank == rows:
            break
    return rank
