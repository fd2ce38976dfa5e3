# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: simplex pivoting and GF(256) elimination.

Keep in lockstep with _kernel_py: identical pivot choices, identical
tie-breaking, identical floating-point operation order (the build disables
FP contraction so the arithmetic matches numpy bit for bit).
"""


def simplex_phase(double[:, ::1] tableau, double[::1] obj, long long[::1] basis,
                  Py_ssize_t entering_limit, double tol, long long max_iter):
    cdef Py_ssize_t m = tableau.shape[0]
    cdef Py_ssize_t width = tableau.shape[1]
    cdef Py_ssize_t rhs = width - 1
    cdef Py_ssize_t col, row, r, j
    cdef long long it, best_basis
    cdef double best_ratio, ratio, colval, piv, f
    for it in range(max_iter):
        col = -1
        for j in range(entering_limit):
            if obj[j] < -tol:
                col = j
                break
        if col < 0:
            return 0, it
        row = -1
        best_ratio = 0.0
        best_basis = 0
        for r in range(m):
            colval = tableau[r, col]
            if colval > tol:
                ratio = tableau[r, rhs] / colval
                if row < 0 or ratio < best_ratio or (
                    ratio == best_ratio and basis[r] < best_basis
                ):
                    row = r
                    best_ratio = ratio
                    best_basis = basis[r]
        if row < 0:
            return 1, it
        piv = tableau[row, col]
        for j in range(width):
            tableau[row, j] /= piv
        for r in range(m):
            if r == row:
                continue
            f = tableau[r, col]
            if f != 0.0:
                for j in range(width):
                    tableau[r, j] -= f * tableau[row, j]
            tableau[r, col] = 0.0
        tableau[row, col] = 1.0
        f = obj[col]
        if f != 0.0:
            for j in range(width):
                obj[j] -= f * tableau[row, j]
            obj[col] = 0.0
        basis[row] = col
    return 2, max_iter


def gf256_eliminate(unsigned char[:, ::1] aug, Py_ssize_t ncoef,
                    const unsigned char[:, ::1] mul_table,
                    const unsigned char[::1] inv_table):
    cdef Py_ssize_t rows = aug.shape[0]
    cdef Py_ssize_t width = aug.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, j, pivot_row
    cdef unsigned char inv, f, tmp
    for col in range(ncoef):
        pivot_row = -1
        for r in range(rank, rows):
            if aug[r, col] != 0:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        if pivot_row != rank:
            for j in range(width):
                tmp = aug[rank, j]
                aug[rank, j] = aug[pivot_row, j]
                aug[pivot_row, j] = tmp
        inv = inv_table[aug[rank, col]]
        if inv != 1:
            for j in range(width):
                aug[rank, j] = mul_table[inv, aug[rank, j]]
        for r in range(rows):
            if r != rank and aug[r, col] != 0:
                f = aug[r, col]
                for j in range(width):
                    aug[r, j] = aug[r, j] ^ mul_table[f, aug[rank, j]]
        rank += 1
        if rank == rows:
            break
    return rank
