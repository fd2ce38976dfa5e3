"""Backend parity: the compiled kernels must match the numpy ones bit for bit."""
import numpy as np
import pytest

import relaycast._kernel_py as kernel_py
from relaycast import kernels
from relaycast.gf256 import INV_TABLE, MUL_TABLE

compiled = pytest.importorskip(
    "relaycast._kernel", reason="compiled extension not built"
)


def test_backend_reports_compiled_when_extension_present():
    assert kernels.BACKEND == "compiled"


def test_simplex_phase_bitwise_parity():
    rng = np.random.default_rng(11)
    for _ in range(100):
        m = int(rng.integers(1, 14))
        n = int(rng.integers(2, 20))
        t1 = rng.normal(size=(m, n + 1))
        t1[:, -1] = np.abs(t1[:, -1])
        obj1 = rng.normal(size=n + 1)
        basis1 = rng.integers(0, n, size=m, dtype=np.int64)
        t2, obj2, basis2 = t1.copy(), obj1.copy(), basis1.copy()
        res1 = compiled.simplex_phase(t1, obj1, basis1, n, 1e-10, 300)
        res2 = kernel_py.simplex_phase(t2, obj2, basis2, n, 1e-10, 300)
        assert res1 == res2
        assert np.array_equal(t1, t2)
        assert np.array_equal(obj1, obj2)
        assert np.array_equal(basis1, basis2)


def test_gf256_eliminate_parity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        rows = int(rng.integers(1, 24))
        ncoef = int(rng.integers(1, 16))
        payload = int(rng.integers(1, 10))
        a1 = rng.integers(0, 256, size=(rows, ncoef + payload), dtype=np.uint8)
        a2 = a1.copy()
        r1 = compiled.gf256_eliminate(a1, ncoef, MUL_TABLE, INV_TABLE)
        r2 = kernel_py.gf256_eliminate(a2, ncoef, MUL_TABLE, INV_TABLE)
        assert r1 == r2
        assert np.array_equal(a1, a2)


def test_solver_identical_under_either_backend(monkeypatch):
    import random

    from lp_random import random_lp
    from relaycast.simplex import solve

    rng = random.Random(31)
    problems = [random_lp(rng) for _ in range(25)]
    with_compiled = [solve(p) for p in problems]
    monkeypatch.setattr(kernels, "simplex_phase", kernel_py.simplex_phase)
    with_python = [solve(p) for p in problems]
    for a, b in zip(with_compiled, with_python):
        assert a.status == b.status
        assert a.x == b.x
        assert a.objective == b.objective
        assert a.iterations == b.iterations
