import numpy as np
import pytest

from qipwsd import kernels
from qipwsd.similarity import SimTables
from qipwsd.synthetic import random_instance

BACKENDS = kernels.available_backends()
KERNEL_FUNCS = ("evaluate", "brute_force", "branch_and_bound", "chain_dp", "coordinate_ascent")


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Route the solvers through one kernel backend."""
    mod = BACKENDS[request.param]
    for name in KERNEL_FUNCS:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture
def paper_sized():
    """Four words with 4, 3, 4 and 5 candidate senses."""
    return random_instance(2024, (4, 3, 4, 5), dim=8)


def hand_tables(c_rows, h=None, b=None, e=None):
    """SimTables from explicit values; unspecified tables are NaN."""
    counts = tuple(len(r) for r in c_rows)
    n, mmax = len(counts), max(counts)
    c = np.full((n, mmax), np.nan)
    for i, row in enumerate(c_rows):
        c[i, : len(row)] = row
    H = np.full((n, mmax, n, mmax), np.nan)
    B = np.full((n, n, mmax), np.nan)
    E = np.full((n, n), np.nan)
    for (i, m, j, k), v in (h or {}).items():
        H[i, m, j, k] = H[j, k, i, m] = v
    for (i, j, k), v in (b or {}).items():
        B[i, j, k] = v
    for (i, j), v in (e or {}).items():
        E[i, j] = E[j, i] = v
    return SimTables(c=c, h=H, b=B, e=E, sense_counts=counts)
