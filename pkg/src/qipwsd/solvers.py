"""Maximizers of the QIP objective over one-sense-per-word assignments.

All solvers break ties toward the lexicographically smallest assignment and
honour the variables fixed by margin pruning.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .instance import Assignment
from .model import QipModel, Variant, objective

DEFAULT_BRUTE_FORCE_CAP = 10**7


class SolverError(ValueError):
    """Solver cannot run on this model (wrong variant, search space too large)."""


@dataclass(frozen=True)
class SolveStats:
    nodes_explored: int = 0
    restarts: int = 0
    elapsed: float = 0.0
    sweeps: int = 0


@dataclass(frozen=True)
class SolveResult:
    assignment: Assignment
    objective: float
    optimal: bool
    stats: SolveStats = field(default_factory=SolveStats)


def _finish(model, choices, optimal, t0, **stats) -> SolveResult:
    a = Assignment(tuple(int(k) for k in choices))
    # recomputes Z and raises if a fixed variable was violated
    z = objective(model, a)
    return SolveResult(a, z, optimal, SolveStats(elapsed=time.perf_counter() - t0, **stats))


def solve_brute_force(model: QipModel, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> SolveResult:
    t0 = time.perf_counter()
    size = model.feasible_count()
    if size > cap:
        raise SolverError(f"search space of {size} assignments exceeds the cap of {cap}")
    pm = model.packed
    choices, count = kernels.brute_force(pm.C, pm.R, pm.P, pm.beta, pm.cand, pm.ncand)
    return _finish(model, choices, True, t0, nodes_explored=int(count))


def _argmax_choices(model: QipModel) -> list[int]:
    out = []
    for i, row in enumerate(model.linear):
        allowed = model.allowed(i)
        out.append(allowed[int(np.argmax(row[allowed]))])
    return out


def solve_qip_r(model: QipModel) -> SolveResult:
    """Per-word argmax of the sense-word similarity; exact when there is no interaction term."""
    t0 = time.perf_counter()
    if model.has_interactions:
        raise SolverError("the per-word argmax is only exact with beta = 0 or the qipr variant")
    nodes = sum(len(model.allowed(i)) for i in range(model.n_words))
    return _finish(model, _argmax_choices(model), True, t0, nodes_explored=nodes)


def solve_chain_dp(model: QipModel) -> SolveResult:
    """Exact O(|V| M^2) dynamic program for the adjacent-pairs variant."""
    t0 = time.perf_counter()
    if model.variant is Variant.FULL:
        raise SolverError("chain dynamic programming needs the adjacent variant")
    pm = model.packed
    choices = kernels.chain_dp(pm.C, pm.R, pm.beta, pm.cand, pm.ncand)
    nodes = sum(len(model.allowed(i)) for i in range(model.n_words))
    return _finish(model, choices, True, t0, nodes_explored=nodes)


def coordinate_ascent(model: QipModel, start) -> tuple[tuple[int, ...], int, list[float]]:
    """One ascent run from `start`: (final choices, sweeps, objective after each sweep)."""
    pm = model.packed
    choices, sweeps, trace = kernels.coordinate_ascent(
        pm.C, pm.R, pm.P, pm.beta, pm.cand, pm.ncand, np.asarray(start, dtype=np.int64)
    )
    return tuple(int(k) for k in choices), int(sweeps), list(trace)


def solve_local_search(model: QipModel, seed: int = 0, restarts: int = 8) -> SolveResult:
    """Coordinate ascent from the argmax assignment, then from seeded random starts.

    `restarts` counts ascent runs in total; the first always starts from the
    per-word argmax. The best run wins, ties going to the smaller assignment.
    """
    t0 = time.perf_counter()
    restarts = max(1, int(restarts))
    rng = np.random.default_rng(seed)
    pm = model.packed
    best, best_z = None, -math.inf
    sweeps = 0
    for run in range(restarts):
        if run == 0:
            start = _argmax_choices(model)
        else:
            start = [int(pm.cand[i, rng.integers(pm.ncand[i])]) for i in range(model.n_words)]
        choices, s, trace = coordinate_ascent(model, start)
        sweeps += s
        z = trace[-1]
        if best is None:
            best, best_z = choices, z
            continue
        tol = kernels.tie_tol(best_z)
        if z > best_z + tol or (abs(z - best_z) <= tol and choices < best):
            best, best_z = choices, z
    return _finish(model, best, False, t0, restarts=restarts, sweeps=sweeps)


def solve_branch_and_bound(model: QipModel, seed: int = 0, restarts: int = 1) -> SolveResult:
    """Exact depth-first branch and bound.

    Words are branched in descending order of sense count, then index. The
    bound adds, for every open word, its best sense score given the words
    already fixed plus the most favourable interaction with each later open
    word. A local-search solution seeds the incumbent.
    """
    t0 = time.perf_counter()
    pm = model.packed
    if int(pm.ncand.max()) == 1:
        return _finish(model, pm.cand[:, 0], True, t0, nodes_explored=1)
    incumbent = solve_local_search(model, seed=seed, restarts=restarts).assignment.choices
    counts = model.sense_counts
    order = sorted(range(model.n_words), key=lambda i: (-counts[i], i))
    choices, nodes = kernels.branch_and_bound(
        pm.C, pm.R, pm.P, pm.beta, pm.cand, pm.ncand,
        np.asarray(order, dtype=np.int64), np.asarray(incumbent, dtype=np.int64),
    )
    return _finish(model, choices, True, t0, nodes_explored=int(nodes), restarts=restarts)


SOLVERS = {
    "brute": solve_brute_force,
    "bnb": solve_branch_and_bound,
    "dp": solve_chain_dp,
    "qipr": solve_qip_r,
    "local": solve_local_search,
}
