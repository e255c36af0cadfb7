"""Layered concept-network paths and their dependence on the disambiguation order.

A path visits one chosen sense per word, in some word order, between two
weightless virtual endpoints. Its length adds each word's sense-word
similarity and the sense-sense similarity of every consecutive pair on the
path, so permuting the word order changes which sense-sense edges exist.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .instance import Assignment, Instance, validate_assignment
from .similarity import SimTables


def path_length(inst: Instance, tables: SimTables, order, a) -> float:
    order = [int(i) for i in order]
    n = len(inst.words)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of the {n} words")
    choices = a.choices if isinstance(a, Assignment) else tuple(a)
    if not validate_assignment(inst, choices):
        raise ValueError(f"invalid assignment {choices}")
    first = order[0]
    total = float(tables.c[first, choices[first]])
    for prev, cur in zip(order, order[1:]):
        total += float(tables.h[prev, choices[prev], cur, choices[cur]])
        total += float(tables.c[cur, choices[cur]])
    return total


@dataclass(frozen=True)
class OrderReport:
    rows: tuple[tuple[tuple[int, ...], float], ...]
    exhaustive: bool

    @property
    def lengths(self) -> np.ndarray:
        return np.array([length for _, length in self.rows])

    @property
    def min(self) -> float:
        return float(self.lengths.min())

    @property
    def max(self) -> float:
        return float(self.lengths.max())

    @property
    def spread(self) -> float:
        return self.max - self.min

    def n_distinct(self, tol: float = 1e-12) -> int:
        vals = np.sort(self.lengths)
        return 1 + int(np.count_nonzero(np.diff(vals) > tol))


def demonstrate_order_dependence(
    inst: Instance,
    tables: SimTables,
    a,
    *,
    max_orders: int = 40320,
    seed: int = 0,
) -> OrderReport:
    """Path length of assignment `a` under every word order.

    Above `max_orders` permutations, a seeded sample of distinct orders is
    taken instead (identity order always included).
    """
    n = len(inst.words)
    if math.factorial(n) <= max_orders:
        orders = list(itertools.permutations(range(n)))
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        seen = {tuple(range(n))}
        orders = [tuple(range(n))]
        while len(orders) < max_orders:
            perm = tuple(int(x) for x in rng.permutation(n))
            if perm not in seen:
                seen.add(perm)
                orders.append(perm)
        exhaustive = False
    rows = tuple((o, path_length(inst, tables, o, a)) for o in orders)
    return OrderReport(rows=rows, exhaustive=exhaustive)
