"""The quadratic 0-1 semi-assignment model: assembly, objective, margin pruning."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .instance import Assignment, Instance
from .similarity import RelatednessParams, SimTables, relatedness_block


class Variant(str, enum.Enum):
    FULL = "full"          # every unordered word pair interacts
    ADJACENT = "adjacent"  # consecutive words only
    QIP_R = "qipr"         # no interaction term


class FixedVariableError(ValueError):
    """An assignment contradicts a variable fixed by margin pruning."""


@dataclass(frozen=True)
class SolverConfig:
    beta: float = 1.0
    theta: float = 1.0
    params: RelatednessParams = field(default_factory=RelatednessParams)
    variant: Variant = Variant.FULL

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")


@dataclass(frozen=True, eq=False)
class PackedModel:
    """Dense padded arrays handed to the solver kernels."""

    C: np.ndarray      # (n, mmax) float64
    R: np.ndarray      # (n, mmax, n, mmax) float64, r for interacting pairs, both orientations
    P: np.ndarray      # (n, n) uint8, 1 where i < j interact
    beta: float
    cand: np.ndarray   # (n, mmax) int64, allowed sense indices per word
    ncand: np.ndarray  # (n,) int64


@dataclass(frozen=True, eq=False)
class QipModel:
    linear: tuple[np.ndarray, ...]
    quadratic: dict[tuple[int, int], np.ndarray]
    beta: float
    fixed: frozenset[tuple[int, int]]
    variant: Variant

    @property
    def n_words(self) -> int:
        return len(self.linear)

    @property
    def sense_counts(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.linear)

    @cached_property
    def fixed_map(self) -> dict[int, int]:
        return dict(self.fixed)

    @property
    def has_interactions(self) -> bool:
        return self.beta != 0.0 and bool(self.quadratic)

    def allowed(self, i: int) -> list[int]:
        k = self.fixed_map.get(i)
        return [k] if k is not None else list(range(len(self.linear[i])))

    def feasible_count(self) -> int:
        return math.prod(len(self.allowed(i)) for i in range(self.n_words))

    @cached_property
    def packed(self) -> PackedModel:
        n = self.n_words
        counts = self.sense_counts
        mmax = max(counts)
        C = np.zeros((n, mmax))
        for i, row in enumerate(self.linear):
            C[i, : len(row)] = row
        R = np.zeros((n, mmax, n, mmax))
        P = np.zeros((n, n), dtype=np.uint8)
        for (i, j), block in self.quadratic.items():
            R[i, : counts[i], j, : counts[j]] = block
            R[j, : counts[j], i, : counts[i]] = block.T
            P[i, j] = 1
        cand = np.zeros((n, mmax), dtype=np.int64)
        ncand = np.zeros(n, dtype=np.int64)
        for i in range(n):
            allowed = self.allowed(i)
            cand[i, : len(allowed)] = allowed
            ncand[i] = len(allowed)
        return PackedModel(C, R, P, float(self.beta), cand, ncand)


def interacting_pairs(n: int, variant: Variant) -> list[tuple[int, int]]:
    if variant is Variant.FULL:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if variant is Variant.ADJACENT:
        return [(i, i + 1) for i in range(n - 1)]
    return []


def apply_theta_pruning(tables: SimTables, theta: float) -> frozenset[tuple[int, int]]:
    """Fix words whose best sense beats the runner-up by a relative margin of at least theta.

    Single-sense words are always fixed. Words whose best similarity is not
    positive are never fixed, since the relative margin is then meaningless.
    theta = 1 switches pruning off entirely, even for margins above 1 (which
    occur when the runner-up similarity is negative).
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    fixed = set()
    for i in range(tables.n_words):
        row = tables.c_row(i)
        best = int(np.argmax(row))
        if len(row) == 1:
            fixed.add((i, 0))
            continue
        top, second = np.sort(row)[::-1][:2]
        if theta < 1.0 and top > 0 and (top - second) / top >= theta:
            fixed.add((i, best))
    return frozenset(fixed)


def build_model(inst: Instance, tables: SimTables, cfg: SolverConfig) -> QipModel:
    if tables.sense_counts != inst.sense_counts:
        raise ValueError("similarity tables do not match the instance")
    n = len(inst.words)
    linear = tuple(np.array(tables.c_row(i)) for i in range(n))
    quadratic = {
        (i, j): relatedness_block(tables, cfg.params, i, j)
        for i, j in interacting_pairs(n, cfg.variant)
    }
    for block in quadratic.values():
        block.setflags(write=False)
        if not np.all(np.isfinite(block)):
            raise ValueError("non-finite relatedness coefficient")
    return QipModel(
        linear=linear,
        quadratic=quadratic,
        beta=float(cfg.beta),
        fixed=apply_theta_pruning(tables, cfg.theta),
        variant=cfg.variant,
    )


def _choices(a) -> tuple[int, ...]:
    return a.choices if isinstance(a, Assignment) else tuple(int(k) for k in a)


def check_fixed(model: QipModel, a) -> None:
    choices = _choices(a)
    for i, k in model.fixed_map.items():
        if choices[i] != k:
            raise FixedVariableError(
                f"word {i} is fixed to sense {k} but the assignment chooses {choices[i]}"
            )


def objective(model: QipModel, a, *, check: bool = True) -> float:
    """Z = sum of chosen c + beta * sum over interacting pairs i < j of r.

    The summation order (words ascending, then pairs lexicographically) is
    shared with the compiled kernels so both produce identical doubles.
    """
    choices = _choices(a)
    if len(choices) != model.n_words or any(
        not 0 <= k < m for k, m in zip(choices, model.sense_counts)
    ):
        raise ValueError(f"invalid assignment {choices} for sense counts {model.sense_counts}")
    if check:
        check_fixed(model, choices)
    lin = 0.0
    for i, k in enumerate(choices):
        lin += float(model.linear[i][k])
    quad = 0.0
    for (i, j) in sorted(model.quadratic):
        quad += float(model.quadratic[(i, j)][choices[i], choices[j]])
    return lin + model.beta * quad
