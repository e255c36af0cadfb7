"""Cosine similarity tables over word and sense embeddings, and the relatedness measure.

Table layout (n words, padded to ``max_senses`` columns; padding and the
i == j diagonal hold NaN):

* ``c[i, m]``        context of word i vs its own sense m (sign kept)
* ``h[i, m, j, n]``  sense m of word i vs sense n of word j, absolute value
* ``b[i, j, n]``     context of word i vs sense n of word j, absolute value
* ``e[i, j]``        context of word i vs context of word j, absolute value
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .instance import Instance


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"cosine of vectors with different shapes {u.shape} and {v.shape}")
    val = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return min(1.0, max(-1.0, val))


@dataclass(frozen=True)
class RelatednessParams:
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 1.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True, eq=False)
class SimTables:
    c: np.ndarray
    h: np.ndarray
    b: np.ndarray
    e: np.ndarray
    sense_counts: tuple[int, ...]

    @property
    def n_words(self) -> int:
        return len(self.sense_counts)

    def c_row(self, i: int) -> np.ndarray:
        return self.c[i, : self.sense_counts[i]]

    def to_dict(self) -> dict:
        """Ragged nested lists (no padding), i == j entries as null."""
        n = self.n_words
        M = self.sense_counts

        def clean(x):
            return None if math.isnan(x) else float(x)

        return {
            "sense_counts": list(M),
            "c": [[float(x) for x in self.c_row(i)] for i in range(n)],
            "h": [[[[clean(self.h[i, m, j, k]) for k in range(M[j])] for j in range(n)]
                   for m in range(M[i])] for i in range(n)],
            "b": [[[clean(self.b[i, j, k]) for k in range(M[j])] for j in range(n)]
                  for i in range(n)],
            "e": [[clean(self.e[i, j]) for j in range(n)] for i in range(n)],
        }


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def build_sim_tables(inst: Instance) -> SimTables:
    counts = inst.sense_counts
    n, mmax = len(counts), max(counts)
    offsets = np.concatenate([[0], np.cumsum(counts)])

    ctx = _unit_rows(np.array([w.context_embedding for w in inst.words], dtype=float))
    senses = _unit_rows(
        np.array([s.embedding for w in inst.words for s in w.senses], dtype=float)
    )
    # BLAS gram matrices are not bitwise symmetric; h and e must be.
    ss = senses @ senses.T
    ss = np.clip(0.5 * (ss + ss.T), -1.0, 1.0)
    cc = ctx @ ctx.T
    cc = np.clip(0.5 * (cc + cc.T), -1.0, 1.0)
    cs = np.clip(ctx @ senses.T, -1.0, 1.0)

    c = np.full((n, mmax), np.nan)
    h = np.full((n, mmax, n, mmax), np.nan)
    b = np.full((n, n, mmax), np.nan)
    e = np.abs(cc)
    np.fill_diagonal(e, np.nan)

    for i in range(n):
        si = slice(offsets[i], offsets[i + 1])
        c[i, : counts[i]] = cs[i, si]
        for j in range(n):
            if i == j:
                continue
            sj = slice(offsets[j], offsets[j + 1])
            h[i, : counts[i], j, : counts[j]] = np.abs(ss[si, sj])
            b[i, j, : counts[j]] = np.abs(cs[i, sj])

    for arr in (c, h, b, e):
        arr.setflags(write=False)
    return SimTables(c=c, h=h, b=b, e=e, sense_counts=counts)


def relatedness(tables: SimTables, params: RelatednessParams, i: int, m: int, j: int, n: int) -> float:
    if i == j:
        raise ValueError(f"relatedness needs two different words, got i == j == {i}")
    M = tables.sense_counts
    if not (0 <= i < len(M) and 0 <= j < len(M) and 0 <= m < M[i] and 0 <= n < M[j]):
        raise IndexError(f"relatedness index out of range: ({i}, {m}, {j}, {n})")
    return float(
        params.lambda1 * (tables.b[i, j, n] + tables.b[j, i, m])
        + params.lambda2 * tables.h[i, m, j, n]
        + params.lambda3 * (tables.c[i, m] + tables.e[i, j] + tables.c[j, n])
    )


def relatedness_block(tables: SimTables, params: RelatednessParams, i: int, j: int) -> np.ndarray:
    """All r(i, m, j, n) for one word pair as an (M_i, M_j) array."""
    if i == j:
        raise ValueError(f"relatedness needs two different words, got i == j == {i}")
    mi, mj = tables.sense_counts[i], tables.sense_counts[j]
    bij = tables.b[i, j, :mj][None, :]
    bji = tables.b[j, i, :mi][:, None]
    hij = tables.h[i, :mi, j, :mj]
    ci = tables.c[i, :mi][:, None]
    cj = tables.c[j, :mj][None, :]
    return (
        params.lambda1 * (bij + bji)
        + params.lambda2 * hij
        + params.lambda3 * (ci + tables.e[i, j] + cj)
    )


def dump_sim_tables(tables: SimTables, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(tables.to_dict(), f)
