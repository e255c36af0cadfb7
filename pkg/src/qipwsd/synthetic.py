"""Seeded random instances for tests, benchmarks and demos."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .instance import Instance, SenseCandidate, TargetWord


def random_instance(
    rng: np.random.Generator | int,
    sense_counts: Sequence[int],
    dim: int = 8,
    *,
    with_gold: bool = True,
    noise: float = 0.8,
    topic: float = 0.5,
) -> Instance:
    """Gaussian sense embeddings sharing a weak topic direction.

    Each context embedding is its gold sense plus isotropic noise, so the
    per-word argmax is informative but not always right.
    """
    rng = np.random.default_rng(rng)
    topic_vec = rng.normal(size=dim)
    words, gold = [], []
    for i, m in enumerate(sense_counts):
        senses = rng.normal(size=(m, dim)) + topic * topic_vec
        g = int(rng.integers(m))
        ctx = senses[g] + noise * rng.normal(size=dim)
        words.append(TargetWord(
            word_id=f"w{i}",
            surface=f"word{i}",
            context_embedding=tuple(float(x) for x in ctx),
            senses=tuple(
                SenseCandidate(f"w{i}%{k}", tuple(float(x) for x in senses[k]))
                for k in range(m)
            ),
        ))
        gold.append(f"w{i}%{g}")
    return Instance(dim, tuple(words), tuple(gold) if with_gold else None)


def random_corpus(seed: int, n_instances: int, min_words: int = 2, max_words: int = 6,
                  min_senses: int = 1, max_senses: int = 5, dim: int = 8,
                  with_gold: bool = True) -> list[Instance]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_instances):
        n = int(rng.integers(min_words, max_words + 1))
        counts = [int(x) for x in rng.integers(min_senses, max_senses + 1, size=n)]
        out.append(random_instance(rng, counts, dim, with_gold=with_gold))
    return out
