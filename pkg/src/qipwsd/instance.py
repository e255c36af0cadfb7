"""Disambiguation instances: data types, loading, validation and serialization."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np


class InstanceFormatError(ValueError):
    """Raised when an instance file or object violates the instance format."""


@dataclass(frozen=True)
class SenseCandidate:
    sense_id: str
    embedding: tuple[float, ...]
    gloss: str | None = None


@dataclass(frozen=True)
class TargetWord:
    word_id: str
    surface: str
    context_embedding: tuple[float, ...]
    senses: tuple[SenseCandidate, ...]

    @property
    def n_senses(self) -> int:
        return len(self.senses)

    def sense_index(self, sense_id: str) -> int:
        for k, s in enumerate(self.senses):
            if s.sense_id == sense_id:
                return k
        raise KeyError(sense_id)


@dataclass(frozen=True)
class Instance:
    """One disambiguation context.

    Words keep their order of appearance; sense order inside each word is
    significant because it defines the sense index and the tie-break order.
    """

    dimension: int
    words: tuple[TargetWord, ...]
    gold: tuple[str, ...] | None = None

    def __post_init__(self):
        _validate(self)

    @property
    def sense_counts(self) -> tuple[int, ...]:
        return tuple(w.n_senses for w in self.words)

    def __len__(self) -> int:
        return len(self.words)

    def gold_choices(self) -> tuple[int, ...] | None:
        if self.gold is None:
            return None
        return tuple(w.sense_index(g) for w, g in zip(self.words, self.gold))

    def scaled(self, factor: float) -> "Instance":
        """Copy with every embedding multiplied by `factor`."""
        def mul(v):
            return tuple(factor * x for x in v)

        words = tuple(
            TargetWord(
                w.word_id,
                w.surface,
                mul(w.context_embedding),
                tuple(SenseCandidate(s.sense_id, mul(s.embedding), s.gloss) for s in w.senses),
            )
            for w in self.words
        )
        return Instance(self.dimension, words, self.gold)


@dataclass(frozen=True, order=True)
class Assignment:
    """One chosen sense index per word (the one-hot blocks of the 0-1 vector)."""

    choices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(int(k) for k in self.choices))

    def __len__(self) -> int:
        return len(self.choices)

    def to_vector(self, inst: Instance) -> np.ndarray:
        """Flattened x vector, word blocks in order."""
        x = np.zeros(sum(inst.sense_counts), dtype=np.int8)
        offset = 0
        for k, m in zip(self.choices, inst.sense_counts):
            x[offset + k] = 1
            offset += m
        return x

    def sense_ids(self, inst: Instance) -> list[str]:
        return [w.senses[k].sense_id for w, k in zip(inst.words, self.choices)]


def _check_embedding(values: Sequence[float], dim: int, what: str) -> None:
    if len(values) != dim:
        raise InstanceFormatError(
            f"dimension mismatch for {what}: expected {dim}, got {len(values)}"
        )
    if not all(math.isfinite(v) for v in values):
        raise InstanceFormatError(f"non-finite embedding component in {what}")
    if not any(v != 0.0 for v in values):
        raise InstanceFormatError(f"zero embedding for {what}")


def _validate(inst: Instance) -> None:
    if not isinstance(inst.dimension, int) or inst.dimension < 1:
        raise InstanceFormatError(f"dimension must be a positive integer, got {inst.dimension!r}")
    if len(inst.words) < 1:
        raise InstanceFormatError("instance has no words")
    seen_words = set()
    for w in inst.words:
        if w.word_id in seen_words:
            raise InstanceFormatError(f"duplicate word_id {w.word_id!r}")
        seen_words.add(w.word_id)
        _check_embedding(w.context_embedding, inst.dimension, f"word {w.word_id!r}")
        if not w.senses:
            raise InstanceFormatError(f"word {w.word_id!r} has no candidate senses")
        seen_senses = set()
        for s in w.senses:
            if s.sense_id in seen_senses:
                raise InstanceFormatError(
                    f"duplicate sense_id {s.sense_id!r} in word {w.word_id!r}"
                )
            seen_senses.add(s.sense_id)
            _check_embedding(s.embedding, inst.dimension, f"sense {s.sense_id!r} of word {w.word_id!r}")
    if inst.gold is not None:
        if len(inst.gold) != len(inst.words):
            raise InstanceFormatError(
                f"gold has {len(inst.gold)} labels for {len(inst.words)} words"
            )
        for w, g in zip(inst.words, inst.gold):
            if g not in {s.sense_id for s in w.senses}:
                raise InstanceFormatError(
                    f"gold sense {g!r} is not a candidate of word {w.word_id!r}"
                )


def validate_assignment(inst: Instance, a: Assignment | Sequence[int]) -> bool:
    choices = a.choices if isinstance(a, Assignment) else tuple(a)
    if len(choices) != len(inst.words):
        return False
    return all(
        isinstance(k, (int, np.integer)) and 0 <= k < m
        for k, m in zip(choices, inst.sense_counts)
    )


def enumerate_assignments(inst: Instance) -> Iterator[Assignment]:
    """All valid assignments in lexicographic order."""
    for choices in itertools.product(*(range(m) for m in inst.sense_counts)):
        yield Assignment(choices)


# --- serialization -------------------------------------------------------

def _floats(obj, what: str) -> tuple[float, ...]:
    if not isinstance(obj, list):
        raise InstanceFormatError(f"{what}: embedding must be an array of numbers")
    out = []
    for v in obj:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InstanceFormatError(f"{what}: embedding component {v!r} is not a number")
        out.append(float(v))
    return tuple(out)


def _string(obj, what: str) -> str:
    if not isinstance(obj, str):
        raise InstanceFormatError(f"{what} must be a string, got {obj!r}")
    return obj


def instance_from_dict(obj) -> Instance:
    if not isinstance(obj, dict):
        raise InstanceFormatError("instance must be an object")
    for key in ("dimension", "words"):
        if key not in obj:
            raise InstanceFormatError(f"missing field {key!r}")
    dim = obj["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise InstanceFormatError(f"dimension must be an integer, got {dim!r}")
    if not isinstance(obj["words"], list):
        raise InstanceFormatError("words must be an array")
    words = []
    for wi, w in enumerate(obj["words"]):
        if not isinstance(w, dict):
            raise InstanceFormatError(f"word #{wi} must be an object")
        try:
            word_id = _string(w["word_id"], f"word #{wi} word_id")
            surface = _string(w.get("surface", word_id), f"word {word_id!r} surface")
            ctx = _floats(w["context_embedding"], f"word {word_id!r}")
            raw_senses = w["senses"]
        except KeyError as exc:
            raise InstanceFormatError(f"word #{wi} missing field {exc.args[0]!r}") from None
        if not isinstance(raw_senses, list):
            raise InstanceFormatError(f"word {word_id!r}: senses must be an array")
        senses = []
        for s in raw_senses:
            if not isinstance(s, dict) or "sense_id" not in s or "embedding" not in s:
                raise InstanceFormatError(
                    f"word {word_id!r}: each sense needs sense_id and embedding"
                )
            sid = _string(s["sense_id"], f"word {word_id!r} sense_id")
            gloss = s.get("gloss")
            if gloss is not None:
                gloss = _string(gloss, f"sense {sid!r} gloss")
            senses.append(SenseCandidate(sid, _floats(s["embedding"], f"sense {sid!r}"), gloss))
        words.append(TargetWord(word_id, surface, ctx, tuple(senses)))
    gold = obj.get("gold")
    if gold is not None:
        if not isinstance(gold, list):
            raise InstanceFormatError("gold must be an array of sense ids")
        gold = tuple(_string(g, "gold label") for g in gold)
    return Instance(dim, tuple(words), gold)


def instance_to_dict(inst: Instance) -> dict:
    words = []
    for w in inst.words:
        senses = []
        for s in w.senses:
            d = {"sense_id": s.sense_id}
            if s.gloss is not None:
                d["gloss"] = s.gloss
            d["embedding"] = list(s.embedding)
            senses.append(d)
        words.append({
            "word_id": w.word_id,
            "surface": w.surface,
            "context_embedding": list(w.context_embedding),
            "senses": senses,
        })
    out = {"dimension": inst.dimension, "words": words}
    if inst.gold is not None:
        out["gold"] = list(inst.gold)
    return out


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: malformed JSON: {exc}") from None


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(_read_json(path))


def load_corpus(path: str | Path) -> list[Instance]:
    """Load a corpus file (array of instances); a single instance object is also accepted."""
    data = _read_json(path)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise InstanceFormatError(f"{path}: corpus must be an array of instances")
    out = []
    for idx, obj in enumerate(data):
        try:
            out.append(instance_from_dict(obj))
        except InstanceFormatError as exc:
            raise InstanceFormatError(f"instance {idx}: {exc}") from None
    return out


def save_instance(inst: Instance, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(instance_to_dict(inst), f, indent=1)


def save_corpus(instances: Sequence[Instance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([instance_to_dict(i) for i in instances], f, indent=1)
