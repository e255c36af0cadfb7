"""Corpus pipeline: load, build tables and model, solve, score against gold, report."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from .instance import Instance, load_corpus
from .model import SolverConfig, Variant, build_model
from .similarity import build_sim_tables
from .solvers import SOLVERS, SolveResult, SolverError

TIMING_FIELDS = ("elapsed",)


class IncompatibleSolverError(SolverError):
    """The requested solver cannot handle the configured variant or beta."""


class CorpusMismatchError(ValueError):
    """Two reports were not produced from the same corpus."""


def check_compatible(cfg: SolverConfig, solver: str) -> None:
    if solver not in SOLVERS:
        raise IncompatibleSolverError(f"unknown solver {solver!r}; choose from {sorted(SOLVERS)}")
    if solver == "dp" and cfg.variant is Variant.FULL:
        raise IncompatibleSolverError("solver 'dp' needs --variant adjacent (or qipr)")
    if solver == "qipr" and not (cfg.variant is Variant.QIP_R or cfg.beta == 0.0):
        raise IncompatibleSolverError("solver 'qipr' needs --variant qipr or --beta 0")


def solve_instance(inst: Instance, cfg: SolverConfig, solver: str = "bnb",
                   seed: int = 0, restarts: int = 8) -> SolveResult:
    check_compatible(cfg, solver)
    model = build_model(inst, build_sim_tables(inst), cfg)
    if solver in ("local", "bnb"):
        return SOLVERS[solver](model, seed=seed, restarts=restarts)
    return SOLVERS[solver](model)


@dataclass
class EvalReport:
    config: dict[str, Any]
    records: list[dict[str, Any]]
    aggregate: dict[str, Any]

    def to_dict(self) -> dict:
        return {"config": self.config, "records": self.records, "aggregate": self.aggregate}

    @classmethod
    def from_dict(cls, obj: dict) -> "EvalReport":
        return cls(obj["config"], obj["records"], obj["aggregate"])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def canonical(self) -> dict:
        """Report dict with timing fields removed; equal across identical runs."""
        d = json.loads(json.dumps(self.to_dict()))
        for rec in d["records"]:
            for key in TIMING_FIELDS:
                rec["stats"].pop(key, None)
        return d


def _record(index: int, inst: Instance, res: SolveResult) -> dict:
    rec = {
        "index": index,
        "word_ids": [w.word_id for w in inst.words],
        "assignment": res.assignment.sense_ids(inst),
        "choices": list(res.assignment.choices),
        "objective": res.objective,
        "optimal": res.optimal,
        "stats": asdict(res.stats),
    }
    if inst.gold is not None:
        rec["gold"] = list(inst.gold)
        rec["correct"] = sum(a == g for a, g in zip(rec["assignment"], inst.gold))
    return rec


def evaluate_corpus(instances: list[Instance], cfg: SolverConfig, solver: str = "bnb",
                    seed: int = 0, restarts: int = 8) -> EvalReport:
    check_compatible(cfg, solver)
    records = []
    for idx, inst in enumerate(instances):
        try:
            res = solve_instance(inst, cfg, solver, seed=seed, restarts=restarts)
        except SolverError as exc:
            raise type(exc)(f"instance {idx}: {exc}") from None
        records.append(_record(idx, inst, res))
    aggregate = {"instances": len(records), "words": sum(len(r["choices"]) for r in records)}
    if records and all("gold" in r for r in records):
        aggregate["correct"] = sum(r["correct"] for r in records)
        aggregate["accuracy"] = aggregate["correct"] / aggregate["words"]
    config = {
        "lambda1": cfg.params.lambda1,
        "lambda2": cfg.params.lambda2,
        "lambda3": cfg.params.lambda3,
        "beta": cfg.beta,
        "theta": cfg.theta,
        "variant": cfg.variant.value,
        "solver": solver,
        "seed": seed,
        "restarts": restarts,
    }
    return EvalReport(config, records, aggregate)


def run_pipeline(corpus: str | Path, cfg: SolverConfig, solver: str = "bnb",
                 out: str | Path | None = None, seed: int = 0, restarts: int = 8) -> EvalReport:
    check_compatible(cfg, solver)
    report = evaluate_corpus(load_corpus(corpus), cfg, solver, seed=seed, restarts=restarts)
    if out is not None:
        report.write(out)
    return report


def compare_runs(a: EvalReport, b: EvalReport) -> dict:
    """Per-word agreement, per-instance objective deltas (b minus a), and disagreements."""
    if len(a.records) != len(b.records):
        raise CorpusMismatchError(
            f"reports cover {len(a.records)} and {len(b.records)} instances"
        )
    words = agree = 0
    deltas, disagreements = [], []
    for ra, rb in zip(a.records, b.records):
        if len(ra["assignment"]) != len(rb["assignment"]):
            raise CorpusMismatchError(
                f"instance {ra['index']} has {len(ra['assignment'])} vs {len(rb['assignment'])} words"
            )
        deltas.append(rb["objective"] - ra["objective"])
        for w, (sa, sb) in enumerate(zip(ra["assignment"], rb["assignment"])):
            words += 1
            if sa == sb:
                agree += 1
            else:
                disagreements.append({
                    "instance": ra["index"],
                    "word_index": w,
                    "word_id": ra.get("word_ids", [None] * (w + 1))[w],
                    "a": sa,
                    "b": sb,
                })
    return {
        "instances": len(a.records),
        "words": words,
        "agreements": agree,
        "agreement_rate": agree / words if words else 1.0,
        "objective_deltas": deltas,
        "disagreements": disagreements,
    }
