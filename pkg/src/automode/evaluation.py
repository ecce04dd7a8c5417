"""Closed-world negatives, precision/recall, and k-fold cross validation."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace
from itertools import product

from .biasgen import BiasSpec
from .clauses import HornDefinition
from .errors import ConfigError, ValidationError
from .learner import CoverageCache, LearnConfig, learn_definition
from .lgg import lgg_learn
from .relstore import DatabaseInstance, ExampleSet, RelationSchema


@dataclass(frozen=True)
class FoldMetrics:
    precision: float
    recall: float
    wall_ms: float


@dataclass(frozen=True)
class EvalReport:
    folds: int
    seed: int
    per_fold: tuple[FoldMetrics, ...]
    mean_precision: float
    mean_recall: float
    mean_wall_ms: float

    def to_dict(self) -> dict:
        return {
            "folds": self.folds,
            "seed": self.seed,
            "per_fold": [
                {"precision": f.precision, "recall": f.recall, "wall_ms": f.wall_ms}
                for f in self.per_fold
            ],
            "mean_precision": self.mean_precision,
            "mean_recall": self.mean_recall,
            "mean_wall_ms": self.mean_wall_ms,
        }


def generate_negatives(
    db: DatabaseInstance,
    positives: tuple[tuple[str, ...], ...],
    target: RelationSchema,
    ratio: int,
    seed: int,
) -> tuple[tuple[str, ...], ...]:
    """Closed-world negatives: sample from the per-position active domains.

    Position i draws from the values the positives place there, plus the
    target column's stored values when the relation is registered. Tuples
    that are positives are excluded; up to ratio * |positives| are sampled
    without replacement.
    """
    if not positives:
        raise ValidationError("cannot generate negatives without positives")
    if ratio < 1:
        raise ConfigError("negative ratio must be >= 1")
    domains: list[set[str]] = []
    for pos in range(target.arity):
        domain = {p[pos] for p in positives}
        if db.has_relation(target.name):
            domain |= {row[pos] for row in db.relation_rows(target.name)}
        domains.append(domain)
    positive_set = set(positives)
    pool = sorted(t for t in product(*domains) if t not in positive_set)
    if not pool:
        raise ValidationError(
            "closed-world pool is empty; provide explicit negative examples"
        )
    wanted = ratio * len(positives)
    if len(pool) <= wanted:
        return tuple(pool)
    rng = random.Random(seed)
    return tuple(rng.sample(pool, wanted))


def precision_recall(
    definition: HornDefinition,
    test_pos: tuple[tuple[str, ...], ...],
    test_neg: tuple[tuple[str, ...], ...],
    db: DatabaseInstance,
) -> tuple[float, float]:
    """Precision over covered examples and recall over positives.

    A definition covering nothing is vacuously precise (1.0, 0.0 recall):
    the all-rejecting case divides zero true positives by zero covered.
    """
    if set(test_pos) & set(test_neg):
        raise ValidationError("test sets overlap")
    cache = CoverageCache(db, tuple(test_pos) + tuple(test_neg))

    def covered(example: tuple[str, ...]) -> bool:
        return any(cache.covers(c, example) for c in definition.clauses)

    tp = sum(1 for e in test_pos if covered(e))
    fp = sum(1 for e in test_neg if covered(e))
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / len(test_pos) if test_pos else 0.0
    return precision, recall


def cross_validate(
    db: DatabaseInstance,
    examples: ExampleSet,
    bias: BiasSpec,
    cfg: LearnConfig,
    folds: int,
    seed: int,
    generalizer: str = "armg",
    lgg_guard: int = 10_000,
) -> EvalReport:
    """Stratified k-fold evaluation with per-fold learner seeds.

    Positives and negatives are shuffled and split independently so every
    fold keeps the global class ratio; fold k trains with rng seed
    `seed + k` and is scored on its held-out slice.
    """
    if folds < 2:
        raise ConfigError("folds must be >= 2")
    if len(examples.positives) < folds:
        raise ValidationError(
            f"{len(examples.positives)} positives cannot fill {folds} folds"
        )
    if generalizer not in ("armg", "lgg"):
        raise ConfigError(f"unknown generalizer: {generalizer}")
    rng = random.Random(seed)
    pos = list(examples.positives)
    neg = list(examples.negatives)
    rng.shuffle(pos)
    rng.shuffle(neg)
    pos_folds = _split(pos, folds)
    neg_folds = _split(neg, folds)
    metrics: list[FoldMetrics] = []
    for k in range(folds):
        train = ExampleSet(
            examples.target,
            tuple(e for i in range(folds) if i != k for e in pos_folds[i]),
            tuple(e for i in range(folds) if i != k for e in neg_folds[i]),
        )
        fold_cfg = replace(cfg, rng_seed=seed + k)
        started = time.perf_counter()
        if generalizer == "lgg":
            definition = lgg_learn(db, train, bias.predicates, fold_cfg, guard=lgg_guard)
        else:
            definition = learn_definition(db, train, bias, fold_cfg)
        wall_ms = (time.perf_counter() - started) * 1000.0
        precision, recall = precision_recall(
            definition, tuple(pos_folds[k]), tuple(neg_folds[k]), db
        )
        metrics.append(FoldMetrics(precision, recall, wall_ms))
    return EvalReport(
        folds=folds,
        seed=seed,
        per_fold=tuple(metrics),
        mean_precision=sum(m.precision for m in metrics) / folds,
        mean_recall=sum(m.recall for m in metrics) / folds,
        mean_wall_ms=sum(m.wall_ms for m in metrics) / folds,
    )


def _split(items: list, parts: int) -> list[list]:
    size, extra = divmod(len(items), parts)
    out: list[list] = []
    start = 0
    for i in range(parts):
        end = start + size + (1 if i < extra else 0)
        out.append(items[start:end])
        start = end
    return out
