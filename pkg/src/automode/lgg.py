"""Least-general generalization and the learner variant built on it.

Generalizing two clauses pairs up same-relation literals and replaces each
disagreeing term pair with one variable per distinct pair, so the body can
grow multiplicatively; every generalization step therefore deep-reduces
the result. This learner needs predicate declarations to restrict joins
but no mode definitions: constants survive exactly where both clauses
agree.
"""

from __future__ import annotations

import random
import re
from typing import Iterable

from .clauses import Clause, HornDefinition, Literal, Term, minimize, var
from .errors import ConfigError, ValidationError
from .learner import (
    CoverageCache,
    LearnConfig,
    _cover_set,
    ground_bottom_clause,
)
from .relstore import DatabaseInstance, ExampleSet

_VAR_SUFFIX = re.compile(r"^v(\d+)$")


class VarPairTable:
    """One stable fresh variable per ordered pair of distinct terms."""

    def __init__(self, reserved: Iterable[Term] = ()):
        self._pairs: dict[tuple[Term, Term], Term] = {}
        self._next = 0
        for term in reserved:
            m = _VAR_SUFFIX.match(term.symbol)
            if term.is_var and m:
                self._next = max(self._next, int(m.group(1)) + 1)

    def variable_for(self, a: Term, b: Term) -> Term:
        key = (a, b)
        if key not in self._pairs:
            self._pairs[key] = var(f"v{self._next}")
            self._next += 1
        return self._pairs[key]


def lgg_terms(a: Term, b: Term, table: VarPairTable) -> Term:
    """Identical terms stay; distinct pairs map to their shared variable."""
    if a == b:
        return a
    return table.variable_for(a, b)


def lgg_literals(a: Literal, b: Literal, table: VarPairTable) -> Literal | None:
    if a.relation != b.relation or len(a.args) != len(b.args):
        return None
    return Literal(a.relation, tuple(lgg_terms(x, y, table) for x, y in zip(a.args, b.args)))


def lgg_clauses(c1: Clause, c2: Clause, reduce: bool = True) -> Clause:
    """Pairwise generalization of compatible literals under one shared table.

    The result subsumes both inputs; with `reduce` (the default) it is also
    deep-reduced, which collapses the pairwise product back to its
    non-redundant core.
    """
    if c1.head.relation != c2.head.relation or len(c1.head.args) != len(c2.head.args):
        raise ValidationError(
            f"incompatible heads: {c1.head} vs {c2.head}"
        )
    table = VarPairTable(c1.variables() + c2.variables())
    head = lgg_literals(c1.head, c2.head, table)
    assert head is not None
    body: list[Literal] = []
    seen: set[Literal] = set()
    for l1 in c1.body:
        for l2 in c2.body:
            lit = lgg_literals(l1, l2, table)
            if lit is not None and lit not in seen:
                seen.add(lit)
                body.append(lit)
    clause = Clause(head, tuple(body))
    return minimize(clause, deep=True) if reduce else clause


def lgg_learn(
    db: DatabaseInstance,
    examples: ExampleSet,
    predicates: tuple,
    cfg: LearnConfig,
    guard: int = 10_000,
) -> HornDefinition:
    """Cover-set learning where each clause is a fold of lgg over the
    ground bottom clauses of sampled positives.

    Refuses databases above `guard` tuples: repeated generalization grows
    clauses multiplicatively and evaluation cost becomes prohibitive well
    before memory does.
    """
    total = db.total_tuples()
    if total > guard:
        raise ConfigError(
            f"database has {total} tuples, above the lgg guard of {guard}; "
            "this generalizer is only tractable on small databases - use the "
            "default generalizer or raise the guard explicitly"
        )
    target = examples.target.name
    if not db.has_relation(target):
        raise ValidationError(f"target relation not registered: {target}")
    if not any(d.relation == target for d in predicates):
        raise ValidationError(f"no predicate declaration for target {target}")

    def learn_one(
        uncovered: list[tuple[str, ...]],
        rng: random.Random,
        cache: CoverageCache,
    ) -> Clause:
        seed = uncovered[0]
        sampled = set(rng.sample(uncovered, min(cfg.sample_size, len(uncovered))))
        sampled.add(seed)
        fold = [seed] + [e for e in uncovered[1:] if e in sampled]
        clause = minimize(
            ground_bottom_clause(seed, db, target, predicates, cfg), deep=True
        )
        best = _fold_score(clause, uncovered, examples.negatives, cache)
        for example in fold[1:]:
            bottom = ground_bottom_clause(example, db, target, predicates, cfg)
            candidate = lgg_clauses(clause, bottom)
            cand_score = _fold_score(candidate, uncovered, examples.negatives, cache)
            if cand_score > best:
                clause, best = candidate, cand_score
            else:
                break
        return clause

    return _cover_set(db, examples, cfg, learn_one)


def _fold_score(clause, positives, negatives, cache: CoverageCache) -> int:
    tp = sum(1 for e in positives if cache.covers(clause, e))
    fp = sum(1 for e in negatives if cache.covers(clause, e))
    return tp - fp
