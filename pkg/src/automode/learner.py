"""Bottom-up learning of Horn definitions.

One clause at a time: saturate a seed example into its bottom clause (the
most specific clause covering it, built by walking tuples that share
constants with the clause so far), then generalize by dropping blocking
atoms until sampled positives are covered, keeping the best-scoring
clauses in a beam. Accepted clauses remove the positives they cover;
rejected seeds are discarded so the outer loop always terminates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .biasgen import BiasSpec
from .clauses import (
    Clause,
    HornDefinition,
    Literal,
    Term,
    canonical_text,
    covered_examples,
    find_witness,
    fold_singleton_literals,
    clause_with,
    covers,
    minimize,
    var,
)
from .errors import ConfigError, ValidationError
from .relstore import DatabaseInstance, ExampleSet


@dataclass(frozen=True)
class LearnConfig:
    iterations: int = 2
    beam_width: int = 3
    sample_size: int = 20
    min_precision: float = 0.5
    min_positives: int | None = None  # None: 2, or 1 for tiny example sets
    per_relation_cap: int = 100
    rng_seed: int = 1

    def __post_init__(self) -> None:
        for name in ("iterations", "beam_width", "sample_size", "per_relation_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not 0.0 < self.min_precision <= 1.0:
            raise ConfigError("min_precision must be in (0,1]")
        if self.min_positives is not None and self.min_positives < 1:
            raise ConfigError("min_positives must be >= 1")

    def resolved_min_positives(self, positive_count: int) -> int:
        if self.min_positives is not None:
            return self.min_positives
        return 2 if positive_count >= 4 else 1


@dataclass(frozen=True)
class BottomClause:
    clause: Clause
    seed: tuple[str, ...]
    var_map: dict[str, Term]


class CoverageCache:
    """Memoized coverage tests against one immutable database.

    When the queried examples are known up front (the universe), a clause is
    evaluated against all of them in one joined pass; each test is then a
    set lookup. Out-of-universe examples, and clauses whose joined
    evaluation overflows, fall back to memoized per-example tests.
    """

    _PENDING = object()

    def __init__(self, db: DatabaseInstance, universe=()):
        self.db = db
        self._universe = tuple(dict.fromkeys(universe))
        self._universe_set = frozenset(self._universe)
        self._covered: dict[Clause, object] = {}
        self._memo: dict[tuple[Clause, tuple[str, ...]], bool] = {}

    def covers(self, clause: Clause, example: tuple[str, ...]) -> bool:
        if example in self._universe_set:
            covered = self._covered.get(clause, self._PENDING)
            if covered is self._PENDING:
                covered = covered_examples(clause, self._universe, self.db)
                self._covered[clause] = covered
            if covered is not None:
                return example in covered  # type: ignore[operator]
        key = (clause, example)
        if key not in self._memo:
            self._memo[key] = covers(clause, example, self.db)
        return self._memo[key]


# -- bottom-clause construction ----------------------------------------------


def build_bottom_clause(
    example: tuple[str, ...],
    db: DatabaseInstance,
    bias: BiasSpec,
    cfg: LearnConfig,
) -> BottomClause:
    """Most specific clause covering `example`, relative to the database.

    Constants are replaced by variables through an injective map. Each
    round scans tuples sharing a constant with the previous round's
    additions; a tuple contributes one literal, shaped by the first mode it
    satisfies. A '+' position only accepts a constant that is already
    mapped and whose accumulated types intersect the position's declared
    types, which keeps every emitted join licensed by the bias.
    """
    target = bias.head_mode.relation
    if len(example) != len(bias.head_mode.symbols):
        raise ValidationError(
            f"example arity {len(example)} does not match target {target}"
        )
    state = _SaturationState(bias)
    head_args = []
    for pos, value in enumerate(example):
        head_args.append(state.bind(value, target, pos))
    head = Literal(target, tuple(head_args))
    body = _saturate(example, db, cfg, state, head_relation=target, ground=False)
    return BottomClause(Clause(head, body), tuple(example), state.var_map)


def ground_bottom_clause(
    example: tuple[str, ...],
    db: DatabaseInstance,
    target: str,
    predicates: tuple,
    cfg: LearnConfig,
) -> Clause:
    """Ground variant used by the lgg learner: constants stay constants and
    every relation is reachable through implicit one-'+' modes."""
    schema = db.schema(target)
    if len(example) != schema.arity:
        raise ValidationError(
            f"example arity {len(example)} does not match target {target}"
        )
    bias = _implicit_bias(db, target, predicates)
    state = _SaturationState(bias)
    for pos, value in enumerate(example):
        state.bind(value, target, pos)
    head = Literal(target, tuple(Term(v, False) for v in example))
    body = _saturate(example, db, cfg, state, head_relation=target, ground=True)
    return Clause(head, body)


def _implicit_bias(db: DatabaseInstance, target: str, predicates: tuple) -> BiasSpec:
    from .biasgen import ModeDecl

    modes = []
    for schema in db.schemas:
        if schema.name == target:
            continue
        for plus in range(schema.arity):
            symbols = tuple("+" if i == plus else "-" for i in range(schema.arity))
            modes.append(ModeDecl(schema.name, symbols))
    head = ModeDecl(target, ("+",) * db.schema(target).arity)
    return BiasSpec(tuple(predicates), tuple(modes), head, 1)


class _SaturationState:
    """Constant-to-variable map plus accumulated type evidence.

    `prov[c]` narrows as `c` recurs: a constant participates in a join only
    while some single type is consistent with all of its occurrences.
    """

    def __init__(self, bias: BiasSpec):
        self.bias = bias
        self.var_map: dict[str, Term] = {}
        self.prov: dict[str, frozenset[str]] = {}

    def bind(self, value: str, relation: str, position: int) -> Term:
        types = self.bias.position_types(relation, position)
        if value in self.var_map:
            self.prov[value] = self.prov[value] & types
            return self.var_map[value]
        fresh = var(f"v{len(self.var_map)}")
        self.var_map[value] = fresh
        self.prov[value] = types
        return fresh

    def try_mode(
        self, relation: str, row: tuple[str, ...], symbols: tuple[str, ...], ground: bool
    ) -> tuple[Literal, list[str]] | None:
        """Literal for `row` under one mode, or None if the mode fails.

        Also returns the constants first seen here. State commits only on
        success, so a failed mode leaves no trace.
        """
        pending: dict[str, frozenset[str]] = {}
        minted: list[str] = []
        for pos, (value, sym) in enumerate(zip(row, symbols)):
            if sym == "#":
                continue
            types_here = self.bias.position_types(relation, pos)
            previous = pending.get(value, self.prov.get(value))
            if previous is None:
                if sym == "+":
                    return None
                pending[value] = types_here
                minted.append(value)
            else:
                joined = previous & types_here
                if not joined:
                    return None
                pending[value] = joined
        self.prov.update(pending)
        if not ground:
            for value in minted:
                self.var_map[value] = var(f"v{len(self.var_map)}")
        args = tuple(
            Term(value, False) if (sym == "#" or ground) else self.var_map[value]
            for value, sym in zip(row, symbols)
        )
        return Literal(relation, args), minted


def _saturate(
    example: tuple[str, ...],
    db: DatabaseInstance,
    cfg: LearnConfig,
    state: _SaturationState,
    head_relation: str,
    ground: bool,
) -> tuple[Literal, ...]:
    body: list[Literal] = []
    emitted: set[Literal] = set()
    frontier = list(dict.fromkeys(example))
    seed = tuple(example)
    for _ in range(cfg.iterations):
        if not frontier:
            break
        frontier_set = set(frontier)
        added: list[str] = []
        for schema in db.schemas:
            modes = state.bias.modes_for(schema.name)
            if not modes:
                continue
            produced = 0
            for row in db.relation_rows(schema.name):
                if produced >= cfg.per_relation_cap:
                    break
                if schema.name == head_relation and row == seed:
                    continue  # the example must not justify itself
                if not frontier_set.intersection(row):
                    continue
                for mode in modes:
                    result = state.try_mode(schema.name, row, mode.symbols, ground)
                    if result is None:
                        continue
                    literal, minted = result
                    if literal not in emitted:
                        emitted.add(literal)
                        body.append(literal)
                        produced += 1
                        added.extend(minted)
                    break  # first satisfied mode wins
        frontier = list(dict.fromkeys(added))
    return tuple(body)


# -- generalization ------------------------------------------------------------


def armg(
    clause: Clause,
    example: tuple[str, ...],
    db: DatabaseInstance,
    hint: dict[Term, str] | None = None,
) -> Clause:
    """Drop blocking atoms until `example` is covered.

    A blocking atom is the earliest body literal whose prefix fails to
    cover the example; dropping them one at a time is equivalent to a single
    left-to-right pass that keeps each literal exactly when it is jointly
    satisfiable with the literals kept so far. Joint satisfiability only
    changes within the variable-connected component the new literal touches,
    so each decision is a local witness search. `hint` may carry a known
    satisfying assignment of the input clause (for a bottom clause, the
    saturation that built it); values consistent with it are adopted without
    search. Literals left disconnected from the head are pruned at the end.
    """
    binding: dict[Term, str] = {}
    for term, value in zip(clause.head.args, example):
        if term.is_var:
            if binding.setdefault(term, value) != value:
                raise ValidationError(
                    f"head {clause.head} cannot cover {example} at all"
                )
        elif term.symbol != value:
            raise ValidationError(f"head {clause.head} cannot cover {example} at all")
    hint = hint or {}

    kept: list[Literal] = []
    # per component: its variables, literals, and one satisfying assignment
    components: list[tuple[set[Term], list[Literal], dict[Term, str]]] = []
    for lit in clause.body:
        unbound = {a for a in lit.args if a.is_var and a not in binding}
        if not unbound:
            image = tuple(binding[a] if a.is_var else a.symbol for a in lit.args)
            if image in db.fact_set(lit.relation):
                kept.append(lit)
            continue
        merged_vars = set(unbound)
        merged_lits = [lit]
        combined = dict(binding)
        untouched: list[tuple[set[Term], list[Literal], dict[Term, str]]] = []
        for comp_vars, comp_lits, comp_witness in components:
            if comp_vars & unbound:
                merged_vars |= comp_vars
                merged_lits.extend(comp_lits)
                combined.update(comp_witness)
            else:
                untouched.append((comp_vars, comp_lits, comp_witness))
        # cheapest first: extend by hint values, then by a one-literal row
        # search; only a conflict forces re-solving the merged component
        witness = _hint_extension(lit, combined, hint, db)
        if witness is None:
            witness = find_witness([lit], combined, db)
        if witness is None:
            witness = find_witness(merged_lits, binding, db)
        if witness is not None:
            kept.append(lit)
            untouched.append((merged_vars, merged_lits, witness))
            components = untouched
        # otherwise lit is the blocking atom of the kept prefix: drop it
    kept = _head_connected(clause.head, kept)
    return clause_with(clause.head, _connected_order(clause.head, kept))


def _hint_extension(
    lit: Literal,
    combined: dict[Term, str],
    hint: dict[Term, str],
    db: DatabaseInstance,
) -> dict[Term, str] | None:
    if not hint:
        return None
    image = []
    for term in lit.args:
        if not term.is_var:
            image.append(term.symbol)
            continue
        value = combined.get(term) or hint.get(term)
        if value is None:
            return None
        image.append(value)
    if tuple(image) not in db.fact_set(lit.relation):
        return None
    witness = dict(combined)
    for term, value in zip(lit.args, image):
        if term.is_var:
            witness[term] = value
    return witness


def _connected_order(head: Literal, body: list[Literal]) -> list[Literal]:
    """Stable reorder so every literal shares a variable with what precedes it."""
    seen = set(head.variables())
    remaining = list(body)
    ordered: list[Literal] = []
    while remaining:
        pick = next(
            (i for i, lit in enumerate(remaining) if set(lit.variables()) & seen),
            None,
        )
        if pick is None:
            ordered.extend(remaining)
            break
        lit = remaining.pop(pick)
        ordered.append(lit)
        seen |= set(lit.variables())
    return ordered


def _head_connected(head: Literal, body: list[Literal]) -> list[Literal]:
    reached = set(head.variables())
    kept = [False] * len(body)
    changed = True
    while changed:
        changed = False
        for i, lit in enumerate(body):
            if kept[i]:
                continue
            lit_vars = set(lit.variables())
            if lit_vars & reached:
                kept[i] = True
                reached |= lit_vars
                changed = True
    return [lit for i, lit in enumerate(body) if kept[i]]


def score(
    clause: Clause,
    positives: tuple[tuple[str, ...], ...],
    negatives: tuple[tuple[str, ...], ...],
    db: DatabaseInstance,
    cache: CoverageCache | None = None,
) -> int:
    """Covered positives minus covered negatives."""
    cache = cache or CoverageCache(db, positives + negatives)
    tp = sum(1 for e in positives if cache.covers(clause, e))
    fp = sum(1 for e in negatives if cache.covers(clause, e))
    return tp - fp


def generalize_clause(
    bottom: BottomClause,
    positives: tuple[tuple[str, ...], ...],
    negatives: tuple[tuple[str, ...], ...],
    db: DatabaseInstance,
    cfg: LearnConfig,
    rng: random.Random | None = None,
    cache: CoverageCache | None = None,
) -> Clause:
    """Beam search over repeated blocking-atom drops.

    Each round samples positives, generalizes every beam clause toward the
    sampled examples it misses, and keeps the top clauses by score (ties:
    shorter body, then clause text). Search stops when no candidate beats
    the best score seen so far.
    """
    rng = rng if rng is not None else random.Random(cfg.rng_seed)
    cache = cache or CoverageCache(db, positives + negatives)

    def clause_score(c: Clause) -> int:
        return score(c, positives, negatives, db, cache)

    best = bottom.clause
    best_score = clause_score(best)
    beam = [best]
    pool = list(positives)
    seed_witness = {term: value for value, term in bottom.var_map.items()}
    while True:
        sample = rng.sample(pool, min(cfg.sample_size, len(pool)))
        candidates: list[Clause] = []
        seen: set[Clause] = set()
        for b in beam:
            for e in sample:
                if cache.covers(b, e):
                    continue
                if not cache.covers(clause_with(b.head, ()), e):
                    continue  # head shape (e.g. repeated variable) cannot fit e
                c = fold_singleton_literals(armg(b, e, db, hint=seed_witness))
                if c not in seen:
                    seen.add(c)
                    candidates.append(c)
        if not candidates:
            break
        ranked = sorted(
            candidates,
            key=lambda c: (-clause_score(c), len(c.body), canonical_text(c)),
        )
        top_score = clause_score(ranked[0])
        if top_score <= best_score:
            break
        best, best_score = ranked[0], top_score
        beam = ranked[: cfg.beam_width]
    return minimize(best)


# -- cover-set loop --------------------------------------------------------------


def learn_definition(
    db: DatabaseInstance,
    examples: ExampleSet,
    bias: BiasSpec,
    cfg: LearnConfig,
    deep_reduce_clauses: bool = False,
) -> HornDefinition:
    """Cover-set learning: seed, saturate, generalize, gate, repeat.

    A clause enters the definition only if its training precision reaches
    `min_precision` and it covers at least the resolved minimum of
    positives; otherwise the seed is discarded as uncoverable, which bounds
    the loop by the number of positives.
    """

    def learn_one(
        uncovered: list[tuple[str, ...]],
        rng: random.Random,
        cache: CoverageCache,
    ) -> Clause:
        bottom = build_bottom_clause(uncovered[0], db, bias, cfg)
        clause = generalize_clause(
            bottom,
            tuple(uncovered),
            examples.negatives,
            db,
            cfg,
            rng=rng,
            cache=cache,
        )
        if deep_reduce_clauses:
            clause = minimize(clause, deep=True)
        return clause

    return _cover_set(db, examples, cfg, learn_one)


def _cover_set(
    db: DatabaseInstance,
    examples: ExampleSet,
    cfg: LearnConfig,
    learn_one: Callable[[list, random.Random, CoverageCache], Clause],
) -> HornDefinition:
    positives = list(examples.positives)
    if not positives:
        return HornDefinition(())
    min_positives = cfg.resolved_min_positives(len(positives))
    rng = random.Random(cfg.rng_seed)
    cache = CoverageCache(db, examples.positives + examples.negatives)
    learned: list[Clause] = []
    uncovered = list(positives)
    while uncovered:
        seed = uncovered[0]
        clause = learn_one(uncovered, rng, cache)
        tp = sum(1 for e in examples.positives if cache.covers(clause, e))
        fp = sum(1 for e in examples.negatives if cache.covers(clause, e))
        precision = tp / (tp + fp) if tp + fp else 0.0
        if precision >= cfg.min_precision and tp >= min_positives:
            learned.append(clause)
            uncovered = [e for e in uncovered if not cache.covers(clause, e)]
            if seed in uncovered:
                uncovered.remove(seed)  # progress even if coverage went stale
        else:
            uncovered.remove(seed)
    return HornDefinition(tuple(learned))
