"""Clause representation and evaluation.

A clause is one head literal plus an ordered body of literals over
variables and string constants. Coverage of an example relative to a
database is an existential substitution check: the body splits into
subgoals that share no unbound variable, each solved by backtracking over
indexed candidate rows (arc-consistent domain filtering first on wide
subgoals), with example-independent subgoal results memoized on the
database instance. Whole clauses can also be evaluated against a set of
examples in one joined pass. Clause-to-clause subsumption backs the deep
reduction used to keep generalized clauses small.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, TYPE_CHECKING

from .errors import ValidationError

if TYPE_CHECKING:  # pragma: no cover
    from .biasgen import BiasSpec
    from .relstore import DatabaseInstance


@dataclass(frozen=True, order=True)
class Term:
    symbol: str
    is_var: bool

    def __post_init__(self) -> None:
        # terms are hashed constantly (bindings, memo keys): compute once
        object.__setattr__(self, "_hash", hash((self.symbol, self.is_var)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]


def var(name: str) -> Term:
    return Term(name, True)


def const(value: str) -> Term:
    return Term(value, False)


@dataclass(frozen=True, order=True)
class Literal:
    relation: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.relation, self.args)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def variables(self) -> tuple[Term, ...]:
        return tuple(a for a in self.args if a.is_var)

    def __str__(self) -> str:
        return f"{self.relation}({','.join(_render_term(a) for a in self.args)})"


@dataclass(frozen=True)
class Clause:
    head: Literal
    body: tuple[Literal, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.head, self.body)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def variables(self) -> tuple[Term, ...]:
        seen: dict[Term, None] = {}
        for lit in (self.head, *self.body):
            for t in lit.variables():
                seen.setdefault(t)
        return tuple(seen)

    def __str__(self) -> str:
        return render_clause(self)


@dataclass(frozen=True)
class HornDefinition:
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        heads = {(c.head.relation, len(c.head.args)) for c in self.clauses}
        if len(heads) > 1:
            raise ValidationError(f"clauses disagree on the head relation: {heads}")

    def __str__(self) -> str:
        return "\n".join(render_clause(c) for c in self.clauses)


# -- text format ----------------------------------------------------------
#
#   advisedBy(v0,v1) :- student(v0), inPhase(v0,"post_quals").
#
# Variables are bare identifiers, constants are double-quoted.

_TERM_RE = re.compile(r'\s*(?:"((?:[^"\\]|\\.)*)"|([A-Za-z_][A-Za-z0-9_]*))\s*')
_LIT_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\(")


def _render_term(t: Term) -> str:
    if t.is_var:
        return t.symbol
    escaped = t.symbol.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def render_clause(clause: Clause) -> str:
    head = str(clause.head)
    if not clause.body:
        return f"{head}."
    return f"{head} :- {', '.join(str(l) for l in clause.body)}."


def canonical_text(clause: Clause) -> str:
    """Render with variables renamed V0,V1,... in first-occurrence order."""
    mapping: dict[Term, Term] = {}
    for lit in (clause.head, *clause.body):
        for t in lit.args:
            if t.is_var and t not in mapping:
                mapping[t] = var(f"V{len(mapping)}")
    return render_clause(apply_renaming(clause, mapping))


def apply_renaming(clause: Clause, mapping: dict[Term, Term]) -> Clause:
    def sub(lit: Literal) -> Literal:
        return Literal(lit.relation, tuple(mapping.get(a, a) for a in lit.args))

    return Clause(sub(clause.head), tuple(sub(l) for l in clause.body))


def parse_clause(text: str) -> Clause:
    text = text.strip()
    if not text.endswith("."):
        raise ValidationError(f"clause must end with '.': {text!r}")
    text = text[:-1]
    if ":-" in text:
        head_part, body_part = text.split(":-", 1)
    else:
        head_part, body_part = text, ""
    head = _parse_literal_list(head_part)
    if len(head) != 1:
        raise ValidationError(f"expected exactly one head literal: {text!r}")
    return Clause(head[0], tuple(_parse_literal_list(body_part)))


def _parse_literal_list(text: str) -> list[Literal]:
    out: list[Literal] = []
    pos = 0
    while pos < len(text):
        m = _LIT_RE.match(text, pos)
        if not m:
            if text[pos:].strip(", "):
                raise ValidationError(f"cannot parse literals at {text[pos:]!r}")
            break
        relation = m.group(1)
        pos = m.end()
        args: list[Term] = []
        while True:
            t = _TERM_RE.match(text, pos)
            if not t:
                raise ValidationError(f"cannot parse term at {text[pos:]!r}")
            if t.group(1) is not None:
                args.append(const(t.group(1).replace('\\"', '"').replace("\\\\", "\\")))
            else:
                args.append(var(t.group(2)))
            pos = t.end()
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == ")":
                pos += 1
                break
            raise ValidationError(f"expected ',' or ')' at {text[pos:]!r}")
        out.append(Literal(relation, tuple(args)))
        while pos < len(text) and text[pos] in ", ":
            pos += 1
    return out


# -- coverage against a database ------------------------------------------


def covers(clause: Clause, example: tuple[str, ...], db: "DatabaseInstance") -> bool:
    """True iff some substitution maps the head onto `example` and every
    body literal onto a stored tuple."""
    if len(example) != len(clause.head.args):
        raise ValidationError(
            f"example arity {len(example)} does not match head {clause.head}"
        )
    for lit in clause.body:
        if not db.has_relation(lit.relation):
            raise ValidationError(f"clause relation missing from database: {lit.relation}")
    binding: dict[Term, str] = {}
    for term, value in zip(clause.head.args, example):
        if term.is_var:
            if binding.setdefault(term, value) != value:
                return False
        elif term.symbol != value:
            return False
    return _satisfiable(list(clause.body), binding, db)


def _satisfiable(
    body: list[Literal], binding: dict[Term, str], db: "DatabaseInstance"
) -> bool:
    return find_witness(body, binding, db) is not None


def find_witness(
    literals, binding: dict[Term, str], db: "DatabaseInstance"
) -> dict[Term, str] | None:
    """A satisfying assignment for the conjunction under `binding`, or None.

    Fully bound literals are membership tests; the rest split into
    subproblems that share no unbound variable and are solved independently.
    A component's outcome depends only on its literals with bound values
    substituted in, so per-component assignments (or refutations) are
    memoized on the database and recur across examples, clauses, and
    prefixes.
    """
    pending: list[Literal] = []
    for lit in literals:
        if any(a.is_var and a not in binding for a in lit.args):
            pending.append(lit)
        elif _image(lit, binding) not in db.fact_set(lit.relation):
            return None
    if not pending:
        return dict(binding)
    components = _components(pending, binding)
    components.sort(key=len)
    out = dict(binding)
    memo = _sat_memo(db)
    for component in components:
        if len(component) < 2:
            # singletons are cheaper to solve than to key
            solved = _solve_component(component, binding, db)
            if solved is None:
                return None
            out.update(solved)
            continue
        key = frozenset(_component_key(lit, binding) for lit in component)
        hit = memo.get(key)
        if hit is None:
            solved = _solve_component(component, binding, db)
            if len(memo) > 100_000:
                memo.clear()
            if solved is None:
                memo[key] = False
            else:
                # store only this component's variables: the assignment is
                # valid for any caller whose substituted literals match
                memo[key] = {t: v for t, v in solved.items() if t not in binding}
            hit = memo[key]
        if hit is False:
            return None
        out.update(hit)
    return out


def _component_key(lit: Literal, binding: dict[Term, str]) -> tuple:
    # constants and bound variables both reduce to their value string;
    # unbound variables stay as terms (their names matter for the stored
    # assignment)
    return (
        lit.relation,
        tuple(
            (binding.get(a, a) if a.is_var else a.symbol) for a in lit.args
        ),
    )


def _solve_component(
    body: list[Literal], binding: dict[Term, str], db: "DatabaseInstance"
) -> dict[Term, str] | None:
    # arc consistency pays for itself on wide components; small ones are
    # cheaper to refute by plain search (and usually come from the memo)
    if len(body) >= 8:
        candidates = _consistent_candidates(body, binding, db)
    else:
        candidates = []
        for lit in body:
            bound = {
                pos: (binding[a] if a.is_var else a.symbol)
                for pos, a in enumerate(lit.args)
                if not a.is_var or a in binding
            }
            rows = db.matching_rows(lit.relation, bound)
            if not rows:
                return None
            candidates.append(rows)
    if candidates is None:
        return None
    best_index = min(range(len(body)), key=lambda i: len(candidates[i]))
    lit = body[best_index]
    rest = body[:best_index] + body[best_index + 1 :]
    for row in candidates[best_index]:
        extended = _extend(lit, row, binding)
        if extended is None:
            continue
        if not rest:
            return extended
        solved = find_witness(rest, extended, db)
        if solved is not None:
            return solved
    return None


def _consistent_candidates(
    body: list[Literal], binding: dict[Term, str], db: "DatabaseInstance"
) -> list | None:
    """Per-literal candidate rows after arc-consistent domain filtering.

    Every variable's domain shrinks to the values some candidate row of
    each of its literals supports; literals re-filter only when one of
    their variables narrowed. An emptied domain (or literal) refutes the
    component without search.
    """
    candidates: list[list[tuple[str, ...]]] = []
    open_positions: list[list[tuple[int, Term]]] = []
    literals_of: dict[Term, list[int]] = {}
    for i, lit in enumerate(body):
        bound = {
            pos: (binding[a] if a.is_var else a.symbol)
            for pos, a in enumerate(lit.args)
            if not a.is_var or a in binding
        }
        rows = db.matching_rows(lit.relation, bound)
        if not rows:
            return None
        candidates.append(list(rows))
        opens = [
            (pos, a)
            for pos, a in enumerate(lit.args)
            if a.is_var and a not in binding
        ]
        open_positions.append(opens)
        for _, a in opens:
            literals_of.setdefault(a, []).append(i)
    if len(body) == 1:
        return candidates
    domains: dict[Term, set[str]] = {}
    queue = list(range(len(body)))
    queued = set(queue)
    while queue:
        i = queue.pop()
        queued.discard(i)
        opens = open_positions[i]
        checks = [
            (pos, domains[a]) for pos, a in opens if a in domains
        ]
        if checks:
            filtered = [
                row
                for row in candidates[i]
                if all(row[pos] in domain for pos, domain in checks)
            ]
        else:
            filtered = candidates[i]
        if not filtered:
            return None
        candidates[i] = filtered
        for pos, a in opens:
            supported = {row[pos] for row in filtered}
            current = domains.get(a)
            if current is not None and len(supported) >= len(current):
                continue  # filtered rows only draw from the current domain
            domains[a] = supported
            for j in literals_of[a]:
                if j != i and j not in queued:
                    queue.append(j)
                    queued.add(j)
    return candidates


def _sat_memo(db: "DatabaseInstance") -> dict:
    memo = db.__dict__.get("_component_sat")
    if memo is None:
        memo = {}
        object.__setattr__(db, "_component_sat", memo)
    return memo


def _image(lit: Literal, binding: dict[Term, str]) -> tuple[str, ...]:
    return tuple(binding[a] if a.is_var else a.symbol for a in lit.args)


def _components(
    literals: list[Literal], binding: dict[Term, str]
) -> list[list[Literal]]:
    parent = list(range(len(literals)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    home: dict[Term, int] = {}
    for i, lit in enumerate(literals):
        for a in lit.args:
            if a.is_var and a not in binding:
                j = home.setdefault(a, i)
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[Literal]] = {}
    for i, lit in enumerate(literals):
        groups.setdefault(find(i), []).append(lit)
    return list(groups.values())


def _extend(
    lit: Literal, row: tuple[str, ...], binding: dict[Term, str]
) -> dict[Term, str] | None:
    out = binding
    copied = False
    for term, value in zip(lit.args, row):
        if not term.is_var:
            if term.symbol != value:
                return None
            continue
        known = out.get(term)
        if known is None:
            if not copied:
                out = dict(out)
                copied = True
            out[term] = value
        elif known != value:
            return None
    return out


def covers_definition(
    definition: HornDefinition, example: tuple[str, ...], db: "DatabaseInstance"
) -> bool:
    return any(covers(c, example, db) for c in definition.clauses)


# -- whole-clause evaluation --------------------------------------------------


def covered_examples(
    clause: Clause,
    examples,
    db: "DatabaseInstance",
    cap: int = 500_000,
) -> frozenset[tuple[str, ...]] | None:
    """The subset of `examples` the clause covers, computed in one pass.

    The example tuples join the body as one more relation over the head
    variables, so every intermediate stays anchored to examples actually
    asked about; non-head variables are then eliminated cheapest-first.
    Returns None when an intermediate join exceeds `cap` rows (callers fall
    back to per-example tests).
    """
    head_vars = tuple(dict.fromkeys(clause.head.variables()))
    example_rows: dict[tuple[str, ...], tuple[str, ...]] = {}
    for example in examples:
        assignment: dict[Term, str] = {}
        ok = len(example) == len(clause.head.args)
        for term, value in zip(clause.head.args, example):
            if not ok:
                break
            if term.is_var:
                ok = assignment.setdefault(term, value) == value
            else:
                ok = term.symbol == value
        if ok:
            example_rows[tuple(assignment[v] for v in head_vars)] = tuple(example)
    factors: list[tuple[tuple[Term, ...], set[tuple[str, ...]]]] = [
        (head_vars, set(example_rows))
    ]
    for lit in clause.body:
        if not db.has_relation(lit.relation):
            raise ValidationError(f"clause relation missing from database: {lit.relation}")
        factor_vars = tuple(dict.fromkeys(lit.variables()))
        rows: set[tuple[str, ...]] = set()
        for row in db.relation_rows(lit.relation):
            seen: dict[Term, str] = {}
            ok = True
            for term, value in zip(lit.args, row):
                if not term.is_var:
                    if term.symbol != value:
                        ok = False
                        break
                elif seen.setdefault(term, value) != value:
                    ok = False
                    break
            if ok:
                rows.add(tuple(seen[v] for v in factor_vars))
        if not factor_vars:
            if not rows:
                return frozenset()  # ground literal absent: covers nothing
            continue
        if not rows:
            return frozenset()
        factors.append((factor_vars, rows))
    _reduce_domains(factors)
    while len(factors) > 1 or (factors and set(factors[0][0]) - set(head_vars)):
        v = _cheapest_variable(factors, set(head_vars))
        if v is None:
            # only head variables left in several factors: join them up
            factors.sort(key=lambda f: len(f[1]))
            joined = factors[0]
            for factor in factors[1:]:
                joined = _join_factors(joined, factor, cap)
                if joined is None:
                    return None
            factors = [joined]
            break
        touching = sorted(
            (f for f in factors if v in f[0]), key=lambda f: len(f[1])
        )
        rest = [f for f in factors if v not in f[0]]
        joined = touching[0]
        for factor in touching[1:]:
            joined = _join_factors(joined, factor, cap)
            if joined is None:
                return None
        factors = rest + [_project_out(joined, v)]
        if not factors[-1][1]:
            return frozenset()  # the component is unsatisfiable
    if not factors:
        return frozenset(example_rows.values())
    out_vars, rows = factors[0]
    index = [out_vars.index(v) for v in head_vars]
    covered = frozenset(
        example_rows[key]
        for key in (tuple(row[i] for i in index) for row in rows)
        if key in example_rows
    )
    return covered


def _reduce_domains(factors) -> None:
    """Shrink every factor to rows whose values all appear in every other
    factor sharing the variable (cheap semi-join reduction)."""
    domains: dict[Term, set[str]] = {}
    changed = True
    while changed:
        changed = False
        for factor_vars, rows in factors:
            for i, v in enumerate(factor_vars):
                values = {row[i] for row in rows}
                current = domains.get(v)
                narrowed = values if current is None else current & values
                if current is None or len(narrowed) < len(current):
                    domains[v] = narrowed
                    changed = True
        for k, (factor_vars, rows) in enumerate(factors):
            kept = {
                row
                for row in rows
                if all(row[i] in domains[v] for i, v in enumerate(factor_vars))
            }
            if len(kept) < len(rows):
                factors[k] = (factor_vars, kept)
                changed = True


def _cheapest_variable(factors, keep: set[Term]) -> Term | None:
    # variables in a single factor project away for free; otherwise prefer
    # the variable whose touching factors bound the join most tightly
    sizes: dict[Term, list[int]] = {}
    for factor_vars, rows in factors:
        for v in factor_vars:
            if v not in keep:
                sizes.setdefault(v, []).append(len(rows))
    best: Term | None = None
    best_cost: tuple | None = None
    for v, touched in sorted(sizes.items()):
        if len(touched) == 1:
            cost: tuple = (0, 0)
        else:
            product = 1
            for size in touched:
                product *= max(size, 1)
            cost = (1, product)
        if best_cost is None or cost < best_cost:
            best, best_cost = v, cost
    return best


def _join_factors(f1, f2, cap: int):
    vars1, rows1 = f1
    vars2, rows2 = f2
    shared = [v for v in vars2 if v in vars1]
    out_vars = vars1 + tuple(v for v in vars2 if v not in vars1)
    idx1 = [vars1.index(v) for v in shared]
    idx2 = [vars2.index(v) for v in shared]
    carry = [i for i, v in enumerate(vars2) if v not in vars1]
    table: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
    for row in rows2:
        table.setdefault(tuple(row[i] for i in idx2), []).append(row)
    out: set[tuple[str, ...]] = set()
    for row in rows1:
        key = tuple(row[i] for i in idx1)
        for other in table.get(key, ()):
            out.add(row + tuple(other[i] for i in carry))
            if len(out) > cap:
                return None
    return out_vars, out


def _project_out(factor, v: Term):
    factor_vars, rows = factor
    keep = [i for i, u in enumerate(factor_vars) if u != v]
    out_vars = tuple(factor_vars[i] for i in keep)
    return out_vars, {tuple(row[i] for i in keep) for row in rows}


# -- clause-to-clause subsumption ------------------------------------------


def subsumes(general: Clause, specific: Clause) -> bool:
    """True iff some substitution maps `general`'s head onto `specific`'s
    head and every body literal of `general` into `specific`'s body."""
    theta = _unify_literal(general.head, specific.head, {})
    if theta is None:
        return False
    targets: dict[str, list[Literal]] = {}
    for lit in specific.body:
        targets.setdefault(lit.relation, []).append(lit)
    return _embed(list(general.body), targets, theta)


def _unify_literal(
    src: Literal, dst: Literal, theta: dict[Term, Term]
) -> dict[Term, Term] | None:
    if src.relation != dst.relation or len(src.args) != len(dst.args):
        return None
    out = theta
    copied = False
    for a, b in zip(src.args, dst.args):
        if not a.is_var:
            if a != b:
                return None
            continue
        known = out.get(a)
        if known is None:
            if not copied:
                out = dict(out)
                copied = True
            out[a] = b
        elif known != b:
            return None
    return out


def _embed(
    literals: list[Literal],
    targets: dict[str, list[Literal]],
    theta: dict[Term, Term],
) -> bool:
    if not literals:
        return True
    # fail first: branch on the literal with the fewest consistent targets
    best_index = 0
    best_matches: list[dict[Term, Term]] | None = None
    for i, lit in enumerate(literals):
        matches = []
        for candidate in targets.get(lit.relation, ()):
            extended = _unify_literal(lit, candidate, theta)
            if extended is not None:
                matches.append(extended)
                if best_matches is not None and len(matches) >= len(best_matches):
                    break
        if best_matches is None or len(matches) < len(best_matches):
            best_index, best_matches = i, matches
            if not matches:
                return False
            if len(matches) == 1:
                break
    assert best_matches is not None
    rest = literals[:best_index] + literals[best_index + 1 :]
    for extended in best_matches:
        if _embed(rest, targets, extended):
            return True
    return False


# -- minimization -----------------------------------------------------------


def minimize(clause: Clause, deep: bool = False) -> Clause:
    """Remove duplicate body literals; with `deep`, also remove literals
    whose deletion leaves a subsumption-equivalent clause."""
    seen: dict[Literal, None] = {}
    for lit in clause.body:
        seen.setdefault(lit)
    reduced = Clause(clause.head, tuple(seen))
    return _deep_reduce(reduced) if deep else reduced


def fold_singleton_literals(clause: Clause) -> Clause:
    """Drop literals that differ from another literal of the same relation
    only at positions holding variables used nowhere else.

    Mapping those variables onto the other literal's arguments embeds the
    clause into itself without the dropped literal, so the result is
    subsumption-equivalent; pairwise generalization and saturation both
    produce whole families of such literals.
    """
    body = list(clause.body)
    changed = True
    while changed:
        changed = False
        counts: dict[Term, int] = {}
        for lit in (clause.head, *body):
            for arg in lit.args:
                if arg.is_var:
                    counts[arg] = counts.get(arg, 0) + 1
        for i, lit in enumerate(body):
            fixed = [
                (pos, arg)
                for pos, arg in enumerate(lit.args)
                if not (arg.is_var and counts[arg] == 1)
            ]
            if len(fixed) == len(lit.args):
                continue
            for j, other in enumerate(body):
                if (
                    j == i
                    or other.relation != lit.relation
                    or len(other.args) != len(lit.args)
                ):
                    continue
                if all(other.args[pos] == arg for pos, arg in fixed):
                    del body[i]
                    changed = True
                    break
            if changed:
                break
    return clause_with(clause.head, body)


def _deep_reduce(clause: Clause) -> Clause:
    # the singleton fold performs a cheap subset of the same removals;
    # reduction is confluent, so pre-folding changes nothing but speed
    clause = fold_singleton_literals(clause)
    body = list(clause.body)
    changed = True
    while changed:
        changed = False
        for i in range(len(body)):
            shorter = body[:i] + body[i + 1 :]
            if subsumes(clause_with(clause.head, body), clause_with(clause.head, shorter)):
                body = shorter
                changed = True
                break
    return clause_with(clause.head, body)


def clause_with(head: Literal, body: Iterable[Literal]) -> Clause:
    return Clause(head, tuple(body))


# -- bias conformance --------------------------------------------------------


def conforms(clause: Clause, bias: "BiasSpec") -> bool:
    """True iff every body literal satisfies some mode (reading left to
    right) and all variable occurrences admit one consistent type under some
    choice of predicate declaration per literal."""
    seen_vars = set(clause.head.variables())
    for lit in clause.body:
        modes = bias.modes_for(lit.relation)
        if not modes:
            return False
        if not any(_mode_matches(lit, m.symbols, seen_vars) for m in modes):
            return False
        seen_vars.update(lit.variables())
    return _type_licensed(clause, bias)


def _mode_matches(lit: Literal, symbols: tuple[str, ...], seen: set[Term]) -> bool:
    if len(symbols) != len(lit.args):
        return False
    for arg, sym in zip(lit.args, symbols):
        if sym == "+":
            if not (arg.is_var and arg in seen):
                return False
        elif sym == "-":
            if not arg.is_var:
                return False
        else:  # '#'
            if arg.is_var:
                return False
    return True


def _type_licensed(clause: Clause, bias: "BiasSpec") -> bool:
    literals = (clause.head, *clause.body)
    options = []
    for lit in literals:
        decls = bias.declarations_for(lit.relation)
        decls = [d for d in decls if len(d.types) == len(lit.args)]
        if not decls:
            return False
        options.append(decls)
    assignment: dict[Term, str] = {}

    def assign(i: int) -> bool:
        if i == len(literals):
            return True
        lit = literals[i]
        for decl in options[i]:
            placed: list[Term] = []
            ok = True
            for arg, token in zip(lit.args, decl.types):
                if not arg.is_var:
                    continue
                current = assignment.get(arg)
                if current is None:
                    assignment[arg] = token
                    placed.append(arg)
                elif current != token:
                    ok = False
                    break
            if ok and assign(i + 1):
                return True
            for term in placed:
                del assignment[term]
        return False

    return assign(0)
