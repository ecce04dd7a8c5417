"""Loading, validation, and indexing of relational data and training examples.

Databases are plain files: a schema listing (`name(attr1,attr2,...)`, one per
line) plus one CSV per relation. All values are opaque, case-sensitive
strings; there are no NULLs and duplicate rows collapse to one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import LoadError, ValidationError

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_SCHEMA_LINE = re.compile(rf"^({_IDENT})\(({_IDENT}(?:,{_IDENT})*)\)$")
_EXAMPLE_LINE = re.compile(rf"^([+-])\s+({_IDENT})\(([^()]*)\)$")


@dataclass(frozen=True, order=True)
class AttributeRef:
    """One column of one relation, identified by (relation, position)."""

    relation: str
    position: int
    name: str

    def __str__(self) -> str:
        return f"{self.relation}[{self.name}]"


@dataclass(frozen=True)
class RelationSchema:
    name: str
    attributes: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.attributes) < 1:
            raise ValidationError(f"relation {self.name}: arity must be >= 1")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValidationError(
                f"relation {self.name}: attribute names must be unique"
            )

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def attribute_refs(self) -> tuple[AttributeRef, ...]:
        return tuple(
            AttributeRef(self.name, i, a) for i, a in enumerate(self.attributes)
        )


@dataclass(frozen=True)
class AttributeStats:
    attribute: AttributeRef
    distinct_count: int
    distinct_values: frozenset[str]


@dataclass(frozen=True)
class DatabaseInstance:
    """An immutable, indexed set of relations.

    `rows` maps each relation name to its deduplicated tuples in sorted
    order; `value_index` maps each constant to every (attribute, row)
    occurrence. Instances are safe for concurrent reads.
    """

    schemas: tuple[RelationSchema, ...]
    rows: dict[str, tuple[tuple[str, ...], ...]]
    value_index: dict[str, frozenset[tuple[AttributeRef, tuple[str, ...]]]]

    @staticmethod
    def build(
        schemas: tuple[RelationSchema, ...],
        tuples_by_relation: dict[str, object],
    ) -> "DatabaseInstance":
        names = [s.name for s in schemas]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate relation name in schema")
        rows: dict[str, tuple[tuple[str, ...], ...]] = {}
        for schema in schemas:
            raw = tuples_by_relation.get(schema.name, ())
            deduped = sorted(set(tuple(r) for r in raw))
            for row in deduped:
                if len(row) != schema.arity:
                    raise ValidationError(
                        f"relation {schema.name}: row {row!r} does not match "
                        f"arity {schema.arity}"
                    )
                if any(v == "" for v in row):
                    raise ValidationError(
                        f"relation {schema.name}: empty value in row {row!r}"
                    )
            rows[schema.name] = tuple(deduped)
        unknown = set(tuples_by_relation) - set(names)
        if unknown:
            raise ValidationError(f"tuples for undeclared relations: {sorted(unknown)}")
        return DatabaseInstance(tuple(schemas), rows, _build_value_index(schemas, rows))

    # -- lookups --------------------------------------------------------

    def schema(self, relation: str) -> RelationSchema:
        for s in self.schemas:
            if s.name == relation:
                return s
        raise ValidationError(f"unknown relation: {relation}")

    def has_relation(self, relation: str) -> bool:
        return any(s.name == relation for s in self.schemas)

    def relation_rows(self, relation: str) -> tuple[tuple[str, ...], ...]:
        if relation not in self.rows:
            raise ValidationError(f"unknown relation: {relation}")
        return self.rows[relation]

    def total_tuples(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def column_values(self, attr: AttributeRef) -> frozenset[str]:
        return attribute_stats(self, attr).distinct_values

    def fact_set(self, relation: str) -> frozenset[tuple[str, ...]]:
        """Rows of `relation` as a set, for O(1) membership tests."""
        cache = self.__dict__.get("_fact_sets")
        if cache is None:
            cache = {}
            object.__setattr__(self, "_fact_sets", cache)
        if relation not in cache:
            cache[relation] = frozenset(self.relation_rows(relation))
        return cache[relation]

    def index_count(self, relation: str, position: int, value: str) -> int:
        """How many rows of `relation` hold `value` at `position`."""
        return len(_pos_index(self).get((relation, position, value), ()))

    def matching_rows(
        self, relation: str, bound: dict[int, str]
    ) -> tuple[tuple[str, ...], ...]:
        """Rows of `relation` agreeing with fixed values at `bound` positions."""
        rows = self.relation_rows(relation)
        if not bound:
            return rows
        index = _pos_index(self)
        pos, val = next(iter(bound.items()))
        # narrowest indexed set first, then filter the rest
        best = None
        for p, v in bound.items():
            cand = index.get((relation, p, v), ())
            if best is None or len(cand) < len(best):
                best, pos, val = cand, p, v
        return tuple(
            row
            for row in (best or ())
            if all(row[p] == v for p, v in bound.items() if p != pos)
        )

    def with_relation(
        self, schema: RelationSchema, tuples: object
    ) -> "DatabaseInstance":
        """Return a new instance with `schema` added or its rows replaced."""
        schemas = [s for s in self.schemas if s.name != schema.name]
        schemas.append(schema)
        tuples_by_relation: dict[str, object] = {
            s.name: self.rows[s.name] for s in self.schemas if s.name != schema.name
        }
        tuples_by_relation[schema.name] = tuples
        return DatabaseInstance.build(tuple(schemas), tuples_by_relation)


@dataclass(frozen=True)
class ExampleSet:
    target: RelationSchema
    positives: tuple[tuple[str, ...], ...]
    negatives: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise ValidationError(
                f"examples labeled both + and -: {sorted(overlap)}"
            )
        for ex in self.positives + self.negatives:
            if len(ex) != self.target.arity:
                raise ValidationError(
                    f"example {ex!r} does not match arity of {self.target.name}"
                )


# -- loading ------------------------------------------------------------


def load_schema(schema_file: Path | str) -> tuple[RelationSchema, ...]:
    """Parse a schema file: one `name(a,b,...)` per line, `#` comments."""
    path = Path(schema_file)
    if not path.is_file():
        raise LoadError(f"schema file not found: {path}")
    schemas: list[RelationSchema] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SCHEMA_LINE.match(line.replace(" ", ""))
        if not m:
            raise LoadError(f"{path}:{lineno}: cannot parse schema line {raw!r}")
        name, attrs = m.group(1), tuple(m.group(2).split(","))
        try:
            schemas.append(RelationSchema(name, attrs))
        except ValidationError as exc:
            raise LoadError(f"{path}:{lineno}: {exc}") from exc
    if len({s.name for s in schemas}) != len(schemas):
        raise LoadError(f"{path}: duplicate relation declaration")
    return tuple(schemas)


def load_database(
    schema_file: Path | str,
    facts_dir: Path | str,
    examples_backed: tuple[str, ...] = (),
) -> DatabaseInstance:
    """Load `<facts_dir>/<relation>.csv` for every declared relation.

    Relations named in `examples_backed` may have no facts file; they load
    empty and are expected to receive their rows from training examples.
    """
    schemas = load_schema(schema_file)
    facts = Path(facts_dir)
    if not facts.is_dir():
        raise LoadError(f"facts directory not found: {facts}")
    declared = {s.name for s in schemas}
    for p in sorted(facts.glob("*.csv")):
        if p.stem not in declared:
            raise LoadError(f"facts file {p.name} has no declared relation")
    tuples: dict[str, list[tuple[str, ...]]] = {}
    for schema in schemas:
        path = facts / f"{schema.name}.csv"
        if not path.is_file():
            if schema.name in examples_backed:
                tuples[schema.name] = []
                continue
            raise LoadError(f"missing facts file for relation {schema.name}: {path}")
        tuples[schema.name] = _read_facts_csv(path, schema)
    return DatabaseInstance.build(schemas, tuples)


def _read_facts_csv(path: Path, schema: RelationSchema) -> list[tuple[str, ...]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    body = [(n, ln) for n, ln in enumerate(lines, 1) if ln.strip()]
    if not body:
        return []
    header_no, header = body[0]
    if tuple(c.strip() for c in header.split(",")) != schema.attributes:
        raise LoadError(
            f"{path}:{header_no}: header does not match attributes "
            f"{','.join(schema.attributes)}"
        )
    out: list[tuple[str, ...]] = []
    for lineno, line in body[1:]:
        cells = tuple(c.strip() for c in line.split(","))
        if len(cells) != schema.arity:
            raise LoadError(
                f"{path}:{lineno}: relation {schema.name} expects "
                f"{schema.arity} values, got {len(cells)}"
            )
        if any(c == "" for c in cells):
            raise LoadError(f"{path}:{lineno}: empty value is not allowed")
        out.append(cells)
    return out


def load_examples(examples_file: Path | str, target: RelationSchema) -> ExampleSet:
    """Parse `+ rel(a,b)` / `- rel(a,b)` lines into an ExampleSet."""
    path = Path(examples_file)
    if not path.is_file():
        raise LoadError(f"examples file not found: {path}")
    positives: list[tuple[str, ...]] = []
    negatives: list[tuple[str, ...]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _EXAMPLE_LINE.match(line)
        if not m:
            raise LoadError(f"{path}:{lineno}: cannot parse example line {raw!r}")
        label, rel, args = m.groups()
        if rel != target.name:
            raise LoadError(
                f"{path}:{lineno}: example relation {rel} is not the target "
                f"{target.name}"
            )
        values = tuple(v.strip() for v in args.split(","))
        if len(values) != target.arity or any(v == "" for v in values):
            raise LoadError(
                f"{path}:{lineno}: expected {target.arity} values, got {args!r}"
            )
        bucket = positives if label == "+" else negatives
        if values not in bucket:
            bucket.append(values)
    try:
        return ExampleSet(target, tuple(positives), tuple(negatives))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def register_target(db: DatabaseInstance, examples: ExampleSet) -> DatabaseInstance:
    """Back the target relation with the positive examples as its rows."""
    return db.with_relation(examples.target, examples.positives)


def attribute_stats(db: DatabaseInstance, attr: AttributeRef) -> AttributeStats:
    schema = db.schema(attr.relation)
    if attr.position >= schema.arity or schema.attributes[attr.position] != attr.name:
        raise ValidationError(f"unknown attribute: {attr}")
    values = frozenset(row[attr.position] for row in db.rows[attr.relation])
    return AttributeStats(attr, len(values), values)


def all_attributes(db: DatabaseInstance) -> tuple[AttributeRef, ...]:
    return tuple(a for s in db.schemas for a in s.attribute_refs())


# -- dumping (canonical round-trip format) -------------------------------


def dump_database(db: DatabaseInstance, out_dir: Path | str) -> None:
    """Write schema.txt plus facts/<relation>.csv in canonical sorted order."""
    out = Path(out_dir)
    (out / "facts").mkdir(parents=True, exist_ok=True)
    schema_lines = [f"{s.name}({','.join(s.attributes)})" for s in db.schemas]
    (out / "schema.txt").write_text("\n".join(schema_lines) + "\n", encoding="utf-8")
    for schema in db.schemas:
        lines = [",".join(schema.attributes)]
        lines += [",".join(row) for row in db.rows[schema.name]]
        (out / "facts" / f"{schema.name}.csv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8"
        )


def dump_examples(examples: ExampleSet, out_file: Path | str) -> None:
    name = examples.target.name
    lines = [f"+ {name}({','.join(e)})" for e in examples.positives]
    lines += [f"- {name}({','.join(e)})" for e in examples.negatives]
    Path(out_file).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- internal indexes ----------------------------------------------------


def _build_value_index(
    schemas: tuple[RelationSchema, ...],
    rows: dict[str, tuple[tuple[str, ...], ...]],
) -> dict[str, frozenset[tuple[AttributeRef, tuple[str, ...]]]]:
    acc: dict[str, set[tuple[AttributeRef, tuple[str, ...]]]] = {}
    for schema in schemas:
        refs = schema.attribute_refs()
        for row in rows[schema.name]:
            for ref, value in zip(refs, row):
                acc.setdefault(value, set()).add((ref, row))
    return {v: frozenset(occ) for v, occ in acc.items()}


def rebuild_value_index(
    db: DatabaseInstance,
) -> dict[str, frozenset[tuple[AttributeRef, tuple[str, ...]]]]:
    """Recompute the value index from the tuple sets (consistency check)."""
    return _build_value_index(db.schemas, db.rows)


def _pos_index(
    db: DatabaseInstance,
) -> dict[tuple[str, int, str], tuple[tuple[str, ...], ...]]:
    # lazily attached to the (immutable) instance so it is computed once
    cached = db.__dict__.get("_pos_idx")
    if cached is not None:
        return cached
    index: dict[tuple[str, int, str], list[tuple[str, ...]]] = {}
    for schema in db.schemas:
        for row in db.rows[schema.name]:
            for pos, value in enumerate(row):
                index.setdefault((schema.name, pos, value), []).append(row)
    built = {k: tuple(v) for k, v in index.items()}
    object.__setattr__(db, "_pos_idx", built)
    return built
