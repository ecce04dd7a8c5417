"""Packaged departmental toy databases for the demo command and tests.

The small fixture is a 12-fact advisor domain where the only clause
separating positives from negatives is co-authorship. The typed fixture
enlarges it so that column containments are asymmetric: the author column
approximately contains students and professors without either containing
it back, phases/positions stay low-cardinality, and referencing columns
(inPhase, ta) are proper subsets of their home columns.
"""

from __future__ import annotations

from pathlib import Path

from .relstore import (
    DatabaseInstance,
    ExampleSet,
    RelationSchema,
    dump_database,
    dump_examples,
    register_target,
)

_SMALL_SCHEMAS = (
    RelationSchema("student", ("stud",)),
    RelationSchema("professor", ("prof",)),
    RelationSchema("inPhase", ("stud", "phase")),
    RelationSchema("hasPosition", ("prof", "position")),
    RelationSchema("publication", ("title", "author")),
    RelationSchema("advisedBy", ("stud", "prof")),
)

_SMALL_FACTS = {
    "student": [("alice",), ("john",)],
    "professor": [("bob",), ("mary",)],
    "inPhase": [("alice", "post_quals"), ("john", "post_quals")],
    "hasPosition": [("bob", "assistant_prof"), ("mary", "associate_prof")],
    "publication": [
        ("p1", "alice"),
        ("p1", "bob"),
        ("p2", "john"),
        ("p2", "mary"),
    ],
    "advisedBy": [],
}

_POSITIVES = (("alice", "bob"), ("john", "mary"))
_NEGATIVES = (("alice", "mary"), ("john", "bob"))


def small_database() -> DatabaseInstance:
    return DatabaseInstance.build(_SMALL_SCHEMAS, dict(_SMALL_FACTS))


def small_examples() -> ExampleSet:
    return ExampleSet(_SMALL_SCHEMAS[-1], _POSITIVES, _NEGATIVES)


def small_database_registered() -> DatabaseInstance:
    return register_target(small_database(), small_examples())


_TYPED_SCHEMAS = (
    RelationSchema("student", ("stud",)),
    RelationSchema("professor", ("prof",)),
    RelationSchema("inPhase", ("stud", "phase")),
    RelationSchema("hasPosition", ("prof", "position")),
    RelationSchema("publication", ("title", "author")),
    RelationSchema("ta", ("course", "stud", "term")),
    RelationSchema("advisedBy", ("stud", "prof")),
)

_TYPED_FACTS = {
    "student": [("alice",), ("john",)] + [(f"stud{i}",) for i in range(3, 12)],
    "professor": [("bob",), ("mary",)] + [(f"prof{i}",) for i in range(3, 12)],
    "inPhase": [
        ("alice", "post_quals"),
        ("john", "post_quals"),
        ("stud3", "pre_quals"),
        ("stud4", "post_quals"),
        ("stud5", "pre_quals"),
    ],
    "hasPosition": [
        ("bob", "assistant_prof"),
        ("mary", "associate_prof"),
        ("prof3", "lecturer"),
        ("prof4", "assistant_prof"),
        ("prof5", "lecturer"),
    ],
    "publication": [
        ("paper1", "alice"),
        ("paper1", "bob"),
        ("paper2", "john"),
        ("paper2", "mary"),
        ("paper3", "stud3"),
        ("paper3", "prof3"),
    ],
    "ta": [("course1", "alice", "term1"), ("course2", "stud6", "term2")],
    "advisedBy": [],
}


def typed_database() -> DatabaseInstance:
    return DatabaseInstance.build(_TYPED_SCHEMAS, dict(_TYPED_FACTS))


def typed_examples() -> ExampleSet:
    return ExampleSet(_TYPED_SCHEMAS[-1], _POSITIVES, _NEGATIVES)


def typed_database_registered() -> DatabaseInstance:
    return register_target(typed_database(), typed_examples())


def materialize_small(out_dir: Path | str) -> dict[str, Path]:
    """Write the small fixture as editable input files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_database(small_database(), out)
    # the target relation is examples-backed: it gets no facts file
    target_csv = out / "facts" / "advisedBy.csv"
    if target_csv.exists():
        target_csv.unlink()
    dump_examples(small_examples(), out / "examples.txt")
    return {
        "schema": out / "schema.txt",
        "facts": out / "facts",
        "examples": out / "examples.txt",
    }
