"""Least-general generalization and the lgg learner."""

from __future__ import annotations

import pytest

from automode import fixtures
from automode.biasgen import induce_bias
from automode.clauses import covers, covers_definition, parse_clause, subsumes, const, var
from automode.errors import ConfigError, ValidationError
from automode.learner import LearnConfig, ground_bottom_clause
from automode.lgg import VarPairTable, lgg_clauses, lgg_learn, lgg_terms
from automode.relstore import DatabaseInstance, ExampleSet, RelationSchema
from automode.biasgen import PredicateDecl

from conftest import WORKED_C1_TEXT, WORKED_C2_TEXT
from oracles import isomorphic


class TestLggTerms:
    def test_identical_constants_retained(self):
        table = VarPairTable()
        assert lgg_terms(const("post_quals"), const("post_quals"), table) == const(
            "post_quals"
        )

    def test_distinct_constants_get_stable_variable(self):
        table = VarPairTable()
        first = lgg_terms(const("alice"), const("john"), table)
        again = lgg_terms(const("alice"), const("john"), table)
        assert first.is_var and first == again
        other = lgg_terms(const("john"), const("alice"), table)
        assert other != first  # ordered pairs are distinct

    def test_identical_variable_passes_through(self):
        table = VarPairTable()
        assert lgg_terms(var("x"), var("x"), table) == var("x")


class TestLggClauses:
    def test_worked_example(self):
        c1 = parse_clause(WORKED_C1_TEXT)
        c2 = parse_clause(WORKED_C2_TEXT)
        out = lgg_clauses(c1, c2)
        expected = parse_clause(
            'advisedBy(a,b) :- student(a), inPhase(a,"post_quals"), professor(b), '
            "hasPosition(b,c), publication(d,a), publication(d,b)."
        )
        assert isomorphic(out, expected)
        # the shared-pair table aligns the head with the student literal
        assert out.head.args[0] in out.body[0].args

    def test_worked_example_raw_size(self):
        c1 = parse_clause(WORKED_C1_TEXT)
        c2 = parse_clause(WORKED_C2_TEXT)
        raw = lgg_clauses(c1, c2, reduce=False)
        assert len(raw.body) == 8
        assert len(raw.body) <= len(c1.body) * len(c2.body)

    def test_self_lgg_is_identity_up_to_renaming(self, worked_clause):
        assert isomorphic(lgg_clauses(worked_clause, worked_clause), worked_clause)

    def test_single_atom_bodies(self):
        c1 = parse_clause('t("a") :- r("a").')
        c2 = parse_clause('t("b") :- r("b").')
        out = lgg_clauses(c1, c2)
        assert isomorphic(out, parse_clause("t(v) :- r(v)."))

    def test_incompatible_heads_rejected(self):
        with pytest.raises(ValidationError):
            lgg_clauses(parse_clause("t(x)."), parse_clause("s(x)."))

    def test_result_subsumes_both_inputs(self):
        c1 = parse_clause(WORKED_C1_TEXT)
        c2 = parse_clause(WORKED_C2_TEXT)
        out = lgg_clauses(c1, c2)
        assert subsumes(out, c1)
        assert subsumes(out, c2)

    def test_coverage_superset_of_both_inputs(self):
        db = fixtures.small_database_registered()
        c1 = parse_clause(WORKED_C1_TEXT)
        c2 = parse_clause(WORKED_C2_TEXT)
        out = lgg_clauses(c1, c2)
        for example in (("alice", "bob"), ("john", "mary"), ("alice", "mary")):
            either = covers(c1, example, db) or covers(c2, example, db)
            assert (not either) or covers(out, example, db)
        assert covers(out, ("alice", "bob"), db) and covers(out, ("john", "mary"), db)


class TestGroundBottom:
    def test_ground_bottom_matches_worked_clause(self):
        db = fixtures.small_database_registered()
        bias = induce_bias(db, "advisedBy")
        clause = ground_bottom_clause(
            ("alice", "bob"), db, "advisedBy", bias.predicates, LearnConfig(iterations=1)
        )
        assert isomorphic(clause, parse_clause(WORKED_C1_TEXT))
        assert covers(clause, ("alice", "bob"), db)


class TestLggLearn:
    def test_fixture_reaches_perfect_training_metrics(self):
        db = fixtures.small_database_registered()
        ex = fixtures.small_examples()
        bias = induce_bias(db, "advisedBy")
        definition = lgg_learn(db, ex, bias.predicates, LearnConfig())
        assert all(covers_definition(definition, p, db) for p in ex.positives)
        assert not any(covers_definition(definition, n, db) for n in ex.negatives)

    def test_single_positive_returns_its_reduced_bottom(self):
        db = fixtures.small_database_registered()
        bias = induce_bias(db, "advisedBy")
        ex = ExampleSet(db.schema("advisedBy"), (("alice", "bob"),), ())
        definition = lgg_learn(db, ex, bias.predicates, LearnConfig(iterations=1))
        assert len(definition.clauses) == 1
        assert isomorphic(definition.clauses[0], parse_clause(WORKED_C1_TEXT))

    def test_disjoint_neighborhoods_generalize_to_head_variables(self):
        schemas = (
            RelationSchema("p", ("a",)),
            RelationSchema("q", ("a",)),
            RelationSchema("t", ("a",)),
        )
        db = DatabaseInstance.build(
            schemas, {"p": [("alice",)], "q": [("bob",)], "t": [("alice",), ("bob",)]}
        )
        predicates = (
            PredicateDecl("p", ("T1",)),
            PredicateDecl("q", ("T1",)),
            PredicateDecl("t", ("T1",)),
        )
        ex = ExampleSet(schemas[2], (("alice",), ("bob",)), ())
        definition = lgg_learn(db, ex, predicates, LearnConfig())
        assert len(definition.clauses) == 1
        assert definition.clauses[0].body == ()

    def test_guard_refuses_large_databases(self):
        db = fixtures.small_database_registered()
        ex = fixtures.small_examples()
        bias = induce_bias(db, "advisedBy")
        with pytest.raises(ConfigError, match="guard"):
            lgg_learn(db, ex, bias.predicates, LearnConfig(), guard=3)

    def test_missing_target_declaration_rejected(self):
        db = fixtures.small_database_registered()
        ex = fixtures.small_examples()
        with pytest.raises(ValidationError):
            lgg_learn(db, ex, (PredicateDecl("student", ("T1",)),), LearnConfig())
