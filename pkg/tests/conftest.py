"""Shared test fixtures: the worked-example clause and a hand-written bias."""

from __future__ import annotations

import pytest

from automode.biasgen import read_bias
from automode.clauses import parse_clause

# Hand-written bias for the advisor domain: types separate students,
# phases, professors, positions, and titles; authors may be students or
# professors. Body modes list variable modes before constant modes.
MANUAL_BIAS_TEXT = """\
PREDICATES:
advisedBy(T1,T3)
student(T1)
inPhase(T1,T2)
professor(T3)
hasPosition(T3,T4)
publication(T5,T1)
publication(T5,T3)
MODES:
advisedBy(+,+)
student(+)
inPhase(+,-)
inPhase(+,#)
professor(+)
hasPosition(+,-)
publication(+,-)
publication(-,+)
"""

WORKED_CLAUSE_TEXT = (
    "advisedBy(x,y) :- student(x), inPhase(x,u), professor(y), "
    "hasPosition(y,v), publication(z,x), publication(z,y)."
)

WORKED_C1_TEXT = (
    'advisedBy("alice","bob") :- student("alice"), '
    'inPhase("alice","post_quals"), professor("bob"), '
    'hasPosition("bob","assistant_prof"), publication("p1","alice"), '
    'publication("p1","bob").'
)

WORKED_C2_TEXT = (
    'advisedBy("john","mary") :- student("john"), '
    'inPhase("john","post_quals"), professor("mary"), '
    'hasPosition("mary","associate_prof"), publication("p2","john"), '
    'publication("p2","mary").'
)


@pytest.fixture
def manual_bias():
    return read_bias(MANUAL_BIAS_TEXT)


@pytest.fixture
def worked_clause():
    return parse_clause(WORKED_CLAUSE_TEXT)
