import datetime as dt
import itertools
import math

import pytest

from chrono_qa.errors import (DegenerateInterval, EmptyTemporalResult,
                              UnscopedCandidate)
from chrono_qa.model import (AllenRelation, Answer, AnswerSet, Interval,
                             Ordinal, OrdinalKind, TemporalRelation, TimePoint)
from chrono_qa.reasoner import (ConstraintSpec, allen_relation,
                                apply_ordinal, cast_results_to_interval,
                                filter_candidates, intersect, satisfies)

BEFORE = TemporalRelation.parse("BEFORE")
AFTER = TemporalRelation.parse("AFTER")
DURING = TemporalRelation.parse("OVERLAP:DURING_WHILE_WHEN")
IN = TemporalRelation.parse("OVERLAP:SINCE_UNTIL_IN")
SAME_TIME = TemporalRelation.parse("OVERLAP:SAME_TIME_AS")
RELATIONS = [BEFORE, AFTER, DURING, IN, SAME_TIME]

ORIGIN = dt.date(2000, 1, 1)


def day(k):
    return TimePoint.from_date(ORIGIN + dt.timedelta(days=k))


def span(a, b):
    return Interval(day(a) if a is not None else None,
                    day(b) if b is not None else None)


def year(y):
    return TimePoint(y)


def scoped(key, *scopes):
    return Answer(key, tuple(scopes), ("footballPlayer.team",))


SMALL_INTERVALS = [(a, b) for a in range(7) for b in range(a, 7)]
# closed intervals plus intervals open on one side
GRID = SMALL_INTERVALS + [(None, b) for b in range(7)] + \
    [(a, None) for a in range(7)]


def bounds(pair):
    a, b = pair
    return (-math.inf if a is None else a, math.inf if b is None else b)


def expected_satisfies(relation, ans, cons):
    (a1, a2), (c1, c2) = bounds(ans), bounds(cons)
    return {BEFORE: a2 <= c1,
            AFTER: a1 >= c2,
            DURING: a1 <= c2 <= a2,
            IN: a1 <= c1 <= a2,
            SAME_TIME: c1 <= a1 <= a2 <= c2}[relation]


@pytest.mark.parametrize("relation", RELATIONS, ids=str)
def test_satisfies_matches_inequalities(relation):
    for ans, cons in itertools.product(GRID, repeat=2):
        assert satisfies(relation, span(*ans), span(*cons)) == \
            expected_satisfies(relation, ans, cons), (ans, cons)


def test_before_and_after_are_dual():
    for ans, cons in itertools.product(GRID, repeat=2):
        assert satisfies(BEFORE, span(*ans), span(*cons)) == \
            satisfies(AFTER, span(*cons), span(*ans))


def test_satisfies_examples():
    assert satisfies(BEFORE, span(2, 5), span(6, 9))
    assert not satisfies(AFTER, span(2, 5), span(6, 9))
    world_cup = Interval(TimePoint(2010, 6, 11), TimePoint(2010, 7, 11))
    assert not satisfies(DURING, Interval(year(2013), year(2017)), world_cup)
    assert satisfies(DURING, Interval(year(2009), year(2013)), world_cup)


def test_satisfies_with_open_sides():
    current = Interval(TimePoint(2017, 8, 3), None)
    assert not satisfies(BEFORE, current, span(0, 1))
    assert satisfies(AFTER, current, Interval(year(2013), year(2013)))
    assert not satisfies(AFTER, span(0, 1), Interval(year(1990), None))
    assert satisfies(IN, current, Interval(year(2018), year(2018)))


def test_cast_results_to_interval():
    assert cast_results_to_interval([year(2011), year(2012), year(2013)]) == \
        Interval(TimePoint(2011, 1, 1), TimePoint(2013, 12, 31))
    point = TimePoint(2013, 6, 3)
    assert cast_results_to_interval([point]) == Interval(point, point)
    interval = Interval(year(2009), TimePoint(2013, 5))
    assert cast_results_to_interval([interval]) is interval
    assert cast_results_to_interval(
        [TimePoint(2010, 7, 11), TimePoint(2010, 6, 11)]) == \
        Interval(TimePoint(2010, 6, 11), TimePoint(2010, 7, 11))
    with pytest.raises(EmptyTemporalResult):
        cast_results_to_interval([])


CLUBS = AnswerSet((
    scoped("santos", Interval(year(2009), TimePoint(2013, 5))),
    scoped("barcelona", Interval(TimePoint(2013, 6, 3),
                                 TimePoint(2017, 8, 3))),
    scoped("psg", Interval(TimePoint(2017, 8, 3), None)),
))


def test_filter_candidates():
    joined = TimePoint(2013, 6, 3)
    spec = ConstraintSpec(BEFORE, Interval(joined, joined))
    assert filter_candidates(CLUBS, spec).keys() == ["santos"]


def test_filter_keeps_order_and_is_idempotent():
    moved = TimePoint(2017, 8, 3)
    spec = ConstraintSpec(IN, Interval(moved, moved))
    once = filter_candidates(CLUBS, spec)
    assert once.keys() == ["barcelona", "psg"]
    assert filter_candidates(once, spec) == once


def test_filter_is_existential_over_scopes():
    answer = scoped("neymar", span(0, 1), span(10, 12))
    spec = ConstraintSpec(AFTER, span(5, 6))
    assert filter_candidates(AnswerSet((answer,)), spec).keys() == ["neymar"]


def test_filter_edge_cases():
    spec = ConstraintSpec(AFTER, Interval(year(2010), None))
    assert filter_candidates(AnswerSet(), spec) == AnswerSet()
    assert filter_candidates(CLUBS, spec) == AnswerSet()


def test_filter_drops_unscoped_candidates():
    candidates = AnswerSet((Answer("forward", unscoped=True),) + CLUBS.answers)
    spec = ConstraintSpec(IN, Interval(year(2015), year(2015)))
    result = filter_candidates(candidates, spec)
    assert result.keys() == ["barcelona"]
    assert any("forward" in d for d in result.diagnostics)


@pytest.mark.parametrize("ordinal, expected", [
    (Ordinal(OrdinalKind.FIRST), ["santos"]),
    (Ordinal(OrdinalKind.LAST), ["psg"]),
    (Ordinal(OrdinalKind.NTH, 2), ["barcelona"]),
    (Ordinal(OrdinalKind.NTH, 4), []),
])
def test_apply_ordinal(ordinal, expected):
    reversed_clubs = AnswerSet(tuple(reversed(CLUBS.answers)))
    assert apply_ordinal(reversed_clubs, ordinal).keys() == expected


def test_apply_ordinal_ties_break_on_key():
    candidates = AnswerSet((scoped("b", span(0, 3)), scoped("a", span(0, 3)),
                            scoped("c", span(0, 2))))
    assert apply_ordinal(candidates, Ordinal(OrdinalKind.FIRST)).keys() == ["c"]
    assert apply_ordinal(candidates, Ordinal(OrdinalKind.LAST)).keys() == ["b"]


def test_apply_ordinal_uses_earliest_scope():
    candidates = AnswerSet((scoped("a", span(5, 6)),
                            scoped("b", span(8, 9), span(1, 2))))
    assert apply_ordinal(candidates, Ordinal(OrdinalKind.FIRST)).keys() == ["b"]


def test_apply_ordinal_needs_scopes():
    with pytest.raises(UnscopedCandidate):
        apply_ordinal(AnswerSet((Answer("forward"),)),
                      Ordinal(OrdinalKind.FIRST))
    assert apply_ordinal(AnswerSet(), Ordinal(OrdinalKind.LAST)) == AnswerSet()


def test_intersect():
    first = AnswerSet((Answer("a", (span(0, 1),), ("p",)), Answer("b"),
                       Answer("c")))
    second = AnswerSet((Answer("c"), Answer("a", (span(2, 3),), ("q",)),
                        Answer("d")))
    result = intersect([first, second])
    assert result.keys() == ["a", "c"]
    merged = result.answers[0]
    assert merged.time_scopes == (span(0, 1), span(2, 3))
    assert merged.predicates == ("p", "q")


def test_intersect_properties():
    sets = [CLUBS,
            AnswerSet(CLUBS.answers[1:]),
            AnswerSet((CLUBS.answers[2], CLUBS.answers[0]))]
    for s in sets:
        assert intersect([s]) == s
        assert intersect([s, s]) == s
    for s, t in itertools.permutations(sets, 2):
        assert set(intersect([s, t]).keys()) == set(intersect([t, s]).keys())
        assert set(intersect([s, t]).keys()) <= set(s.keys())
    with pytest.raises(ValueError):
        intersect([])


def allen_by_definition(a, b):
    (a1, a2), (b1, b2) = a, b
    definitions = {
        AllenRelation.BEFORE: a2 < b1,
        AllenRelation.AFTER: b2 < a1,
        AllenRelation.MEETS: a2 == b1,
        AllenRelation.MET_BY: b2 == a1,
        AllenRelation.OVERLAPS: a1 < b1 < a2 < b2,
        AllenRelation.OVERLAPPED_BY: b1 < a1 < b2 < a2,
        AllenRelation.STARTS: a1 == b1 and a2 < b2,
        AllenRelation.STARTED_BY: a1 == b1 and b2 < a2,
        AllenRelation.DURING: b1 < a1 and a2 < b2,
        AllenRelation.CONTAINS: a1 < b1 and b2 < a2,
        AllenRelation.FINISHES: b1 < a1 and a2 == b2,
        AllenRelation.FINISHED_BY: a1 < b1 and a2 == b2,
        AllenRelation.EQUAL: a1 == b1 and a2 == b2,
    }
    return [relation for relation, holds in definitions.items() if holds]


def test_allen_relations_on_small_grid():
    proper = [(a, b) for a, b in SMALL_INTERVALS if a < b]
    seen = set()
    for a, b in itertools.product(proper, repeat=2):
        holding = allen_by_definition(a, b)
        assert len(holding) == 1, (a, b, holding)
        assert allen_relation(span(*a), span(*b)) is holding[0], (a, b)
        seen.add(holding[0])
    assert seen == set(AllenRelation)


def test_allen_relation_rejects_degenerate_intervals():
    with pytest.raises(DegenerateInterval):
        allen_relation(span(1, 1), span(0, 3))
    with pytest.raises(DegenerateInterval):
        allen_relation(span(0, 3), Interval(day(1), None))
