import pytest

from chrono_qa.errors import NoScopeFound
from chrono_qa.kb import parse_kb
from chrono_qa.model import Interval, TimePoint
from chrono_qa.scopes import pair_key, retrieve_time_scope, select_scope_predicates

TEAM = "footballPlayer.team"


def stored_dates(store):
    return {f.object for f in store.facts if isinstance(f.object, TimePoint)}


def test_compound_begin_end_pair(store):
    assert retrieve_time_scope("barcelona", "footballPlayer.team.club", store,
                               ["neymar"]) == [
        Interval(TimePoint(2013, 6, 3), TimePoint(2017, 8, 3))]


def test_lone_begin_is_open_ended(store):
    assert retrieve_time_scope("psg", "footballPlayer.team.club", store,
                               ["neymar"]) == [
        Interval(TimePoint(2017, 8, 3), None)]


def test_marriage_point(store):
    assert retrieve_time_scope("danny_moder", "marriage.spouse", store,
                               ["julia_roberts"]) == [
        Interval(TimePoint(2002, 7, 4), TimePoint(2002, 7, 4))]


def test_scope_through_linking_compounds(store):
    # the plain team facts are not in a compound; the stint's begin/end pair
    # is preferred over the award date
    assert retrieve_time_scope("santos", TEAM, store, ["neymar"]) == [
        Interval(TimePoint(2009), TimePoint(2013, 5))]


def test_entities_inferred_from_provenance(store):
    assert retrieve_time_scope("barcelona", TEAM, store) == [
        Interval(TimePoint(2013, 6, 3), TimePoint(2017, 8, 3))]


def test_date_answer_is_its_own_scope(store):
    point = TimePoint(2013, 6, 3)
    assert retrieve_time_scope(point, "footballPlayer.team.joinedOnDate",
                               store) == [Interval(point, point)]


def test_no_scope(store):
    with pytest.raises(NoScopeFound):
        retrieve_time_scope("forward", "athlete.position", store, ["neymar"])


@pytest.mark.parametrize("answer, predicate, entities", [
    ("santos", TEAM, ["neymar"]),
    ("barcelona", TEAM, ["neymar"]),
    ("psg", TEAM, ["neymar"]),
    ("thiago_silva", "sportsTeam.captain", ["brazil_team"]),
    ("lyle_lovett", "marriage.spouse", ["julia_roberts"]),
])
def test_endpoints_come_from_the_store(store, answer, predicate, entities):
    dates = stored_dates(store)
    for scope in retrieve_time_scope(answer, predicate, store, entities):
        for point in (scope.begin, scope.end):
            assert point is None or point in dates


@pytest.mark.parametrize("name, key", [
    ("sportsTeam.captain.fromDate", "sportsTeam.captain"),
    ("sportsTeam.captain.toDate", "sportsTeam.captain"),
    ("footballPlayer.team.joinedOnDate", "footballPlayer.team"),
    ("footballPlayer.team.leftOnDate", "footballPlayer.team"),
    ("event.startDate", "event"),
])
def test_pair_key(name, key):
    assert pair_key(name) == key


def test_select_pair_over_point(store):
    assert select_scope_predicates(
        TEAM, ["footballPlayer.award.date", "footballPlayer.team.joinedOnDate",
               "footballPlayer.team.leftOnDate"], store) == (
        "footballPlayer.team.joinedOnDate", "footballPlayer.team.leftOnDate")


def test_select_point(store):
    assert select_scope_predicates(
        "marriage.spouse", ["marriage.date", "organization.founded"],
        store) == ("marriage.date",)
    assert select_scope_predicates("marriage.spouse", [], store) == ()


def test_lone_end_counts_as_single_predicate():
    store = parse_kb([
        "P\tmembership.until\ttemporal:yes\trole:end",
        "P\tmembership.since\ttemporal:yes\trole:begin",
        "P\tfounded\ttemporal:yes\trole:point",
    ])
    assert select_scope_predicates("membership.club",
                                   ["membership.until", "founded"],
                                   store) == ("membership.until",)
