"""
Brute-force reference answers over a KB file. Reads the raw records and scans
every fact for every question, without any index, so the builtin backend and
the bundled benchmark can be checked against it.

Predicates are matched by a plain rule: a question word matches when its
first four letters occur in the lower-cased predicate name. Dates are widened
to whole days with the calendar, open sides compare as minus or plus
infinity.
"""

import calendar
import datetime as dt
import math

from chrono_qa.utils import read_records

PREFIX = 4


def read_raw_kb(path):
    entities, temporal, facts = set(), set(), []
    roles = {}
    for _, fields in read_records(path):
        if fields[0] == "E":
            entities.add(fields[1])
        elif fields[0] == "P":
            if fields[2] == "temporal:yes":
                temporal.add(fields[1])
            roles[fields[1]] = fields[3].split(":", 1)[1]
        elif fields[0] == "F":
            subject, predicate, value, compound = fields[1:]
            facts.append((subject, predicate, value,
                          None if compound == "-" else compound))
    return entities, temporal, facts, roles


def match_count(words, predicate):
    name = predicate.lower()
    return sum(1 for w in dict.fromkeys(words) if w.lower()[:PREFIX] in name)


def entity_answers(path, question_entities, words):
    """Values of the predicate matching most question words, the shortest
    name winning ties."""
    _, temporal, facts, _ = read_raw_kb(path)
    candidates = []
    for subject, predicate, value, _ in facts:
        if predicate in temporal:
            continue
        if subject in question_entities:
            candidates.append((predicate, value))
        if value in question_entities:
            candidates.append((predicate, subject))
    if not candidates:
        return set()
    best = min({p for p, _ in candidates},
               key=lambda p: (-match_count(words, p), len(p), p))
    if match_count(words, best) == 0:
        return set()
    return {value.strip('"') for predicate, value in candidates
            if predicate == best and value not in question_entities}


def _members(facts, compound):
    members = set()
    for subject, _, value, other in facts:
        if other == compound:
            members.update((subject, value))
    return members


def date_answers(path, question_entities, words):
    """ISO dates of every temporal predicate matching most question words."""
    _, temporal, facts, _ = read_raw_kb(path)
    compounds = {f[3] for f in facts if f[3] is not None}
    in_compound = {c: _members(facts, c) for c in compounds}

    candidates = []
    if len(question_entities) > 1:
        shared = {c for c, members in in_compound.items()
                  if set(question_entities) <= members}
        candidates = [(p, v) for _, p, v, c in facts
                      if c in shared and p in temporal]
    if not candidates:
        for subject, predicate, value, compound in facts:
            if predicate not in temporal:
                continue
            if compound is None and subject in question_entities:
                candidates.append((predicate, value))
            elif compound is not None and \
                    in_compound[compound] & set(question_entities):
                candidates.append((predicate, value))
    if not candidates:
        return set()
    top = max(match_count(words, p) for p, _ in candidates)
    return {value for predicate, value in candidates
            if match_count(words, predicate) == top}


def day_bounds(text):
    """First and last day ordinal covered by an ISO date of any precision."""
    parts = [int(p) for p in text.split("-")]
    year = parts[0]
    month = parts[1] if len(parts) > 1 else None
    day = parts[2] if len(parts) > 2 else None
    first = dt.date(year, month or 1, day or 1)
    if day is not None:
        last = first
    elif month is not None:
        last = dt.date(year, month, calendar.monthrange(year, month)[1])
    else:
        last = dt.date(year, 12, 31)
    return first.toordinal(), last.toordinal()


def _role(roles, predicate):
    role = roles.get(predicate, "-")
    if role != "-":
        return role
    name = predicate.lower()
    if "start" in name or "joined" in name or "from" in name:
        return "begin"
    if "end" in name or "left" in name:
        return "end"
    return "point"


def _scope(dated, roles):
    begins, ends = [], []
    for predicate, value in dated:
        first, last = day_bounds(value)
        role = _role(roles, predicate)
        if role in ("begin", "point"):
            begins.append(first)
        if role in ("end", "point"):
            ends.append(last)
    return (min(begins) if begins else -math.inf,
            max(ends) if ends else math.inf)


def scoped_values(path, subject, predicate):
    """Value to scope for every ``subject predicate value`` fact held in a
    compound, the scope spanning the compound's dates."""
    _, temporal, facts, roles = read_raw_kb(path)
    scopes = {}
    for s, p, value, compound in facts:
        if s != subject or p != predicate or compound is None:
            continue
        dated = [(p2, v2) for _, p2, v2, c2 in facts
                 if c2 == compound and p2 in temporal]
        scopes[value] = _scope(dated, roles)
    return scopes


def entity_scope(path, entity):
    """Scope spanning the entity's own dated facts outside compounds."""
    _, temporal, facts, roles = read_raw_kb(path)
    return _scope([(p, v) for s, p, v, c in facts
                   if s == entity and c is None and p in temporal], roles)


def qualifier_dates(path, subject, value, predicate):
    """ISO dates of ``predicate`` in the compounds holding both ``subject``
    and ``value``."""
    _, _, facts, _ = read_raw_kb(path)
    compounds = {c for c in {f[3] for f in facts if f[3] is not None}
                 if {subject, value} <= _members(facts, c)}
    return {v for s, p, v, c in facts if c in compounds and p == predicate}


def event_dates(path, entity):
    _, temporal, facts, _ = read_raw_kb(path)
    return {v for s, p, v, c in facts if s == entity and p in temporal}


def year(text):
    return day_bounds(text)


def holds(relation, answer, constraint):
    (a1, a2), (c1, c2) = answer, constraint
    return {"BEFORE": a2 <= c1,
            "AFTER": a1 >= c2,
            "DURING": a1 <= c2 <= a2,
            "IN": a1 <= c1 <= a2}[relation]


def constrain(scopes, relation, constraint):
    return {value for value, scope in scopes.items()
            if holds(relation, scope, constraint)}


def pick(scopes, rank):
    """The value at ``rank`` (1-based, -1 for last) in order of scope."""
    ordered = sorted(scopes, key=lambda v: (scopes[v], v))
    index = rank - 1 if rank > 0 else rank
    return {ordered[index]}
