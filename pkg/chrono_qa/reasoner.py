"""
Temporal reasoning over candidate answers: constraint filtering with the
begin/end inequalities of each relation, ordinal selection over time scopes,
intersection of candidate sets and Allen relation classification.

All inequalities are non-strict. Open interval sides compare as minus or plus
infinity, see `Interval.lower` and `Interval.upper`.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from .errors import DegenerateInterval, EmptyTemporalResult, UnscopedCandidate
from .model import (AllenRelation, Answer, AnswerSet, Interval, Ordinal,
                    OrdinalKind, OverlapRow, RelationKind, TemporalRelation,
                    TimePoint, interval_from_point)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintSpec:
    relation: TemporalRelation
    constraint_interval: Interval

    def to_json(self) -> Dict:
        return {"relation": str(self.relation),
                "interval": self.constraint_interval.to_json()}


def cast_results_to_interval(results: Sequence[Union[TimePoint, Interval]]
                             ) -> Interval:
    """Cast the dates answering a temporal sub-question into one interval.

    A single interval is returned unchanged. Otherwise every result is cast to
    the days it covers and the hull from the earliest begin to the latest end
    is returned.

    Raises:
        EmptyTemporalResult: If there are no results.
    """
    if not results:
        raise EmptyTemporalResult("temporal sub-question returned no dates")
    if len(results) == 1 and isinstance(results[0], Interval):
        return results[0]
    intervals = [r if isinstance(r, Interval) else interval_from_point(r)
                 for r in results]
    first = min(intervals, key=lambda i: i.lower())
    last = max(intervals, key=lambda i: i.upper())
    return Interval(first.begin, last.end)


def satisfies(relation: TemporalRelation, ans: Interval,
              cons: Interval) -> bool:
    """Check an answer scope against a constraint interval.

    BEFORE: end_ans <= begin_cons. AFTER: begin_ans >= end_cons. OVERLAP
    rows: DURING_WHILE_WHEN begin_ans <= end_cons <= end_ans,
    SINCE_UNTIL_IN begin_ans <= begin_cons <= end_ans, SAME_TIME_AS
    begin_cons <= begin_ans <= end_ans <= end_cons.
    """
    begin_ans, end_ans = ans.lower(), ans.upper()
    begin_cons, end_cons = cons.lower(), cons.upper()
    if relation.kind is RelationKind.BEFORE:
        return end_ans <= begin_cons
    if relation.kind is RelationKind.AFTER:
        return begin_ans >= end_cons
    if relation.overlap_row is OverlapRow.DURING_WHILE_WHEN:
        return begin_ans <= end_cons <= end_ans
    if relation.overlap_row is OverlapRow.SINCE_UNTIL_IN:
        return begin_ans <= begin_cons <= end_ans
    return begin_cons <= begin_ans <= end_ans <= end_cons


def drop_unscoped(candidates: AnswerSet, reason: str) -> AnswerSet:
    """Remove the candidates without a time scope, reporting each one as
    ``unscoped candidate <key> excluded by <reason>``."""
    kept = []
    diagnostics = []
    for answer in candidates:
        if answer.unscoped or not answer.time_scopes:
            message = f"unscoped candidate {answer.key} excluded by {reason}"
            logger.info(message)
            diagnostics.append(message)
            continue
        kept.append(answer)
    return AnswerSet(tuple(kept), candidates.diagnostics + tuple(diagnostics))


def filter_candidates(candidates: AnswerSet, spec: ConstraintSpec) -> AnswerSet:
    """Keep the candidates with at least one time scope satisfying the
    constraint, in input order. Unscoped candidates are dropped and reported
    in the diagnostics."""
    scoped = drop_unscoped(candidates, f"{spec.relation} constraint")
    kept = []
    for answer in scoped:
        if any(satisfies(spec.relation, scope, spec.constraint_interval)
               for scope in answer.time_scopes):
            kept.append(answer)
    return AnswerSet(tuple(kept), scoped.diagnostics)


def _earliest_scope(answer: Answer) -> Tuple[float, float]:
    return min((s.lower(), s.upper()) for s in answer.time_scopes)


def sort_by_scope(candidates: AnswerSet) -> List[Answer]:
    """Order candidates by their earliest scope, then by scope end, then by
    key.

    Raises:
        UnscopedCandidate: If a candidate has no time scope.
    """
    for answer in candidates:
        if not answer.time_scopes:
            raise UnscopedCandidate(f"candidate {answer.key} has no time "
                                    f"scope to order by")
    return sorted(candidates, key=lambda a: (*_earliest_scope(a), a.key))


def apply_ordinal(candidates: AnswerSet, ordinal: Ordinal) -> AnswerSet:
    """Select the first, last or n-th candidate in scope order. An
    out-of-range rank gives an empty set."""
    ordered = sort_by_scope(candidates)
    if not ordered:
        return AnswerSet((), candidates.diagnostics)
    if ordinal.kind is OrdinalKind.FIRST:
        chosen = [ordered[0]]
    elif ordinal.kind is OrdinalKind.LAST:
        chosen = [ordered[-1]]
    else:
        chosen = [ordered[ordinal.n - 1]] if ordinal.n <= len(ordered) else []
    return AnswerSet(tuple(chosen), candidates.diagnostics)


def intersect(sets: Sequence[AnswerSet]) -> AnswerSet:
    """Answers present in every set, in the order of the first set. Scopes
    and predicates of the same answer are merged."""
    if not sets:
        raise ValueError("intersect needs at least one answer set")
    common = set(sets[0].keys())
    for other in sets[1:]:
        common &= set(other.keys())

    merged: Dict[str, Answer] = {}
    for answer_set in sets:
        for answer in answer_set:
            if answer.key not in common:
                continue
            previous = merged.get(answer.key)
            if previous is None:
                merged[answer.key] = answer
                continue
            scopes = tuple(dict.fromkeys(previous.time_scopes
                                         + answer.time_scopes))
            predicates = tuple(dict.fromkeys(previous.predicates
                                             + answer.predicates))
            merged[answer.key] = Answer(previous.value, scopes, predicates,
                                        unscoped=not scopes and (
                                            previous.unscoped
                                            or answer.unscoped))
    diagnostics = tuple(d for s in sets for d in s.diagnostics)
    ordered = [merged[key] for key in dict.fromkeys(sets[0].keys())
               if key in merged]
    return AnswerSet(tuple(ordered), diagnostics)


def allen_relation(i1: Interval, i2: Interval) -> AllenRelation:
    """Classify two closed intervals into one of the 13 Allen relations.

    Raises:
        DegenerateInterval: If an interval is open or a single point.
    """
    for interval in (i1, i2):
        if interval.is_open or interval.lower() >= interval.upper():
            raise DegenerateInterval(f"Allen relations need closed intervals "
                                     f"with begin < end, got {interval}")
    a1, a2 = i1.lower(), i1.upper()
    b1, b2 = i2.lower(), i2.upper()
    if a2 < b1:
        return AllenRelation.BEFORE
    if a2 == b1:
        return AllenRelation.MEETS
    if b2 < a1:
        return AllenRelation.AFTER
    if b2 == a1:
        return AllenRelation.MET_BY
    if a1 == b1 and a2 == b2:
        return AllenRelation.EQUAL
    if a1 == b1:
        return AllenRelation.STARTS if a2 < b2 else AllenRelation.STARTED_BY
    if a2 == b2:
        return AllenRelation.FINISHES if a1 > b1 else AllenRelation.FINISHED_BY
    if b1 < a1 and a2 < b2:
        return AllenRelation.DURING
    if a1 < b1 and b2 < a2:
        return AllenRelation.CONTAINS
    if a1 < b1:
        return AllenRelation.OVERLAPS
    return AllenRelation.OVERLAPPED_BY
