"""
Decomposition of temporal questions. A question with a signal clause is split
at the signal into a non-temporal head question and a temporal sub-question
asking for the time of the constraint:

    CASE1  constraint has entity and relation  when <constraint>?
    CASE2  relation but no entity              when <head entity> <constraint>?
    CASE3  entity but no relation              when <constraint> <head>?
    CASE4  constraint is a named event         when did <constraint> happen?

Explicit dates outside the constraint clause ("in 2010", "before 2000") are
cut from the head question and turned into constraints directly.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .constants import WH_WORDS
from .detector import SignalDictionary, is_temporal_usage
from .errors import EmptyConstraint, UnmappedSignal
from .model import (AnnotatedQuestion, Ordinal, OrdinalKind, OverlapRow,
                    RelationKind, SignalSpan, TemporalRelation, Token)
from .reasoner import ConstraintSpec
from .timex import TimexType
from .utils import render_tokens

logger = logging.getLogger(__name__)

DEFAULT_EXPLICIT_RELATION = TemporalRelation(RelationKind.OVERLAP,
                                             OverlapRow.SINCE_UNTIL_IN)

ANCHOR_TYPES = (TimexType.DATE, TimexType.TIME, TimexType.DURATION,
                TimexType.SET)


class Case(str, Enum):
    CASE1 = "CASE1"
    CASE2 = "CASE2"
    CASE3 = "CASE3"
    CASE4 = "CASE4"
    NO_SPLIT = "NO_SPLIT"


@dataclass(frozen=True)
class DecompositionResult:
    nontemporal_subquestions: Tuple[str, ...]
    temporal_subquestion: Optional[str] = None
    relation: Optional[TemporalRelation] = None
    ordinal: Optional[Ordinal] = None
    case_used: Case = Case.NO_SPLIT
    explicit_constraints: Tuple[ConstraintSpec, ...] = ()
    ordinal_inferred: bool = False

    def __post_init__(self):
        if not self.nontemporal_subquestions:
            raise ValueError("at least one non-temporal sub-question needed")
        split = self.case_used is not Case.NO_SPLIT
        if split != (self.temporal_subquestion is not None) or \
                split != (self.relation is not None):
            raise ValueError("temporal sub-question, relation and split case "
                             "go together")

    def to_json(self) -> Dict:
        return {"nontemporal_subquestions": list(self.nontemporal_subquestions),
                "temporal_subquestion": self.temporal_subquestion,
                "relation": str(self.relation) if self.relation else None,
                "ordinal": str(self.ordinal) if self.ordinal else None,
                "ordinal_inferred": self.ordinal_inferred,
                "case": self.case_used.value,
                "explicit_constraints": [c.to_json()
                                         for c in self.explicit_constraints]}


def _content_end(q: AnnotatedQuestion) -> int:
    end = len(q.tokens)
    while end > 0 and q.tokens[end - 1].pos == "PUNCT":
        end -= 1
    return end


def _is_clausal(q: AnnotatedQuestion, start: int, end: int) -> bool:
    """Whether the tokens in ``[start, end)`` hold more than a date, e.g. an
    event, an entity or a verb."""
    if start >= end:
        return True
    for token in q.tokens[start:end]:
        span = q.timex_at(token.index)
        if span is not None and span.timex_type in ANCHOR_TYPES:
            continue
        if token.pos == "DET":
            continue
        return True
    return False


def find_pivot(q: AnnotatedQuestion) -> Optional[SignalSpan]:
    """The leftmost signal used in a temporal sense whose right context is a
    clause rather than a bare date. None when there is no such signal."""
    end = _content_end(q)
    for i, span in enumerate(q.signal_spans):
        # a fragment reaches up to the next signal
        fragment_end = q.signal_spans[i + 1].start \
            if i + 1 < len(q.signal_spans) else end
        if is_temporal_usage(q, span) and \
                _is_clausal(q, span.end, fragment_end):
            return span
    return None


def select_case(constraint: Sequence[Token], q: AnnotatedQuestion) -> Case:
    """Pick the rewrite case for the tokens following the signal.

    Raises:
        EmptyConstraint: If no tokens follow the signal.
    """
    if not constraint:
        raise EmptyConstraint(f"no constraint follows the signal in "
                              f"{q.text!r}")
    head = next((t for t in constraint if t.pos != "DET"), constraint[0])
    span = q.timex_at(head.index)
    if span is not None and span.timex_type is TimexType.EVENT:
        return Case.CASE4
    has_entity = any(q.entity_at(t.index) is not None or t.pos == "PROPN"
                     for t in constraint)
    has_relation = any(t.pos == "VERB" for t in constraint)
    if has_entity and has_relation:
        return Case.CASE1
    if has_relation:
        return Case.CASE2
    return Case.CASE3


def _governing_signal(q: AnnotatedQuestion, start: int
                      ) -> Optional[SignalSpan]:
    # the signal may be separated from the date by a determiner
    for span in q.signal_spans:
        if span.end == start or (span.end == start - 1
                                 and q.tokens[span.end].pos == "DET"):
            return span
    return None


def explicit_constraints(q: AnnotatedQuestion,
                         signals: SignalDictionary,
                         before: int) -> Tuple[List[ConstraintSpec], Set[int]]:
    """Constraints from normalized dates left of token ``before``, with the
    token indices to cut from the head question."""
    constraints = []
    excised: Set[int] = set()
    for span in q.timex_spans:
        if span.start >= before or span.normalized is None or \
                span.timex_type not in (TimexType.DATE, TimexType.TIME):
            continue
        relation = DEFAULT_EXPLICIT_RELATION
        excised.update(range(span.start, span.end))
        governing = _governing_signal(q, span.start)
        if governing is not None:
            relation = signals.lookup(governing.phrase) or relation
            excised.update(range(governing.start, span.start))
        constraints.append(ConstraintSpec(relation, span.normalized))
    return constraints, excised


def _is_singular_answer_type(head: Sequence[Token]) -> bool:
    if len(head) < 2 or head[0].surface.lower() not in ("which", "what"):
        return False
    for token in head[1:]:
        if token.pos == "ADJ":
            continue
        return token.pos == "NOUN" and token.tag == "NN"
    return False


def _question(surfaces: Sequence[str]) -> str:
    return render_tokens(list(surfaces) + ["?"])


def decompose(q: AnnotatedQuestion,
              signals: SignalDictionary) -> DecompositionResult:
    """Split a temporal question into sub-questions.

    Args:
        q (AnnotatedQuestion): Annotated temporal question.
        signals (SignalDictionary): Signal words with their relations.

    Returns:
        DecompositionResult: Head question(s), the temporal sub-question with
            its relation and rewrite case, the ordinal and constraints from
            explicit dates.

    Raises:
        EmptyConstraint: If nothing follows the pivot signal.
        UnmappedSignal: If the pivot signal has no relation in the
            dictionary.
    """
    pivot = find_pivot(q)
    end = _content_end(q)
    head_end = pivot.start if pivot is not None else end
    constraints, excised = explicit_constraints(q, signals, head_end)
    head = [t for t in q.tokens[:head_end] if t.index not in excised]
    while head and head[-1].pos == "PUNCT":
        head.pop()
    ordinal = q.ordinal_span.ordinal if q.ordinal_span else None
    subquestion = _question(t.surface for t in head)

    if pivot is None:
        return DecompositionResult((subquestion,), ordinal=ordinal,
                                   explicit_constraints=tuple(constraints))

    relation = signals.lookup(pivot.phrase)
    if relation is None:
        raise UnmappedSignal(f"signal {pivot.phrase!r} has no relation")
    constraint = list(q.tokens[pivot.end:end])
    case = select_case(constraint, q)
    words = [t.surface for t in constraint]
    rest = head[1:] if head and head[0].surface.lower() in WH_WORDS else head

    if case is Case.CASE1:
        temporal = _question(["when"] + words)
    elif case is Case.CASE2:
        entity = next((q.entity_at(t.index) for t in head
                       if q.entity_at(t.index) is not None), None)
        borrowed = [t.surface for t in q.tokens[entity.start:entity.end]] \
            if entity is not None else []
        temporal = _question(["when"] + borrowed + words)
    elif case is Case.CASE3:
        temporal = _question(["when"] + words + [t.surface for t in rest])
    else:
        temporal = _question(["when", "did"] + words + ["happen"])

    inferred = False
    if ordinal is None and relation.kind in (RelationKind.BEFORE,
                                             RelationKind.AFTER) \
            and _is_singular_answer_type(head):
        ordinal = Ordinal(OrdinalKind.LAST
                          if relation.kind is RelationKind.BEFORE
                          else OrdinalKind.FIRST)
        inferred = True

    logger.debug("Split %r at %r (%s)", q.text, pivot.phrase, case.value)
    return DecompositionResult((subquestion,), temporal, relation, ordinal,
                               case, tuple(constraints), inferred)
