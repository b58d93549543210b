"""
Time scope retrieval for candidate answers. A candidate derived from a fact
inside a compound takes its scope from the compound's temporal qualifiers.
Otherwise the temporal predicates of compounds linking the question entity
and the candidate are ranked by similarity to the candidate's predicate and
the best single date or begin/end pair is used.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

from .constants import (BEGIN_ROLE_TOKENS, END_ROLE_TOKENS,
                        PREDICATE_STOP_TOKENS)
from .errors import NoScopeFound
from .kb import KBStore, Role, interval_from_qualifiers
from .model import AnswerValue, Fact, Interval, TimePoint
from .similarity import (Embeddings, predicate_similarity,
                         shared_token_count, split_predicate_name)

logger = logging.getLogger(__name__)


def pair_key(predicate: str) -> str:
    """Predicate name without its role tokens, shared by the begin and end
    predicates of one pair (``sportsTeam.captain.fromDate`` and
    ``sportsTeam.captain.toDate`` give ``sportsTeam.captain``)."""
    parts = predicate.split(".")
    ignored = BEGIN_ROLE_TOKENS | END_ROLE_TOKENS | PREDICATE_STOP_TOKENS
    remaining = [t for t in split_predicate_name(parts[-1])
                 if t not in ignored]
    return ".".join(parts[:-1] + (["".join(remaining)] if remaining else []))


def _links(fact: Fact, answer: str, entities: Sequence[str]) -> bool:
    if entities:
        return (fact.subject in entities and fact.object == answer) or \
            (fact.object in entities and fact.subject == answer)
    return fact.object == answer or fact.subject == answer


def select_scope_predicates(provenance: str,
                            candidates: Sequence[str],
                            store: KBStore,
                            embeddings: Optional[Embeddings] = None
                            ) -> Tuple[str, ...]:
    """Choose the temporal predicate(s) scoping facts of the provenance
    predicate: the most similar POINT predicate or BEGIN/END pair. A pair
    scores the mean similarity of its members; a BEGIN or END without a
    partner counts as a single predicate.

    Returns:
        Tuple[str, ...]: One POINT predicate, a (BEGIN, END) pair or a lone
            BEGIN or END; empty without candidates.
    """
    def similarity(name: str) -> float:
        return predicate_similarity(provenance, name, embeddings)

    options: List[Tuple[float, int, str, Tuple[str, ...]]] = []
    groups: Dict[str, Dict[Role, List[str]]] = defaultdict(
        lambda: defaultdict(list))
    for name in dict.fromkeys(candidates):
        role = store.role(name)
        if role is Role.POINT:
            options.append((similarity(name),
                            shared_token_count(provenance, name), name,
                            (name,)))
        elif role is not None:
            groups[pair_key(name)][role].append(name)

    for group in groups.values():
        begins, ends = group[Role.BEGIN], group[Role.END]
        if begins and ends:
            for begin in begins:
                for end in ends:
                    options.append(((similarity(begin) + similarity(end)) / 2,
                                    max(shared_token_count(provenance, begin),
                                        shared_token_count(provenance, end)),
                                    begin, (begin, end)))
            continue
        for name in begins + ends:
            options.append((similarity(name),
                            shared_token_count(provenance, name), name,
                            (name,)))

    if not options:
        return ()
    return min(options, key=lambda o: (-o[0], -o[1], o[2]))[3]


def retrieve_time_scope(answer: AnswerValue,
                        predicate: str,
                        store: KBStore,
                        entities: Sequence[str] = (),
                        embeddings: Optional[Embeddings] = None
                        ) -> List[Interval]:
    """Retrieve the time scopes of a candidate answer.

    Args:
        answer (AnswerValue): Candidate entity id, or a date which is its own
            scope.
        predicate (str): Predicate the candidate was derived from.
        store (KBStore): The knowledge base.
        entities (Sequence[str]): Entities of the question the candidate
            answers; inferred from the provenance facts when empty.
        embeddings (dict): Optional word vectors for predicate similarity.

    Returns:
        List[Interval]: One scope per compound, in KB order. Endpoints are
            dates stored in the KB.

    Raises:
        NoScopeFound: If no temporal qualifier scopes the candidate.
    """
    if isinstance(answer, TimePoint):
        return [Interval(answer, answer)]

    provenance = [f for f in store.facts_with_predicate(predicate)
                  if _links(f, answer, entities)]
    scopes: List[Interval] = []
    for compound in dict.fromkeys(f.compound_id for f in provenance
                                  if f.compound_id is not None):
        scope = interval_from_qualifiers(
            store, store.temporal_facts(store.facts_in_compound(compound)))
        if scope is not None:
            scopes.append(scope)
    if scopes:
        return list(dict.fromkeys(scopes))

    linked = list(entities) or list(dict.fromkeys(
        f.object if f.subject == answer else f.subject for f in provenance))
    compounds = [c for c in store.compounds_of(answer)
                 if any(c in store.compounds_of(e) for e in linked
                        if isinstance(e, str))]
    temporal = {c: store.temporal_facts(store.facts_in_compound(c))
                for c in compounds}
    chosen = select_scope_predicates(
        predicate, [f.predicate for facts in temporal.values() for f in facts],
        store, embeddings)
    for compound, facts in temporal.items():
        scope = interval_from_qualifiers(
            store, [f for f in facts if f.predicate in chosen])
        if scope is not None:
            scopes.append(scope)
    if not scopes:
        raise NoScopeFound(f"no time scope for {answer} via {predicate}")
    return list(dict.fromkeys(scopes))
