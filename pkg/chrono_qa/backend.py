"""
Question answering backends. A backend answers one rewritten sub-question at
a time and reports, per answer, the KB predicate it was derived from. The
builtin backend matches question words against predicate names of the
question entities; the external backend talks to a child process over a
line-oriented JSON protocol:

    request   {"id": ..., "question": ..., "kind": "ENTITY" | "DATE"}
    response  {"id": ..., "answers": [{"value": ..., "predicates": [...]}]}
"""

import itertools
import json
import logging
import shlex
import subprocess
import threading
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Protocol, Tuple, runtime_checkable

from spacy.lang.en.stop_words import STOP_WORDS

from .annotation import Annotator
from .constants import WH_WORDS
from .errors import (BackendError, ConfigurationError, NoEntityResolved,
                     NoPredicateMatched)
from .kb import KBStore
from .model import (AnnotatedQuestion, Answer, AnswerSet, Fact, Interval,
                    Literal, TimePoint)
from .similarity import (Embeddings, RelationWords, bridge_words,
                         question_predicate_score)

logger = logging.getLogger(__name__)

FUNCTION_POS = frozenset({"AUX", "DET", "ADP", "PRON", "PUNCT", "PART",
                          "CCONJ", "SCONJ", "NUM"})


class AnswerKind(str, Enum):
    ENTITY = "ENTITY"
    DATE = "DATE"


@dataclass(frozen=True)
class BackendQuery:
    question: str
    kind: AnswerKind = AnswerKind.ENTITY


@dataclass(frozen=True)
class BackendResult:
    answers: AnswerSet
    kind: AnswerKind = AnswerKind.ENTITY

    def __post_init__(self):
        if self.kind is AnswerKind.DATE and \
                not all(isinstance(a.value, TimePoint) for a in self.answers):
            raise BackendError("DATE results may only contain dates")


@runtime_checkable
class Backend(Protocol):
    """Protocol defining the interface for backends. Backends must be safe
    for concurrent `answer` calls unless they set `single_flight`, in which
    case callers send one query at a time."""
    single_flight: bool

    def answer(self, query: BackendQuery) -> BackendResult:
        ...

    def close(self) -> None:
        ...


def content_words(q: AnnotatedQuestion) -> List[str]:
    """Lower-cased question words outside of entity, temporal expression,
    signal and ordinal spans, without question words, function words and
    stop words."""
    covered = set()
    layers = list(q.entity_spans) + list(q.timex_spans) + list(q.signal_spans)
    if q.ordinal_span is not None:
        layers.append(q.ordinal_span)
    for span in layers:
        covered.update(range(span.start, span.end))
    words = []
    for token in q.tokens:
        word = token.surface.lower()
        if token.index in covered or token.pos in FUNCTION_POS:
            continue
        if word in WH_WORDS or word in STOP_WORDS or not word.isalpha():
            continue
        words.append(word)
    return words


def _rank(scores: Dict[str, Tuple[float, int]]) -> List[str]:
    """Predicates by score, then overlap count, then name."""
    return sorted(scores, key=lambda p: (-scores[p][0], -scores[p][1], p))


def _entity_answers(q: AnnotatedQuestion, store: KBStore, entities: List[str],
                    words: List[str], embeddings: Optional[Embeddings]
                    ) -> AnswerSet:
    values: Dict[str, List] = defaultdict(list)
    for entity in entities:
        for fact in store.facts_about(entity):
            if not store.is_temporal(fact.predicate):
                values[fact.predicate].append(fact.object)
        for fact in store.facts_with_object(entity):
            if not store.is_temporal(fact.predicate):
                values[fact.predicate].append(fact.subject)
    scores = {p: question_predicate_score(words, p, embeddings)
              for p in values}
    ranked = _rank(scores)
    if not ranked or scores[ranked[0]][0] <= 0:
        raise NoPredicateMatched(f"no predicate of {', '.join(entities)} "
                                 f"matches {q.text!r}")
    best = ranked[0]
    answers = []
    for value in dict.fromkeys(values[best]):
        if isinstance(value, Literal):
            value = value.value
        if value in entities:
            continue
        answers.append(Answer(value, predicates=(best,)))
    return AnswerSet(tuple(dict.fromkeys(answers)))


def _temporal_candidates(store: KBStore, entities: List[str]) -> List[Fact]:
    if len(entities) > 1:
        shared = [c for c in store.compounds_of(entities[0])
                  if all(c in store.compounds_of(e) for e in entities[1:])]
        facts = [f for c in shared
                 for f in store.temporal_facts(store.facts_in_compound(c))]
        if facts:
            return facts
    facts = []
    for entity in entities:
        facts.extend(f for f in store.temporal_facts(store.facts_about(entity))
                     if f.compound_id is None)
        for compound in store.compounds_of(entity):
            facts.extend(store.temporal_facts(
                store.facts_in_compound(compound)))
    return list(dict.fromkeys(facts))


def _date_answers(q: AnnotatedQuestion, store: KBStore, entities: List[str],
                  words: List[str], embeddings: Optional[Embeddings]
                  ) -> AnswerSet:
    facts = _temporal_candidates(store, entities)
    if not facts:
        raise NoPredicateMatched(f"no temporal facts about "
                                 f"{', '.join(entities)}")
    scores = {f.predicate: question_predicate_score(words, f.predicate,
                                                    embeddings)
              for f in facts}
    best_score = max(score for score, _ in scores.values())
    best = {p for p, (score, _) in scores.items() if score == best_score}
    answers: Dict[TimePoint, Answer] = {}
    for fact in facts:
        if fact.predicate not in best or fact.object in answers:
            continue
        answers[fact.object] = Answer(fact.object,
                                      (Interval(fact.object, fact.object),),
                                      (fact.predicate,))
    return AnswerSet(tuple(answers.values()))


def answer_subquestion(q: AnnotatedQuestion,
                       store: KBStore,
                       kind: AnswerKind = AnswerKind.ENTITY,
                       embeddings: Optional[Embeddings] = None,
                       relation_words: Optional[RelationWords] = None
                       ) -> BackendResult:
    """Answer a sub-question over the KB by naive predicate matching.

    Each predicate touching a question entity is scored against the content
    words of the question. ENTITY questions return the objects (or subjects
    for inverse matches) of the best non-temporal predicate. DATE questions
    return the dates of every top-scoring temporal predicate, from compounds
    shared by all question entities when there are such.

    Args:
        q (AnnotatedQuestion): Annotated sub-question.
        store (KBStore): The knowledge base.
        kind (AnswerKind): Expected answer kind.
        embeddings (dict): Optional word vectors for scoring.
        relation_words (dict): Optional question words standing for
            predicate tokens ("husband" for ``spouse``).

    Returns:
        BackendResult: Answers with the predicate they were derived from.

    Raises:
        NoEntityResolved: If the question mentions no KB entity.
        NoPredicateMatched: If no predicate of the entities matches.
    """
    entities = q.entity_ids()
    if not entities:
        raise NoEntityResolved(f"no KB entity in {q.text!r}")
    words = bridge_words(content_words(q), relation_words)
    if kind is AnswerKind.DATE:
        answers = _date_answers(q, store, entities, words, embeddings)
    else:
        answers = _entity_answers(q, store, entities, words, embeddings)
    logger.debug("Answered %r with %s", q.text, answers.keys())
    return BackendResult(answers, kind)


class BuiltinBackend:
    """Backend answering over the in-memory KB; safe for concurrent use."""
    single_flight = False

    def __init__(self,
                 store: KBStore,
                 annotator: Annotator,
                 embeddings: Optional[Embeddings] = None,
                 relation_words: Optional[RelationWords] = None):
        self.store = store
        self.annotator = annotator
        self.embeddings = embeddings
        self.relation_words = relation_words

    def answer(self, query: BackendQuery) -> BackendResult:
        q = self.annotator.annotate(query.question)
        return answer_subquestion(q, self.store, query.kind, self.embeddings,
                                  self.relation_words)

    def close(self) -> None:
        pass


class ExternalBackend:
    """Backend delegating to a child process speaking the line JSON protocol.
    The process is started on first use; queries are sent one at a time."""
    single_flight = True

    def __init__(self, command: str):
        self.command = shlex.split(command)
        if not self.command:
            raise ConfigurationError("external backend command is empty")
        self._process: Optional[subprocess.Popen] = None
        self._lock = threading.Lock()
        self._ids = itertools.count(1)

    def _start(self) -> subprocess.Popen:
        if self._process is None or self._process.poll() is not None:
            logger.debug("Starting backend process %s", self.command)
            try:
                self._process = subprocess.Popen(
                    self.command, stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE, text=True, encoding="utf-8",
                    bufsize=1)
            except OSError as e:
                raise BackendError(f"cannot start backend "
                                   f"{self.command[0]!r}: {e}") from e
        return self._process

    def answer(self, query: BackendQuery) -> BackendResult:
        with self._lock:
            process = self._start()
            query_id = str(next(self._ids))
            request = {"id": query_id, "question": query.question,
                       "kind": query.kind.value}
            try:
                process.stdin.write(json.dumps(request) + "\n")
                process.stdin.flush()
                line = process.stdout.readline()
            except (BrokenPipeError, OSError) as e:
                raise BackendError(f"backend process failed: {e}") from e
        if not line:
            raise BackendError("backend process closed its output")
        return self._parse_response(line, query_id, query.kind)

    def _parse_response(self, line: str, query_id: str,
                        kind: AnswerKind) -> BackendResult:
        try:
            response = json.loads(line)
        except json.JSONDecodeError as e:
            raise BackendError(f"backend sent invalid JSON: {e}") from e
        if not isinstance(response, dict) or \
                str(response.get("id")) != query_id:
            raise BackendError(f"backend response does not answer query "
                               f"{query_id}")
        answers = []
        for item in response.get("answers", []):
            value = item.get("value")
            if not isinstance(value, str):
                raise BackendError(f"answer value must be a string: {item}")
            if kind is AnswerKind.DATE:
                try:
                    point = TimePoint.parse(value)
                except ValueError as e:
                    raise BackendError(f"backend sent an invalid date: "
                                       f"{e}") from e
                answers.append(Answer(point, (Interval(point, point),),
                                      tuple(item.get("predicates", []))))
            else:
                answers.append(Answer(value,
                                      predicates=tuple(
                                          item.get("predicates", []))))
        return BackendResult(AnswerSet(tuple(answers)), kind)

    def close(self) -> None:
        with self._lock:
            if self._process is None:
                return
            logger.debug("Stopping backend process %s", self.command)
            self._process.stdin.close()
            try:
                self._process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._process.kill()
                self._process.wait()
            self._process.stdout.close()
            self._process = None


def make_backend(selector: str,
                 store: KBStore,
                 annotator: Annotator,
                 embeddings: Optional[Embeddings] = None,
                 relation_words: Optional[RelationWords] = None) -> Backend:
    """Create the backend named by ``builtin`` or ``cmd:<command line>``."""
    if selector == "builtin":
        return BuiltinBackend(store, annotator, embeddings, relation_words)
    if selector.startswith("cmd:") and selector[4:].strip():
        return ExternalBackend(selector[4:])
    raise ConfigurationError(f"unknown backend {selector!r}, expected "
                             f"'builtin' or 'cmd:<command>'")
