"""
End-to-end question answering. A question is annotated and checked for
temporal cues; non-temporal questions go straight to the backend. Temporal
questions are decomposed, the head sub-questions answered and intersected,
the temporal sub-question answered and cast into a constraint interval, and
the candidates are scoped, filtered and ordered.

A failing stage never raises: the answer set comes back empty with a
``"<stage>: <message>"`` diagnostic.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .annotation import Annotator
from .backend import (AnswerKind, Backend, BackendQuery, make_backend)
from .config import PipelineConfig
from .decomposer import DecompositionResult, decompose
from .detector import (DetectionResult, SignalDictionary, detect,
                       load_ordinal_dictionary, load_signal_dictionary)
from .errors import ChronoQAError
from .kb import KBStore, load_kb
from .model import (AnnotatedQuestion, Answer, AnswerSet, Interval,
                    TimePoint)
from .reasoner import (ConstraintSpec, apply_ordinal, cast_results_to_interval,
                       drop_unscoped, filter_candidates, intersect)
from .scopes import retrieve_time_scope
from .similarity import Embeddings, load_embeddings, load_relation_words
from .spacy_annotator import SpacyAnnotator, build_rule_pipeline
from .timex import EventDictionary, TimexTagger, build_event_dictionary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineTrace:
    question: str
    answers: AnswerSet
    detection: Optional[DetectionResult] = None
    decomposition: Optional[DecompositionResult] = None
    constraints: Tuple[ConstraintSpec, ...] = ()

    def to_json(self) -> Dict[str, Any]:
        return {"question": self.question,
                "detection": self.detection.to_json()
                if self.detection else None,
                "decomposition": self.decomposition.to_json()
                if self.decomposition else None,
                "constraints": [c.to_json() for c in self.constraints],
                **self.answers.to_json()}


class _StageFailed(Exception):
    def __init__(self, stage: str, error: ChronoQAError):
        self.diagnostic = f"{stage}: {error}"
        super().__init__(self.diagnostic)


class Pipeline:
    """Question answering pipeline over one KB and backend. Use
    `Pipeline.from_config` to build it from files; closing the pipeline
    closes the backend."""

    def __init__(self,
                 store: KBStore,
                 annotator: Annotator,
                 backend: Backend,
                 signals: SignalDictionary,
                 events: Optional[EventDictionary] = None,
                 embeddings: Optional[Embeddings] = None):
        if not isinstance(annotator, Annotator):
            raise TypeError("annotator must implement the Annotator protocol")
        if not isinstance(backend, Backend):
            raise TypeError("backend must implement the Backend protocol")
        self.store = store
        self.annotator = annotator
        self.backend = backend
        self.signals = signals
        self.events = events or EventDictionary()
        self.embeddings = embeddings

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "Pipeline":
        """Load KB, dictionaries and optional embeddings and wire up the
        default annotator and the configured backend.

        Raises:
            ConfigurationError: On invalid configuration or dictionaries.
            DataError: On a malformed KB or embedding file.
        """
        config.validate()
        store = load_kb(config.kb_path)
        embeddings = load_embeddings(config.embeddings_path) \
            if config.embeddings_path else None
        signals = load_signal_dictionary(config.signals_path)
        ordinals = load_ordinal_dictionary(config.ordinals_path)
        events = build_event_dictionary(store)
        nlp = build_rule_pipeline(config.lexicon_path)
        tagger = TimexTagger(config.reference_point(), events, nlp=nlp)
        annotator = SpacyAnnotator(store, tagger, signals, ordinals, nlp=nlp)
        relation_words = load_relation_words(config.relations_path)
        backend = make_backend(config.backend, store, annotator, embeddings,
                               relation_words)
        return cls(store, annotator, backend, signals, events, embeddings)

    def __enter__(self) -> "Pipeline":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def close(self) -> None:
        self.backend.close()

    def annotate(self, question: str) -> AnnotatedQuestion:
        return self.annotator.annotate(question)

    def detect(self, question: str) -> DetectionResult:
        return detect(self.annotate(question), self.events)

    def decompose(self, question: str) -> DecompositionResult:
        return decompose(self.annotate(question), self.signals)

    def answer(self, question: str) -> AnswerSet:
        """Answer a question; see `trace` for the intermediate results."""
        return self.trace(question).answers

    def trace(self, question: str) -> PipelineTrace:
        """Answer a question and keep the detection, decomposition and
        constraints used on the way."""
        detection = decomposition = None
        constraints: List[ConstraintSpec] = []
        try:
            q = self._stage("annotate", self.annotate, question)
            detection = self._stage("detect", detect, q, self.events)
            kind = AnswerKind.DATE if q.answer_type_temporal \
                else AnswerKind.ENTITY
            if not detection.is_temporal:
                answers = self._stage("answer", self._ask, question, kind)
                return PipelineTrace(question, answers, detection)

            decomposition = self._stage("decompose", decompose, q,
                                        self.signals)
            answers = self._stage("answer", self._answer_heads,
                                  decomposition, kind)
            constraints = list(decomposition.explicit_constraints)
            if decomposition.temporal_subquestion is not None:
                constraints.append(self._stage(
                    "constrain", self._constraint, decomposition))
            ordinal = decomposition.ordinal
            if (constraints or ordinal) and kind is AnswerKind.ENTITY:
                answers = self._stage("scope", self._attach_scopes, answers,
                                      decomposition.nontemporal_subquestions)
            for spec in constraints:
                answers = filter_candidates(answers, spec)
            if ordinal is not None:
                scoped = drop_unscoped(answers, f"ordinal {ordinal}")
                answers = self._stage("reason", apply_ordinal, scoped, ordinal)
        except _StageFailed as e:
            logger.warning("Failed to answer %r: %s", question, e.diagnostic)
            answers = AnswerSet().with_diagnostics(e.diagnostic)
        return PipelineTrace(question, answers, detection, decomposition,
                             tuple(constraints))

    @staticmethod
    def _stage(stage: str, function, *args):
        try:
            return function(*args)
        except ChronoQAError as e:
            raise _StageFailed(stage, e) from e

    def _ask(self, question: str, kind: AnswerKind) -> AnswerSet:
        return self.backend.answer(BackendQuery(question, kind)).answers

    def _answer_heads(self, decomposition: DecompositionResult,
                      kind: AnswerKind) -> AnswerSet:
        return intersect([self._ask(sq, kind)
                          for sq in decomposition.nontemporal_subquestions])

    def _constraint(self, decomposition: DecompositionResult
                    ) -> ConstraintSpec:
        dates = self._ask(decomposition.temporal_subquestion, AnswerKind.DATE)
        interval = cast_results_to_interval([a.value for a in dates])
        return ConstraintSpec(decomposition.relation, interval)

    def _attach_scopes(self, candidates: AnswerSet,
                       subquestions: Tuple[str, ...]) -> AnswerSet:
        entities = []
        for subquestion in subquestions:
            entities.extend(self.annotate(subquestion).entity_ids())
        scoped = []
        for answer in candidates:
            scopes: List[Interval] = list(answer.time_scopes)
            if isinstance(answer.value, TimePoint) and not scopes:
                scopes.append(Interval(answer.value, answer.value))
            for predicate in answer.predicates:
                try:
                    scopes.extend(retrieve_time_scope(
                        answer.value, predicate, self.store, entities,
                        self.embeddings))
                except ChronoQAError as e:
                    logger.info("Candidate %s: %s", answer.key, e)
            scopes = list(dict.fromkeys(scopes))
            scoped.append(Answer(answer.value, tuple(scopes),
                                 answer.predicates, unscoped=not scopes))
        return AnswerSet(tuple(scoped), candidates.diagnostics)


def answer_question(question: str,
                    config: Optional[PipelineConfig] = None) -> AnswerSet:
    """Answer a single question with a pipeline built from ``config``."""
    with Pipeline.from_config(config or PipelineConfig()) as pipeline:
        return pipeline.answer(question)
