"""
Default annotator built on spaCy. Works without any downloaded model: a blank
English pipeline gets part-of-speech tags from a small word lexicon
(`attribute_ruler`) and a suffix/shape fallback component. A trained pipeline
can be passed instead and its tagger is used as is.
"""

import logging
import threading
from pathlib import Path
from typing import List, Optional, Union

import spacy
from spacy.language import Language
from spacy.matcher import PhraseMatcher
from spacy.tokens import Doc, Span
from spacy.util import filter_spans

from ..constants import DEFAULT_LEXICON_PATH, SUBJECT_PRONOUNS, WH_WORDS
from ..detector import (OrdinalDictionary, SignalDictionary,
                        has_temporal_answer_type)
from ..errors import ConfigurationError
from ..kb import KBStore
from ..model import (AnnotatedQuestion, EntitySpan, OrdinalSpan, SignalSpan,
                     Token)
from ..timex import TimexTagger
from ..utils import read_records

logger = logging.getLogger(__name__)

FALLBACK_COMPONENT = "chrono_qa_pos_fallback"


@Language.component(FALLBACK_COMPONENT)
def pos_fallback(doc: Doc) -> Doc:
    """Tag tokens the lexicon left untagged by their suffix and shape."""
    for token in doc:
        if token.pos_:
            continue
        text = token.lower_
        if token.is_punct:
            pos, tag = "PUNCT", "."
        elif token.like_num:
            pos, tag = "NUM", "CD"
        elif text in ("'s", "’s"):
            pos, tag = "PART", "POS"
        elif token.is_alpha and text.endswith("ing") and len(text) > 4:
            pos, tag = "VERB", "VBG"
        elif token.is_alpha and text.endswith("ed") and len(text) > 3:
            pos, tag = "VERB", "VBD"
        elif token.i > 0 and token.text[:1].isupper():
            pos, tag = "PROPN", "NNP"
        elif text.endswith("s") and not text.endswith("ss") and len(text) > 3:
            pos, tag = "NOUN", "NNS"
        else:
            pos, tag = "NOUN", "NN"
        token.pos_ = pos
        token.tag_ = tag
    return doc


def build_rule_pipeline(lexicon_path: Union[str, Path] = DEFAULT_LEXICON_PATH
                        ) -> Language:
    """Create a blank English pipeline tagging parts of speech from a
    ``word<TAB>POS<TAB>TAG`` lexicon plus suffix rules.

    Raises:
        ConfigurationError: If the lexicon is missing or malformed.
    """
    try:
        records = read_records(lexicon_path)
    except OSError as e:
        raise ConfigurationError(f"cannot read lexicon {lexicon_path}: "
                                 f"{e}") from e
    patterns = []
    for line_number, fields in records:
        if len(fields) != 3 or not all(f.strip() for f in fields):
            raise ConfigurationError(f"{lexicon_path}:{line_number}: expected "
                                     f"'word<TAB>POS<TAB>TAG' entry")
        word, pos, tag = (f.strip() for f in fields)
        patterns.append({"patterns": [[{"LOWER": word.lower()}]],
                         "attrs": {"POS": pos, "TAG": tag}})

    nlp = spacy.blank("en")
    ruler = nlp.add_pipe("attribute_ruler")
    try:
        ruler.add_patterns(patterns)
    except ValueError as e:
        raise ConfigurationError(f"invalid lexicon {lexicon_path}: {e}") from e
    nlp.add_pipe(FALLBACK_COMPONENT)
    return nlp


class SpacyAnnotator:
    """Annotator for questions over one KB. Initiated with the KB store, a
    temporal expression tagger and the signal and ordinal dictionaries. KB
    entities, signals and ordinals are matched case-insensitively, the
    longest match winning. Third-person subject pronouns after the first
    entity mention are replaced by that entity.
    """
    def __init__(self,
                 store: KBStore,
                 tagger: TimexTagger,
                 signals: SignalDictionary,
                 ordinals: OrdinalDictionary,
                 nlp: Optional[Language] = None,
                 lexicon_path: Union[str, Path] = DEFAULT_LEXICON_PATH):
        self.store = store
        self.tagger = tagger
        self.signals = signals
        self.ordinals = ordinals
        self.nlp = nlp or build_rule_pipeline(lexicon_path)
        self._lock = threading.Lock()

        self._entity_matcher = PhraseMatcher(self.nlp.vocab, attr="LOWER")
        for surface, entity_id in store.surface_forms():
            self._entity_matcher.add(entity_id, [self.nlp.make_doc(surface)])
        self._signal_matcher = self._phrase_matcher(signals.phrases())
        self._ordinal_matcher = self._phrase_matcher(ordinals.phrases())

    def _phrase_matcher(self, phrases: List[str]) -> PhraseMatcher:
        matcher = PhraseMatcher(self.nlp.vocab, attr="LOWER")
        for phrase in phrases:
            matcher.add(phrase, [self.nlp.make_doc(phrase)])
        return matcher

    def _longest(self, matcher: PhraseMatcher, doc: Doc) -> List[Span]:
        spans = [Span(doc, start, end, label=match_id)
                 for match_id, start, end in matcher(doc)]
        return sorted(filter_spans(spans), key=lambda s: s.start)

    def annotate(self, text: str) -> AnnotatedQuestion:
        """Annotate a question; see `Annotator.annotate`."""
        with self._lock:
            doc = self.nlp(text)
            entity_matches = self._longest(self._entity_matcher, doc)
            signal_matches = self._longest(self._signal_matcher, doc)
            ordinal_matches = self._longest(self._ordinal_matcher, doc)
            timex_spans = self.tagger.tag_doc(doc)

        tokens = [Token(t.text, t.pos_ or "X", t.i, t.tag_) for t in doc]
        entity_spans = [EntitySpan(s.start, s.end, s.label_)
                        for s in entity_matches]
        entity_spans = self._substitute_pronouns(doc, tokens, entity_spans)

        def overlaps(span, layer):
            return any(span.start < other.end and other.start < span.end
                       for other in layer)

        signal_spans = []
        for match in signal_matches:
            phrase = match.label_
            if match.start == 0 and phrase in WH_WORDS:
                continue
            if overlaps(match, timex_spans) or overlaps(match, entity_spans):
                continue
            signal_spans.append(SignalSpan(match.start, match.end, phrase))

        ordinal_span = None
        for match in ordinal_matches:
            ordinal = self.ordinals.lookup(match.label_)
            if ordinal is None or overlaps(match, timex_spans):
                continue
            ordinal_span = OrdinalSpan(match.start, match.end, ordinal)
            break

        return AnnotatedQuestion(text=text,
                                 tokens=tuple(tokens),
                                 entity_spans=tuple(entity_spans),
                                 timex_spans=tuple(timex_spans),
                                 signal_spans=tuple(signal_spans),
                                 ordinal_span=ordinal_span,
                                 answer_type_temporal=has_temporal_answer_type(
                                     text))

    def _substitute_pronouns(self,
                             doc: Doc,
                             tokens: List[Token],
                             entity_spans: List[EntitySpan]
                             ) -> List[EntitySpan]:
        """Replace "he"/"she" after the first entity mention by that entity.
        Rewrites `tokens` in place and returns the extended entity spans."""
        if not entity_spans:
            return entity_spans
        subject = entity_spans[0]
        surface = doc[subject.start:subject.end].text
        added = []
        for token in tokens[subject.end:]:
            if token.surface.lower() not in SUBJECT_PRONOUNS:
                continue
            tokens[token.index] = Token(surface, "PROPN", token.index, "NNP")
            added.append(EntitySpan(token.index, token.index + 1,
                                    subject.entity_id))
            logger.debug("Resolved %r at %d to %s", token.surface,
                         token.index, subject.entity_id)
        return sorted(entity_spans + added, key=lambda s: s.start)
