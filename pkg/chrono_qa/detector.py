"""
Detection of temporal questions. A question is temporal when it contains a
temporal expression or a named event, a temporal signal word used in a
temporal sense, an ordinal modifying an entity-bearing noun phrase, or when
its answer type is temporal.

Signal and ordinal words come from small dictionary files shipped as data
(one ``phrase<TAB>relation[:row]`` or ``phrase<TAB>kind[:n]`` entry per line).
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .constants import (ANCHORED_SIGNALS, DEFAULT_ORDINALS_PATH,
                        DEFAULT_SIGNALS_PATH, TEMPORAL_ANSWER_PATTERNS,
                        WH_PRONOUNS, WH_WORDS)
from .errors import ConfigurationError
from .model import AnnotatedQuestion, Ordinal, SignalSpan, TemporalRelation
from .timex import EventDictionary, TimexType
from .utils import read_records

logger = logging.getLogger(__name__)

ANSWER_TYPE_PATTERN = re.compile(
    r"^\s*(?:" + "|".join(re.escape(p) for p in TEMPORAL_ANSWER_PATTERNS)
    + r")\b", re.IGNORECASE)


class Cue(str, Enum):
    TIMEX = "TIMEX"
    EVENT = "EVENT"
    SIGNAL = "SIGNAL"
    ORDINAL = "ORDINAL"
    TEMPORAL_ANSWER_TYPE = "TEMPORAL_ANSWER_TYPE"


@dataclass(frozen=True)
class DetectionResult:
    is_temporal: bool
    cues: FrozenSet[Cue] = frozenset()
    signal: Optional[str] = None
    ordinal: Optional[Ordinal] = None

    def __post_init__(self):
        if self.is_temporal != bool(self.cues):
            raise ValueError("a question is temporal exactly when a cue fired")

    def sorted_cues(self) -> List[Cue]:
        return [cue for cue in Cue if cue in self.cues]

    def to_json(self) -> Dict:
        return {"temporal": self.is_temporal,
                "cues": [c.value for c in self.sorted_cues()],
                "signal": self.signal,
                "ordinal": str(self.ordinal) if self.ordinal else None}


class SignalDictionary:
    """Signal word or phrase to its candidate temporal relations; the first
    candidate is the one used for reasoning."""

    def __init__(self, entries: Mapping[str, Sequence[TemporalRelation]]):
        self._entries: Dict[str, Tuple[TemporalRelation, ...]] = {
            k.lower(): tuple(v) for k, v in entries.items()}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, phrase: str) -> bool:
        return phrase.lower() in self._entries

    def phrases(self) -> List[str]:
        return list(self._entries)

    def candidates(self, phrase: str) -> Tuple[TemporalRelation, ...]:
        return self._entries.get(phrase.lower(), ())

    def lookup(self, phrase: str) -> Optional[TemporalRelation]:
        candidates = self.candidates(phrase)
        return candidates[0] if candidates else None


class OrdinalDictionary:
    """Ordinal word or phrase to its ordinal. Phrases mapped to None are
    non-temporal collocations ("last name") that suppress the ordinal."""

    def __init__(self, entries: Mapping[str, Optional[Ordinal]]):
        self._entries = {k.lower(): v for k, v in entries.items()}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, phrase: str) -> bool:
        return phrase.lower() in self._entries

    def phrases(self) -> List[str]:
        return list(self._entries)

    def lookup(self, phrase: str) -> Optional[Ordinal]:
        return self._entries.get(phrase.lower())


def _read_dictionary(path: Union[str, Path], kind: str
                     ) -> List[Tuple[int, str, str]]:
    try:
        records = read_records(path)
    except OSError as e:
        raise ConfigurationError(f"cannot read {kind} dictionary {path}: "
                                 f"{e}") from e
    rows = []
    for line_number, fields in records:
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise ConfigurationError(f"{path}:{line_number}: expected "
                                     f"'phrase<TAB>{kind}' entry")
        rows.append((line_number, fields[0].strip(), fields[1].strip()))
    return rows


def load_signal_dictionary(path: Union[str, Path] = DEFAULT_SIGNALS_PATH
                           ) -> SignalDictionary:
    """Load the signal word table. Repeated phrases add further candidate
    relations.

    Raises:
        ConfigurationError: If the file is missing or a line is malformed.
    """
    entries: Dict[str, List[TemporalRelation]] = {}
    for line_number, phrase, relation in _read_dictionary(path, "relation"):
        try:
            parsed = TemporalRelation.parse(relation)
        except ValueError as e:
            raise ConfigurationError(f"{path}:{line_number}: bad relation "
                                     f"{relation!r}: {e}") from e
        entries.setdefault(phrase.lower(), []).append(parsed)
    return SignalDictionary(entries)


def load_ordinal_dictionary(path: Union[str, Path] = DEFAULT_ORDINALS_PATH
                            ) -> OrdinalDictionary:
    """Load the ordinal word table; ``-`` marks a non-temporal collocation.

    Raises:
        ConfigurationError: If the file is missing or a line is malformed.
    """
    entries: Dict[str, Optional[Ordinal]] = {}
    for line_number, phrase, kind in _read_dictionary(path, "kind"):
        if kind == "-":
            entries[phrase.lower()] = None
            continue
        try:
            entries[phrase.lower()] = Ordinal.parse(kind)
        except ValueError as e:
            raise ConfigurationError(f"{path}:{line_number}: bad ordinal "
                                     f"{kind!r}: {e}") from e
    return OrdinalDictionary(entries)


def has_temporal_answer_type(text: str) -> bool:
    return ANSWER_TYPE_PATTERN.match(text) is not None


def _starts_timex_or_event(q: AnnotatedQuestion, index: int) -> bool:
    # one determiner may precede the expression ("in the world cup")
    if index < len(q.tokens) and q.tokens[index].pos == "DET":
        index += 1
    return any(s.start == index for s in q.timex_spans)


def is_temporal_usage(q: AnnotatedQuestion, span: SignalSpan) -> bool:
    """Whether a signal word is used in a temporal sense.

    A signal directly followed by a wh-pronoun ("after whom") or heading a
    possessive phrase without any verb ("after neymar's sister") is not
    temporal. Anchored signals such as "in" only count when a temporal
    expression or event follows. A question-initial "when" is the question
    word, not a signal.
    """
    phrase = span.phrase.lower()
    if span.start == 0 and phrase in WH_WORDS:
        return False
    following = [t for t in q.tokens[span.end:] if t.pos != "PUNCT"]
    if phrase in ANCHORED_SIGNALS:
        return _starts_timex_or_event(q, span.end)
    if not following:
        return True
    if following[0].surface.lower() in WH_PRONOUNS:
        return False
    possessive = any(t.surface.lower() in ("'s", "’s") or t.tag == "POS"
                     for t in following)
    if possessive and not any(t.pos == "VERB" for t in following):
        return False
    return True


def _ordinal_modifies_entity_phrase(q: AnnotatedQuestion) -> bool:
    span = q.ordinal_span
    if span is None or not q.entity_spans:
        return False
    for token in q.tokens[span.end:]:
        if token.pos == "ADJ":
            continue
        return token.pos in ("NOUN", "PROPN") or \
            q.entity_at(token.index) is not None
    return False


def detect(q: AnnotatedQuestion,
           events: Optional[EventDictionary] = None) -> DetectionResult:
    """Decide whether an annotated question is temporal and record the cues
    that fired.

    Args:
        q (AnnotatedQuestion): Question with tagger and entity annotations.
        events (EventDictionary): Named events; matched in addition to the
            EVENT spans already present in the annotations.

    Returns:
        DetectionResult: Temporal flag, cues, the first signal used in a
            temporal sense and the ordinal, if any.
    """
    cues = set()
    if any(s.timex_type in (TimexType.DATE, TimexType.TIME,
                            TimexType.DURATION, TimexType.SET)
           for s in q.timex_spans):
        cues.add(Cue.TIMEX)
    if any(s.timex_type is TimexType.EVENT for s in q.timex_spans) or \
            (events is not None and events.match([t.surface for t in q.tokens])):
        cues.add(Cue.EVENT)

    signal = None
    for span in q.signal_spans:
        if is_temporal_usage(q, span):
            cues.add(Cue.SIGNAL)
            signal = span.phrase.lower()
            break

    ordinal = None
    if _ordinal_modifies_entity_phrase(q):
        cues.add(Cue.ORDINAL)
        ordinal = q.ordinal_span.ordinal

    if q.answer_type_temporal:
        cues.add(Cue.TEMPORAL_ANSWER_TYPE)

    return DetectionResult(bool(cues), frozenset(cues), signal, ordinal)
