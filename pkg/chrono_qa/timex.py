"""
Rule-based tagging and normalization of temporal expressions, plus the
dictionary of named events.

The tagger is a table of regular-expression rules (`RULES`) matched
case-insensitively against the text. All rule matches and event dictionary
hits are collected, then the longest ones are kept first so that spans never
overlap. Spans are aligned to spaCy tokens, so token ranges agree with the
question annotator.
The canonical date formats are listed in ``docs/date_formats.md``.
"""

import datetime as dt
import logging
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import (Callable, Dict, Iterator, List, Mapping, Optional,
                    Sequence, Tuple)

import spacy
from spacy.matcher import PhraseMatcher
from spacy.tokens import Doc

from .constants import DEFAULT_REFERENCE_DATE, EVENT_TYPE
from .errors import UnnormalizableExpression
from .kb import KBStore, interval_from_qualifiers
from .model import Granularity, Interval, Side, TimePoint, interval_from_point

logger = logging.getLogger(__name__)


class TimexType(str, Enum):
    DATE = "DATE"
    TIME = "TIME"
    DURATION = "DURATION"
    SET = "SET"
    EVENT = "EVENT"


@dataclass(frozen=True)
class TemporalExpressionSpan:
    """A temporal expression over the token range ``[start, end)``.

    ``value`` holds a TIMEX3-style value (``2016-05-02``, ``2016-05``,
    ``2016``, ``199`` for a decade, ``17`` for a century, ``P2Y`` for a
    duration). Relative expressions carry ``relative = (unit, offset)``
    instead and are resolved against a reference date.
    """
    start: int
    end: int
    timex_type: TimexType
    surface: str
    value: Optional[str] = None
    normalized: Optional[Interval] = None
    relative: Optional[Tuple[str, int]] = None
    event_id: Optional[str] = None


@dataclass(frozen=True)
class EventEntry:
    event_id: str
    scope: Interval


class EventDictionary:
    """Lower-cased surface form to event id and time scope."""

    def __init__(self, entries: Optional[Mapping[str, EventEntry]] = None):
        self._entries: Dict[str, EventEntry] = {
            k.lower(): v for k, v in (entries or {}).items()}
        self._max_tokens = max((len(k.split()) for k in self._entries),
                               default=0)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface.lower() in self._entries

    def get(self, surface: str) -> Optional[EventEntry]:
        return self._entries.get(surface.lower())

    def items(self) -> Iterator[Tuple[str, EventEntry]]:
        return iter(self._entries.items())

    def match(self, tokens: Sequence[str]) -> List[Tuple[int, int, EventEntry]]:
        """Case-insensitive longest match over token n-grams, scanning left
        to right. Returns ``(start, end, entry)`` token ranges."""
        words = [t.lower() for t in tokens]
        matches = []
        i = 0
        while i < len(words):
            for j in range(min(len(words), i + self._max_tokens), i, -1):
                entry = self._entries.get(" ".join(words[i:j]))
                if entry is not None:
                    matches.append((i, j, entry))
                    i = j
                    break
            else:
                i += 1
        return matches


def build_event_dictionary(kb: KBStore) -> EventDictionary:
    """Collect the surface forms of all event-typed KB entities that have a
    resolvable time scope. On duplicate surface forms the entry loaded first
    is kept."""
    entries: Dict[str, EventEntry] = {}
    for entity in kb.entities_of_type(EVENT_TYPE):
        scope = interval_from_qualifiers(
            kb, kb.temporal_facts(kb.facts_about(entity.entity_id)))
        if scope is None:
            logger.debug("Event %s has no time scope, skipped",
                         entity.entity_id)
            continue
        for surface in entity.surface_forms:
            key = surface.lower()
            if key in entries:
                logger.warning("DuplicateSurfaceForm: %r of %s already used "
                               "by %s, keeping the earlier entry", surface,
                               entity.entity_id, entries[key].event_id)
                continue
            entries[key] = EventEntry(entity.entity_id, scope)
    return EventDictionary(entries)


MONTHS = {"january": 1, "jan": 1, "february": 2, "feb": 2, "march": 3,
          "mar": 3, "april": 4, "apr": 4, "may": 5, "june": 6, "jun": 6,
          "july": 7, "jul": 7, "august": 8, "aug": 8, "september": 9,
          "sept": 9, "sep": 9, "october": 10, "oct": 10, "november": 11,
          "nov": 11, "december": 12, "dec": 12}

NUMBERS = {"a": 1, "an": 1, "one": 1, "two": 2, "three": 3, "four": 4,
           "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
           "eleven": 11, "twelve": 12}

WEEKDAYS = ("monday", "tuesday", "wednesday", "thursday", "friday",
            "saturday", "sunday")

_MONTH = r"(" + "|".join(sorted(MONTHS, key=len, reverse=True)) + r")\.?"
_DAY = r"(\d{1,2})(?:st|nd|rd|th)?"
_YEAR = r"(\d{4})"
_NUMBER = r"(\d+|" + "|".join(n for n in NUMBERS if n not in ("a", "an")) + r")"
_UNIT = (r"(days?|weeks?|months?|years?|decades?|century|centuries|hours?"
         r"|minutes?)")

RELATIVE_OFFSETS = {"last": -1, "previous": -1, "this": 0, "next": 1,
                    "coming": 1}
DURATION_CODES = {"day": "D", "week": "W", "month": "M", "year": "Y",
                  "decade": "DE", "century": "CE", "hour": "H", "minute": "MI"}


@dataclass(frozen=True)
class TimexRule:
    """One tagging rule: a case-insensitive pattern and a builder turning the
    lower-cased match groups (whole match first) into
    ``(type, value, relative)``."""
    name: str
    pattern: "re.Pattern"
    build: Callable[[Sequence[Optional[str]]],
                    Tuple[TimexType, Optional[str], Optional[Tuple[str, int]]]]


def _compile(pattern: str) -> "re.Pattern":
    return re.compile(pattern, re.IGNORECASE)


def _lowered_groups(match: "re.Match") -> Tuple[Optional[str], ...]:
    return tuple(g.lower() if g is not None else None
                 for g in (match[0],) + match.groups())


def _date_value(year: str, month: Optional[int] = None,
                day: Optional[str] = None) -> str:
    value = f"{int(year):04d}"
    if month is not None:
        value += f"-{month:02d}"
    if day is not None:
        value += f"-{int(day):02d}"
    return value


def _number(text: str) -> int:
    return int(text) if text.isdigit() else NUMBERS[text]


def _unit_name(text: str) -> str:
    if text.startswith("centur"):
        return "century"
    return text[:-1] if text.endswith("s") else text


RULES: Tuple[TimexRule, ...] = (
    TimexRule("iso_date",
              _compile(r"\b(\d{4})-(\d{2})-(\d{2})\b"),
              lambda m: (TimexType.DATE,
                         _date_value(m[1], int(m[2]), m[3]), None)),
    TimexRule("iso_month",
              _compile(r"\b(\d{4})-(\d{2})\b(?!-\d)"),
              lambda m: (TimexType.DATE, _date_value(m[1], int(m[2])), None)),
    TimexRule("us_slash_date",
              _compile(r"\b(\d{1,2})/(\d{1,2})/(\d{4})\b"),
              lambda m: (TimexType.DATE,
                         _date_value(m[3], int(m[1]), m[2]), None)),
    TimexRule("month_day_year",
              _compile(r"\b" + _MONTH + r"\s+" + _DAY + r",?\s+" + _YEAR
                       + r"\b"),
              lambda m: (TimexType.DATE,
                         _date_value(m[3], MONTHS[m[1]], m[2]), None)),
    TimexRule("day_month_year",
              _compile(r"\b" + _DAY + r"\s+(?:of\s+)?" + _MONTH + r",?\s+"
                       + _YEAR + r"\b"),
              lambda m: (TimexType.DATE,
                         _date_value(m[3], MONTHS[m[2]], m[1]), None)),
    TimexRule("month_year",
              _compile(r"\b" + _MONTH + r",?\s+(?:of\s+)?" + _YEAR + r"\b"),
              lambda m: (TimexType.DATE,
                         _date_value(m[2], MONTHS[m[1]]), None)),
    TimexRule("decade",
              _compile(r"\b(?:the\s+)?(\d{3})0'?s\b"),
              lambda m: (TimexType.DATE, m[1], None)),
    TimexRule("century",
              _compile(r"\b(?:the\s+)?(\d{1,2})(?:st|nd|rd|th)\s+century\b"),
              lambda m: (TimexType.DATE, f"{int(m[1]) - 1:02d}", None)),
    TimexRule("year",
              _compile(r"\b(1\d{3}|20\d{2})\b(?![-/]\d)"),
              lambda m: (TimexType.DATE, m[1], None)),
    TimexRule("relative_day",
              _compile(r"\b(yesterday|today|tomorrow)\b"),
              lambda m: (TimexType.DATE, None,
                         ("DAY", {"yesterday": -1, "today": 0,
                                  "tomorrow": 1}[m[1]]))),
    TimexRule("relative_unit",
              _compile(r"\b(last|previous|this|next|coming)\s+"
                       r"(week|month|year)\b"),
              lambda m: (TimexType.DATE, None,
                         (m[2].upper(), RELATIVE_OFFSETS[m[1]]))),
    TimexRule("ago",
              _compile(r"\b(\d+|a|an|" + "|".join(NUMBERS) + r")\s+"
                       r"(day|week|month|year)s?\s+ago\b"),
              lambda m: (TimexType.DATE, None,
                         (m[2].upper(), -_number(m[1])))),
    TimexRule("duration",
              _compile(r"\b" + _NUMBER + r"\s+" + _UNIT + r"\b"),
              lambda m: (TimexType.DURATION,
                         f"P{_number(m[1])}"
                         f"{DURATION_CODES[_unit_name(m[2])]}", None)),
    TimexRule("set",
              _compile(r"\b(?:every|each)\s+(" + "|".join(WEEKDAYS)
                       + r"|day|week|month|year|season|summer|winter)\b"),
              lambda m: (TimexType.SET, f"EVERY-{m[1].upper()}", None)),
    TimexRule("set_adverb",
              _compile(r"\b(daily|weekly|monthly|yearly|annually)\b"),
              lambda m: (TimexType.SET, f"EVERY-{m[1].upper()}", None)),
    TimexRule("clock_time",
              _compile(r"\b(\d{1,2})(?::(\d{2}))?\s*(am\b|pm\b|a\.m\.|p\.m\.)"
                       r"|\b(\d{1,2}):(\d{2})\b|\b(noon|midnight)\b"),
              lambda m: (TimexType.TIME, "T" + m[0].replace(" ", ""), None)),
)


def _relative_interval(unit: str, offset: int,
                       reference: TimePoint) -> Interval:
    ref = widen_reference(reference).as_date(Side.BEGIN)
    if unit == "YEAR":
        return interval_from_point(TimePoint(ref.year + offset))
    if unit == "MONTH":
        months = ref.year * 12 + (ref.month - 1) + offset
        return interval_from_point(TimePoint(months // 12, months % 12 + 1))
    if unit == "WEEK":
        monday = ref - dt.timedelta(days=ref.weekday()) \
            + dt.timedelta(weeks=offset)
        return Interval(TimePoint.from_date(monday),
                        TimePoint.from_date(monday + dt.timedelta(days=6)))
    if unit == "DAY":
        return interval_from_point(
            TimePoint.from_date(ref + dt.timedelta(days=offset)))
    raise UnnormalizableExpression(f"unknown relative unit {unit!r}")


def _value_interval(value: str) -> Interval:
    if len(value) == 3 and value.isdigit():
        start = int(value) * 10
        return Interval(TimePoint(max(start, 1), 1, 1),
                        TimePoint(start + 9, 12, 31))
    if len(value) == 2 and value.isdigit():
        start = int(value) * 100
        return Interval(TimePoint(max(start, 1), 1, 1),
                        TimePoint(start + 99, 12, 31))
    return interval_from_point(TimePoint.parse(value))


def normalize(span: TemporalExpressionSpan, reference: TimePoint) -> Interval:
    """Resolve a temporal expression into an interval at its granularity.

    Args:
        span (TemporalExpressionSpan): A DATE, TIME or EVENT span, or a
            relative expression.
        reference (TimePoint): Date against which relative expressions and
            clock times are resolved.

    Returns:
        Interval: The covered interval. EVENT spans return their dictionary
            scope.

    Raises:
        UnnormalizableExpression: For durations, sets and spans without any
            anchor.
    """
    if span.timex_type in (TimexType.DURATION, TimexType.SET):
        raise UnnormalizableExpression(
            f"{span.timex_type.value} expression {span.surface!r} has no "
            f"anchor")
    if span.timex_type is TimexType.EVENT:
        if span.normalized is None:
            raise UnnormalizableExpression(
                f"event {span.surface!r} has no time scope")
        return span.normalized
    if span.relative is not None:
        unit, offset = span.relative
        return _relative_interval(unit, offset, reference)
    if span.timex_type is TimexType.TIME:
        return interval_from_point(widen_reference(reference))
    if span.value is None:
        raise UnnormalizableExpression(f"{span.surface!r} has no value")
    return _value_interval(span.value)


def widen_reference(reference: TimePoint) -> TimePoint:
    if reference.granularity is Granularity.DAY:
        return reference
    return TimePoint.from_date(reference.as_date(Side.BEGIN))


class TimexTagger:
    """Tag temporal expressions and named events in text.

    Initiated with the reference date for relative expressions and an
    optional event dictionary. A spaCy pipeline can be passed to share its
    tokenizer with the question annotator; by default a blank English
    pipeline is used.
    """

    def __init__(self,
                 reference: Optional[TimePoint] = None,
                 events: Optional[EventDictionary] = None,
                 nlp: Optional[spacy.language.Language] = None):
        self.reference = reference or TimePoint.parse(DEFAULT_REFERENCE_DATE)
        self.events = events or EventDictionary()
        self.nlp = nlp or spacy.blank("en")
        self._event_matcher = PhraseMatcher(self.nlp.vocab, attr="LOWER")
        for surface, entry in self.events.items():
            self._event_matcher.add(entry.event_id + "|" + surface,
                                    [self.nlp.make_doc(surface)])

    def tag(self, text: str) -> List[TemporalExpressionSpan]:
        """Tag a text; see `tag_doc`."""
        if not text.strip():
            return []
        return self.tag_doc(self.nlp.make_doc(text))

    def tag_doc(self, doc: Doc) -> List[TemporalExpressionSpan]:
        """Return non-overlapping, normalized spans ordered by position.
        Longer matches win over shorter ones."""
        candidates = []
        for rule in RULES:
            for match in rule.pattern.finditer(doc.text):
                timex_type, value, relative = rule.build(
                    _lowered_groups(match))
                candidates.append((match.start(), match.end(), timex_type,
                                   value, relative, None))
        for match_id, start, end in self._event_matcher(doc):
            key = self.nlp.vocab.strings[match_id]
            entry = self.events.get(key.split("|", 1)[1])
            span = doc[start:end]
            candidates.append((span.start_char, span.end_char,
                               TimexType.EVENT, None, None, entry))

        candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0]))
        taken: List[Tuple[int, int]] = []
        spans = []
        for start_char, end_char, timex_type, value, relative, entry in \
                candidates:
            token_span = doc.char_span(start_char, end_char,
                                       alignment_mode="expand")
            if token_span is None:
                continue
            start, end = token_span.start, token_span.end
            if any(start < t_end and t_start < end for t_start, t_end in taken):
                continue
            span = TemporalExpressionSpan(
                start, end, timex_type, doc.text[start_char:end_char],
                value=value, relative=relative,
                normalized=entry.scope if entry is not None else None,
                event_id=entry.event_id if entry is not None else None)
            if timex_type in (TimexType.DATE, TimexType.TIME):
                try:
                    span = replace(span,
                                   normalized=normalize(span, self.reference))
                except ValueError as e:
                    logger.debug("Dropped %r: %s", span.surface, e)
                    continue
            taken.append((start, end))
            spans.append(span)
        return sorted(spans, key=lambda s: s.start)
