"""
Domain types shared by all pipeline stages: calendar points and intervals,
temporal relations, annotated questions, KB facts and answer sets. All types
are frozen dataclasses and can be shared freely between threads.
"""

import calendar
import datetime as dt
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import total_ordering
from typing import (TYPE_CHECKING, Any, Dict, Iterator, List, Optional, Tuple,
                    Union)

if TYPE_CHECKING:
    from .timex import TemporalExpressionSpan

ISO_DATE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$")


class Granularity(str, Enum):
    YEAR = "YEAR"
    MONTH = "MONTH"
    DAY = "DAY"


class Side(str, Enum):
    BEGIN = "BEGIN"
    END = "END"


@total_ordering
@dataclass(frozen=True)
class TimePoint:
    """A calendar instant at year, month or day granularity (proleptic
    Gregorian, years >= 1). The granularity is derived from the fields when
    not given. Points are totally ordered by their widened day bounds, first
    the earliest day they cover, then the latest."""
    year: int
    month: Optional[int] = None
    day: Optional[int] = None
    granularity: Optional[Granularity] = None

    def __post_init__(self):
        if self.day is not None and self.month is None:
            raise ValueError("a day requires a month")
        if self.day is not None:
            derived = Granularity.DAY
        elif self.month is not None:
            derived = Granularity.MONTH
        else:
            derived = Granularity.YEAR
        if self.granularity is None:
            object.__setattr__(self, "granularity", derived)
        elif Granularity(self.granularity) is not derived:
            raise ValueError(f"granularity {self.granularity} does not match "
                             f"fields of {self.isoformat()}")
        else:
            object.__setattr__(self, "granularity", Granularity(self.granularity))
        if not 1 <= self.year <= 9999:
            raise ValueError(f"year out of range: {self.year}")
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")
        if self.day is not None:
            # raises ValueError for impossible dates such as 2015-02-29
            dt.date(self.year, self.month, self.day)

    @classmethod
    def parse(cls, text: str) -> "TimePoint":
        """Parse ``YYYY``, ``YYYY-MM`` or ``YYYY-MM-DD``."""
        match = ISO_DATE.match(text.strip())
        if match is None:
            raise ValueError(f"not an ISO-8601 date: {text!r}")
        year, month, day = match.groups()
        return cls(int(year),
                   int(month) if month else None,
                   int(day) if day else None)

    @classmethod
    def from_date(cls, date: dt.date) -> "TimePoint":
        return cls(date.year, date.month, date.day)

    def isoformat(self) -> str:
        text = f"{self.year:04d}"
        if self.month is not None:
            text += f"-{self.month:02d}"
        if self.day is not None:
            text += f"-{self.day:02d}"
        return text

    def as_date(self, side: Side) -> dt.date:
        """First (BEGIN) or last (END) calendar day covered by the point."""
        if self.granularity is Granularity.DAY:
            return dt.date(self.year, self.month, self.day)
        if self.granularity is Granularity.MONTH:
            if side is Side.BEGIN:
                return dt.date(self.year, self.month, 1)
            last = calendar.monthrange(self.year, self.month)[1]
            return dt.date(self.year, self.month, last)
        if side is Side.BEGIN:
            return dt.date(self.year, 1, 1)
        return dt.date(self.year, 12, 31)

    def _sort_key(self) -> Tuple[dt.date, dt.date]:
        return self.as_date(Side.BEGIN), self.as_date(Side.END)

    def __lt__(self, other: Any) -> bool:
        if not isinstance(other, TimePoint):
            return NotImplemented
        return self._sort_key() < other._sort_key()

    def __str__(self) -> str:
        return self.isoformat()


def widen(point: TimePoint, side: Side) -> TimePoint:
    """Widen a point to day granularity: YEAR to Jan 1 / Dec 31, MONTH to its
    first / last day; DAY points are returned unchanged."""
    if point.granularity is Granularity.DAY:
        return point
    return TimePoint.from_date(point.as_date(Side(side)))


@dataclass(frozen=True)
class Interval:
    """A time interval whose sides may be open (None). Open sides compare as
    minus / plus infinity."""
    begin: Optional[TimePoint] = None
    end: Optional[TimePoint] = None

    def __post_init__(self):
        if self.begin is not None and self.end is not None:
            if self.lower() > self.upper():
                raise ValueError(f"interval begins after it ends: {self}")

    def lower(self) -> float:
        """Widened begin as a day ordinal, -inf when open."""
        if self.begin is None:
            return -math.inf
        return self.begin.as_date(Side.BEGIN).toordinal()

    def upper(self) -> float:
        """Widened end as a day ordinal, +inf when open."""
        if self.end is None:
            return math.inf
        return self.end.as_date(Side.END).toordinal()

    @property
    def is_open(self) -> bool:
        return self.begin is None or self.end is None

    @property
    def is_point(self) -> bool:
        return not self.is_open and self.lower() == self.upper()

    def to_json(self) -> Dict[str, Optional[str]]:
        return {"begin": self.begin.isoformat() if self.begin else None,
                "end": self.end.isoformat() if self.end else None}

    def __str__(self) -> str:
        begin = self.begin.isoformat() if self.begin else "open"
        end = self.end.isoformat() if self.end else "open"
        return f"[{begin}, {end}]"


def interval_from_point(point: TimePoint) -> Interval:
    """Cast a point into the interval of days it covers."""
    return Interval(widen(point, Side.BEGIN), widen(point, Side.END))


class RelationKind(str, Enum):
    BEFORE = "BEFORE"
    AFTER = "AFTER"
    OVERLAP = "OVERLAP"


class OverlapRow(str, Enum):
    DURING_WHILE_WHEN = "DURING_WHILE_WHEN"
    SINCE_UNTIL_IN = "SINCE_UNTIL_IN"
    SAME_TIME_AS = "SAME_TIME_AS"


@dataclass(frozen=True)
class TemporalRelation:
    kind: RelationKind
    overlap_row: Optional[OverlapRow] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RelationKind(self.kind))
        if self.overlap_row is not None:
            object.__setattr__(self, "overlap_row", OverlapRow(self.overlap_row))
        if (self.kind is RelationKind.OVERLAP) != (self.overlap_row is not None):
            raise ValueError("an overlap row is required for OVERLAP and "
                             "only for OVERLAP")

    @classmethod
    def parse(cls, text: str) -> "TemporalRelation":
        """Parse ``BEFORE``, ``AFTER`` or ``OVERLAP:<row>``."""
        kind, _, row = text.strip().upper().partition(":")
        return cls(RelationKind(kind), OverlapRow(row) if row else None)

    def __str__(self) -> str:
        if self.overlap_row is None:
            return self.kind.value
        return f"{self.kind.value}:{self.overlap_row.value}"


class AllenRelation(str, Enum):
    EQUAL = "EQUAL"
    BEFORE = "BEFORE"
    AFTER = "AFTER"
    MEETS = "MEETS"
    MET_BY = "MET_BY"
    OVERLAPS = "OVERLAPS"
    OVERLAPPED_BY = "OVERLAPPED_BY"
    DURING = "DURING"
    CONTAINS = "CONTAINS"
    STARTS = "STARTS"
    STARTED_BY = "STARTED_BY"
    FINISHES = "FINISHES"
    FINISHED_BY = "FINISHED_BY"


class OrdinalKind(str, Enum):
    FIRST = "FIRST"
    LAST = "LAST"
    NTH = "NTH"


@dataclass(frozen=True)
class Ordinal:
    kind: OrdinalKind
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", OrdinalKind(self.kind))
        if (self.kind is OrdinalKind.NTH) != (self.n is not None):
            raise ValueError("a rank is required for NTH and only for NTH")
        if self.n is not None and self.n < 1:
            raise ValueError(f"ordinal rank must be >= 1, got {self.n}")

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        """Parse ``FIRST``, ``LAST`` or ``NTH:<n>``."""
        kind, _, n = text.strip().upper().partition(":")
        return cls(OrdinalKind(kind), int(n) if n else None)

    def __str__(self) -> str:
        if self.kind is OrdinalKind.NTH:
            return f"NTH:{self.n}"
        return self.kind.value


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    index: int
    tag: str = ""


@dataclass(frozen=True)
class EntitySpan:
    """Token range ``[start, end)`` linked to a KB entity."""
    start: int
    end: int
    entity_id: str


@dataclass(frozen=True)
class SignalSpan:
    start: int
    end: int
    phrase: str


@dataclass(frozen=True)
class OrdinalSpan:
    start: int
    end: int
    ordinal: Ordinal


def _check_layer(name: str, spans: Tuple[Any, ...], size: int) -> None:
    last_end = 0
    for span in sorted(spans, key=lambda s: (s.start, s.end)):
        if not 0 <= span.start < span.end <= size:
            raise ValueError(f"{name} span out of bounds: {span}")
        if span.start < last_end:
            raise ValueError(f"overlapping {name} spans: {span}")
        last_end = span.end


@dataclass(frozen=True)
class AnnotatedQuestion:
    """Question text with its token, entity, temporal expression, signal and
    ordinal annotation layers. Spans within a layer never overlap."""
    text: str
    tokens: Tuple[Token, ...]
    entity_spans: Tuple[EntitySpan, ...] = ()
    timex_spans: Tuple["TemporalExpressionSpan", ...] = ()
    signal_spans: Tuple[SignalSpan, ...] = ()
    ordinal_span: Optional[OrdinalSpan] = None
    answer_type_temporal: bool = False

    def __post_init__(self):
        size = len(self.tokens)
        _check_layer("entity", self.entity_spans, size)
        _check_layer("timex", self.timex_spans, size)
        _check_layer("signal", self.signal_spans, size)
        if self.ordinal_span is not None:
            _check_layer("ordinal", (self.ordinal_span,), size)

    @property
    def signal_span(self) -> Optional[SignalSpan]:
        return self.signal_spans[0] if self.signal_spans else None

    def entity_at(self, index: int) -> Optional[EntitySpan]:
        for span in self.entity_spans:
            if span.start <= index < span.end:
                return span
        return None

    def timex_at(self, index: int) -> Optional["TemporalExpressionSpan"]:
        for span in self.timex_spans:
            if span.start <= index < span.end:
                return span
        return None

    def entity_ids(self) -> List[str]:
        """Linked entity ids in order of mention, without repeats."""
        return list(dict.fromkeys(s.entity_id for s in self.entity_spans))


@dataclass(frozen=True)
class Literal:
    """A string literal in object position."""
    value: str


FactObject = Union[str, TimePoint, Literal]


@dataclass(frozen=True)
class Fact:
    """A KB triple. Facts sharing a ``compound_id`` form one compound
    (CVT-style) fact."""
    subject: str
    predicate: str
    object: FactObject
    compound_id: Optional[str] = None


AnswerValue = Union[str, TimePoint]


def answer_key(value: AnswerValue) -> str:
    """Comparison key: entity id, or ISO string for dates."""
    if isinstance(value, TimePoint):
        return value.isoformat()
    return value


@dataclass(frozen=True)
class Answer:
    value: AnswerValue
    time_scopes: Tuple[Interval, ...] = ()
    predicates: Tuple[str, ...] = ()
    unscoped: bool = False

    @property
    def key(self) -> str:
        return answer_key(self.value)

    def to_json(self) -> Dict[str, Any]:
        return {"value": self.key,
                "time_scopes": [s.to_json() for s in self.time_scopes],
                "predicates": list(self.predicates),
                "unscoped": self.unscoped}


@dataclass(frozen=True)
class AnswerSet:
    answers: Tuple[Answer, ...] = ()
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)

    def __iter__(self) -> Iterator[Answer]:
        return iter(self.answers)

    def __len__(self) -> int:
        return len(self.answers)

    def keys(self) -> List[str]:
        return [a.key for a in self.answers]

    def with_diagnostics(self, *messages: str) -> "AnswerSet":
        return replace(self, diagnostics=self.diagnostics + tuple(messages))

    def to_json(self) -> Dict[str, Any]:
        return {"answers": [a.to_json() for a in self.answers],
                "diagnostics": list(self.diagnostics)}
