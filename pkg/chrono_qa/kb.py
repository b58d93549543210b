"""
In-memory temporal knowledge base. The KB file is UTF-8 and line oriented,
``#`` starts a comment, and three tab-separated record kinds are supported:

    E  entity_id  surface_form[|surface_form...]  type[,type...]
    P  predicate_name  temporal:{yes|no}  role:{begin|end|point|-}
    F  subject  predicate  object  compound_id_or_-

Dates in object position are ISO-8601 (``YYYY``, ``YYYY-MM`` or
``YYYY-MM-DD``) and only legal for temporal predicates. String literals are
double quoted, any other object is an entity id. Facts sharing a compound id
form one compound (CVT-style) fact.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import (Dict, Iterable, Iterator, List, Mapping, Optional,
                    Sequence, Tuple, Union)

from .constants import BEGIN_ROLE_TOKENS, END_ROLE_TOKENS, EVENT_TYPE
from .errors import DataError
from .model import Fact, FactObject, Interval, Literal, TimePoint
from .similarity import split_predicate_name
from .utils import iter_records

logger = logging.getLogger(__name__)


class Role(str, Enum):
    BEGIN = "BEGIN"
    END = "END"
    POINT = "POINT"


@dataclass(frozen=True)
class EntityRecord:
    entity_id: str
    surface_forms: Tuple[str, ...]
    types: Tuple[str, ...]


@dataclass(frozen=True)
class PredicateRecord:
    name: str
    is_temporal: bool
    declared_role: Optional[Role] = None

    @property
    def role(self) -> Optional[Role]:
        """Declared role, inferred from the name when not declared. Only
        temporal predicates have a role."""
        if not self.is_temporal:
            return None
        if self.declared_role is not None:
            return self.declared_role
        return infer_role(self.name)


def infer_role(name: str) -> Role:
    """Guess the role of a temporal predicate from the tokens of its last
    name segment (``joinedOnDate`` is a BEGIN, ``leftOnDate`` an END)."""
    tokens = set(split_predicate_name(name.split(".")[-1]))
    if tokens & BEGIN_ROLE_TOKENS:
        return Role.BEGIN
    if tokens & END_ROLE_TOKENS:
        return Role.END
    return Role.POINT


def object_key(value: FactObject) -> Optional[str]:
    """Index key of a fact object; literals are not indexed."""
    if isinstance(value, TimePoint):
        return value.isoformat()
    if isinstance(value, Literal):
        return None
    return value


class KBStore:
    """Indexed, immutable collection of facts with entity and predicate
    declarations. Indexes map subjects, predicates, objects and compound ids
    to facts in load order."""

    def __init__(self,
                 entities: Iterable[EntityRecord] = (),
                 predicates: Iterable[PredicateRecord] = (),
                 facts: Iterable[Fact] = ()):
        self.entities: Mapping[str, EntityRecord] = MappingProxyType(
            {e.entity_id: e for e in entities})
        self.predicates: Mapping[str, PredicateRecord] = MappingProxyType(
            {p.name: p for p in predicates})
        self.facts: Tuple[Fact, ...] = tuple(facts)

        by_subject = defaultdict(list)
        by_predicate = defaultdict(list)
        by_object = defaultdict(list)
        by_compound = defaultdict(list)
        compounds_of = defaultdict(list)
        for fact in self.facts:
            by_subject[fact.subject].append(fact)
            by_predicate[fact.predicate].append(fact)
            key = object_key(fact.object)
            if key is not None:
                by_object[key].append(fact)
            if fact.compound_id is not None:
                by_compound[fact.compound_id].append(fact)
                for member in (fact.subject, key):
                    if member in self.entities and \
                            fact.compound_id not in compounds_of[member]:
                        compounds_of[member].append(fact.compound_id)

        self._by_subject = {k: tuple(v) for k, v in by_subject.items()}
        self._by_predicate = {k: tuple(v) for k, v in by_predicate.items()}
        self._by_object = {k: tuple(v) for k, v in by_object.items()}
        self._by_compound = {k: tuple(v) for k, v in by_compound.items()}
        self._compounds_of = {k: tuple(v) for k, v in compounds_of.items()}

        surfaces = defaultdict(list)
        for entity in self.entities.values():
            for surface in entity.surface_forms:
                surfaces[surface.lower()].append(entity.entity_id)
        self._by_surface = {k: tuple(v) for k, v in surfaces.items()}

    def __len__(self) -> int:
        return len(self.facts)

    def facts_about(self, subject: str) -> Tuple[Fact, ...]:
        return self._by_subject.get(subject, ())

    def facts_with_predicate(self, predicate: str) -> Tuple[Fact, ...]:
        return self._by_predicate.get(predicate, ())

    def facts_with_object(self, value: str) -> Tuple[Fact, ...]:
        return self._by_object.get(value, ())

    def facts_in_compound(self, compound_id: str) -> Tuple[Fact, ...]:
        return self._by_compound.get(compound_id, ())

    def compound_ids(self) -> List[str]:
        return list(self._by_compound)

    def compounds_of(self, entity_id: str) -> Tuple[str, ...]:
        """Compounds in which the entity is subject or object of a member."""
        return self._compounds_of.get(entity_id, ())

    def entities_for_surface(self, surface: str) -> Tuple[str, ...]:
        return self._by_surface.get(surface.lower(), ())

    def surface_forms(self) -> Iterator[Tuple[str, str]]:
        """All ``(surface form, entity id)`` pairs in load order."""
        for entity in self.entities.values():
            for surface in entity.surface_forms:
                yield surface, entity.entity_id

    def entities_of_type(self, type_name: str) -> List[EntityRecord]:
        return [e for e in self.entities.values() if type_name in e.types]

    def is_event(self, entity_id: str) -> bool:
        entity = self.entities.get(entity_id)
        return entity is not None and EVENT_TYPE in entity.types

    def is_temporal(self, predicate: str) -> bool:
        record = self.predicates.get(predicate)
        return record is not None and record.is_temporal

    def role(self, predicate: str) -> Optional[Role]:
        record = self.predicates.get(predicate)
        return record.role if record is not None else None

    def temporal_facts(self, facts: Iterable[Fact]) -> List[Fact]:
        return [f for f in facts if self.is_temporal(f.predicate)]


def interval_from_qualifiers(store: KBStore,
                             facts: Sequence[Fact]) -> Optional[Interval]:
    """Build a time scope from temporal qualifier facts. A BEGIN/END pair
    gives ``[begin, end]``, a lone BEGIN or END an interval open on the other
    side, a POINT the point cast to an interval. Endpoints are the stored
    dates themselves. The first fact per role wins."""
    by_role: Dict[Role, TimePoint] = {}
    for fact in facts:
        role = store.role(fact.predicate)
        if role is None or not isinstance(fact.object, TimePoint):
            continue
        by_role.setdefault(role, fact.object)
    if Role.BEGIN in by_role or Role.END in by_role:
        return Interval(by_role.get(Role.BEGIN), by_role.get(Role.END))
    if Role.POINT in by_role:
        return Interval(by_role[Role.POINT], by_role[Role.POINT])
    return None


def _parse_flag(value: str, key: str, choices: Sequence[str]) -> str:
    name, _, flag = value.partition(":")
    if name != key or flag not in choices:
        raise ValueError(f"expected {key}:{{{'|'.join(choices)}}}, "
                         f"got {value!r}")
    return flag


def parse_kb(lines: Iterable[str], source: str = "<string>") -> KBStore:
    """Parse KB records and validate them. All issues are collected and
    raised together.

    Args:
        lines (Iterable[str]): Lines in the KB file format.
        source (str): Name used in error messages.

    Returns:
        KBStore: The indexed store.

    Raises:
        DataError: On malformed lines, undeclared predicates, dangling entity
            references, dates on non-temporal predicates, compounds with
            fewer than two facts or compounds whose scope ends before it
            begins.
    """
    issues: List[Tuple[int, str]] = []
    entities: Dict[str, EntityRecord] = {}
    predicates: Dict[str, PredicateRecord] = {}
    raw_facts: List[Tuple[int, List[str]]] = []

    for line_number, fields in iter_records(lines):
        kind = fields[0]
        if kind not in ("E", "P", "F"):
            issues.append((line_number, f"unknown record kind {kind!r}"))
            continue
        expected = 5 if kind == "F" else 4
        if len(fields) != expected:
            issues.append((line_number, f"{kind} record needs {expected} "
                                        f"fields, got {len(fields)}"))
            continue
        if kind == "E":
            _, entity_id, surfaces, types = fields
            if entity_id in entities:
                issues.append((line_number, f"duplicate entity {entity_id!r}"))
                continue
            entities[entity_id] = EntityRecord(
                entity_id,
                tuple(s for s in surfaces.split("|") if s),
                tuple(t for t in types.split(",") if t))
        elif kind == "P":
            _, name, temporal, role = fields
            if name in predicates:
                issues.append((line_number, f"duplicate predicate {name!r}"))
                continue
            try:
                is_temporal = _parse_flag(temporal, "temporal",
                                          ("yes", "no")) == "yes"
                role_flag = _parse_flag(role, "role",
                                        ("begin", "end", "point", "-"))
            except ValueError as e:
                issues.append((line_number, str(e)))
                continue
            if role_flag != "-" and not is_temporal:
                issues.append((line_number, f"non-temporal predicate {name!r} "
                                            f"cannot have a role"))
                continue
            predicates[name] = PredicateRecord(
                name, is_temporal,
                None if role_flag == "-" else Role(role_flag.upper()))
        else:
            raw_facts.append((line_number, fields))

    facts: List[Fact] = []
    compound_lines: Dict[str, List[int]] = defaultdict(list)
    for line_number, (_, subject, predicate, value, compound) in raw_facts:
        record = predicates.get(predicate)
        if record is None:
            issues.append((line_number, f"undeclared predicate {predicate!r}"))
            continue
        if subject not in entities:
            issues.append((line_number, f"unknown entity {subject!r} in "
                                        f"subject position"))
            continue
        obj: FactObject
        if record.is_temporal:
            try:
                obj = TimePoint.parse(value)
            except ValueError as e:
                issues.append((line_number, f"temporal predicate {predicate!r}"
                                            f" needs a date: {e}"))
                continue
        elif len(value) >= 2 and value.startswith('"') and value.endswith('"'):
            obj = Literal(value[1:-1])
        elif value in entities:
            obj = value
        else:
            issues.append((line_number, f"unknown entity {value!r} in "
                                        f"object position"))
            continue
        compound_id = None if compound == "-" else compound
        if compound_id is not None:
            compound_lines[compound_id].append(line_number)
        facts.append(Fact(subject, predicate, obj, compound_id))

    for compound_id, lines_ in compound_lines.items():
        if len(lines_) < 2:
            issues.append((lines_[0], f"compound {compound_id!r} groups "
                                      f"fewer than two facts"))

    store = KBStore(entities.values(), predicates.values(), facts)
    for compound_id, lines_ in compound_lines.items():
        try:
            interval_from_qualifiers(store, store.facts_in_compound(compound_id))
        except ValueError as e:
            issues.append((lines_[0], f"compound {compound_id!r}: {e}"))

    if issues:
        raise DataError(source, sorted(issues))
    logger.info("Loaded %d entities, %d predicates and %d facts from %s",
                len(store.entities), len(store.predicates), len(store), source)
    return store


def load_kb(path: Union[str, Path]) -> KBStore:
    """Load and validate a KB file, see `parse_kb`."""
    with open(path, encoding="utf-8") as handle:
        return parse_kb(handle, source=str(path))


def format_object(value: FactObject) -> str:
    if isinstance(value, TimePoint):
        return value.isoformat()
    if isinstance(value, Literal):
        return f'"{value.value}"'
    return value


def format_fact(fact: Fact) -> str:
    return "\t".join(["F", fact.subject, fact.predicate,
                      format_object(fact.object), fact.compound_id or "-"])


def dump_kb(store: KBStore) -> str:
    """Serialize a store back into the KB file format."""
    lines = []
    for entity in store.entities.values():
        lines.append("\t".join(["E", entity.entity_id,
                                "|".join(entity.surface_forms),
                                ",".join(entity.types)]))
    for predicate in store.predicates.values():
        role = predicate.declared_role.value.lower() \
            if predicate.declared_role else "-"
        lines.append("\t".join(["P", predicate.name,
                                "temporal:" + ("yes" if predicate.is_temporal
                                               else "no"),
                                "role:" + role]))
    lines.extend(format_fact(f) for f in store.facts)
    return "\n".join(lines) + "\n" if lines else ""
