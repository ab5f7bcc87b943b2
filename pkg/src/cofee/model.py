"""Annotated-sentence data model, schema validation, and the JSON document format.

Canonical JSON shape (one object per document, newline-delimited for corpora):

    {"doc_id": ..., "language": ..., "text": ...,
     "tokens": [{"s": 0, "e": 3}, ...],
     "entities": [{"id", "span", "type", "surface"}, ...],
     "triggers": [{"id", "span", "subtype", "tense", "polarity", "modality"}, ...],
     "arguments": [{"trigger", "entity", "role"}, ...]}

Spans are [start_token, end_token] pairs with an inclusive end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .ontology import Ontology, UndefinedSlotError, UnknownElementError
from .tokenizer import DEFAULT_PROFILE, LanguageProfile, Token, tokenize

TENSES = ("past", "present", "future", "unspecified")
POLARITIES = ("positive", "negative")
MODALITIES = ("asserted", "other")

NO_ROLE = "no-role"


@dataclass(frozen=True, order=True)
class Span:
    start_token: int
    end_token: int  # inclusive

    def __post_init__(self) -> None:
        if self.start_token < 0 or self.end_token < self.start_token:
            raise ValueError(f"invalid span [{self.start_token}, {self.end_token}]")

    def overlaps(self, other: "Span") -> bool:
        return self.start_token <= other.end_token and other.start_token <= self.end_token

    def to_json(self) -> list[int]:
        return [self.start_token, self.end_token]


@dataclass(frozen=True)
class EntityMention:
    id: str
    span: Span
    entity_type: str
    surface: str = ""


@dataclass(frozen=True)
class TriggerMention:
    id: str
    span: Span
    subtype: str
    tense: str = "unspecified"
    polarity: str = "positive"
    modality: str = "asserted"


@dataclass(frozen=True)
class ArgumentLink:
    trigger_id: str
    entity_id: str
    role: str


@dataclass(frozen=True)
class SentenceAnnotation:
    doc_id: str
    text: str
    language: str = "und"
    tokens: tuple[Token, ...] = ()
    entities: tuple[EntityMention, ...] = ()
    triggers: tuple[TriggerMention, ...] = ()
    arguments: tuple[ArgumentLink, ...] = ()

    def entity(self, entity_id: str) -> EntityMention:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(f"unknown entity {entity_id!r} in {self.doc_id!r}")

    def trigger(self, trigger_id: str) -> TriggerMention:
        for t in self.triggers:
            if t.id == trigger_id:
                return t
        raise KeyError(f"unknown trigger {trigger_id!r} in {self.doc_id!r}")

    def span_text(self, span: Span) -> str:
        if not self.tokens:
            return ""
        first = self.tokens[span.start_token]
        last = self.tokens[span.end_token]
        return self.text[first.char_start : last.char_end]


def annotate_text(
    doc_id: str,
    text: str,
    language: str = "und",
    profile: LanguageProfile = DEFAULT_PROFILE,
) -> SentenceAnnotation:
    """Tokenize `text` into an annotation skeleton with no mentions yet."""
    return SentenceAnnotation(
        doc_id=doc_id, text=text, language=language, tokens=tuple(tokenize(text, profile))
    )


# -- validation -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Violation:
    element: str
    rule: str
    message: str


def _v(element: str, rule: str, message: str) -> Violation:
    return Violation(element=element, rule=rule, message=message)


def validate_annotation(s: SentenceAnnotation, o: Ontology) -> list[Violation]:
    """Check every schema rule; returns [] iff the annotation is clean.

    Violations are data, not exceptions, so callers (service, UI) can
    surface all of them at once. Output is sorted by (element, rule).
    """
    out: list[Violation] = []
    n = len(s.tokens)

    prev_end = -1
    for t in s.tokens:
        if t.char_start >= t.char_end or t.char_start < prev_end:
            out.append(_v(f"token:{t.index}", "token-bounds", "tokens must be ordered and non-empty"))
        prev_end = t.char_end

    def check_span(element: str, span: Span) -> bool:
        if span.end_token >= n:
            out.append(_v(element, "span-bounds", f"span {span.to_json()} exceeds {n} tokens"))
            return False
        return True

    seen_entity_ids: set[str] = set()
    for e in s.entities:
        if e.id in seen_entity_ids:
            out.append(_v(e.id, "duplicate-id", f"entity id {e.id!r} used twice"))
        seen_entity_ids.add(e.id)
        in_bounds = check_span(e.id, e.span)
        try:
            o.entity_type(e.entity_type)
        except UnknownElementError:
            out.append(_v(e.id, "entity-type-undefined", f"entity type {e.entity_type!r} not in ontology"))
        if in_bounds and e.surface and e.surface != s.span_text(e.span):
            out.append(_v(e.id, "surface-mismatch",
                          f"surface {e.surface!r} != span text {s.span_text(e.span)!r}"))

    seen_trigger_ids: set[str] = set()
    for t in s.triggers:
        if t.id in seen_trigger_ids:
            out.append(_v(t.id, "duplicate-id", f"trigger id {t.id!r} used twice"))
        seen_trigger_ids.add(t.id)
        check_span(t.id, t.span)
        if not o.has_subtype(t.subtype):
            out.append(_v(t.id, "subtype-undefined", f"event subtype {t.subtype!r} not in ontology"))
        if t.tense not in TENSES:
            out.append(_v(t.id, "enum-invalid", f"tense {t.tense!r} not one of {TENSES}"))
        if t.polarity not in POLARITIES:
            out.append(_v(t.id, "enum-invalid", f"polarity {t.polarity!r} not one of {POLARITIES}"))
        if t.modality not in MODALITIES:
            out.append(_v(t.id, "enum-invalid", f"modality {t.modality!r} not one of {MODALITIES}"))

    seen_pairs: set[tuple[str, str]] = set()
    for a in s.arguments:
        element = f"{a.trigger_id}->{a.entity_id}"
        if a.trigger_id not in seen_trigger_ids:
            out.append(_v(element, "dangling-reference", f"unknown trigger {a.trigger_id!r}"))
            continue
        if a.entity_id not in seen_entity_ids:
            out.append(_v(element, "dangling-reference", f"unknown entity {a.entity_id!r}"))
            continue
        pair = (a.trigger_id, a.entity_id)
        if pair in seen_pairs:
            out.append(_v(element, "duplicate-role", "an entity has at most one role per trigger"))
            continue
        seen_pairs.add(pair)
        trigger = s.trigger(a.trigger_id)
        entity = s.entity(a.entity_id)
        if not o.has_subtype(trigger.subtype):
            continue  # already reported on the trigger
        try:
            allowed = o.allowed_entity_types(trigger.subtype, a.role)
        except UndefinedSlotError:
            out.append(_v(element, "slot-undefined",
                          f"role {a.role!r} is not defined for subtype {trigger.subtype!r}"))
            continue
        if entity.entity_type not in allowed:
            out.append(_v(element, "entity-type-not-allowed",
                          f"{entity.entity_type!r} not allowed for ({trigger.subtype!r}, {a.role!r})"))

    out.sort()
    return out


def role_label(s: SentenceAnnotation, trigger_id: str, entity_id: str) -> str:
    """The role linking a (trigger, entity) pair, or 'no-role' if unlinked."""
    s.trigger(trigger_id)
    s.entity(entity_id)
    for a in s.arguments:
        if a.trigger_id == trigger_id and a.entity_id == entity_id:
            return a.role
    return NO_ROLE


def role_label_alphabet(o: Ontology) -> tuple[str, ...]:
    """All roles ordered by ordinal, with 'no-role' closing the alphabet."""
    return tuple(r.id for r in sorted(o.roles, key=lambda r: r.ordinal)) + (NO_ROLE,)


# -- JSON document format ----------------------------------------------------


def to_dict(s: SentenceAnnotation) -> dict:
    return {
        "doc_id": s.doc_id,
        "language": s.language,
        "text": s.text,
        "tokens": [{"s": t.char_start, "e": t.char_end} for t in s.tokens],
        "entities": [
            {"id": e.id, "span": e.span.to_json(), "type": e.entity_type, "surface": e.surface}
            for e in s.entities
        ],
        "triggers": [
            {"id": t.id, "span": t.span.to_json(), "subtype": t.subtype,
             "tense": t.tense, "polarity": t.polarity, "modality": t.modality}
            for t in s.triggers
        ],
        "arguments": [
            {"trigger": a.trigger_id, "entity": a.entity_id, "role": a.role}
            for a in s.arguments
        ],
    }


def from_dict(d: dict) -> SentenceAnnotation:
    return SentenceAnnotation(
        doc_id=d["doc_id"],
        text=d["text"],
        language=d.get("language", "und"),
        tokens=tuple(
            Token(index=i, char_start=t["s"], char_end=t["e"])
            for i, t in enumerate(d.get("tokens", ()))
        ),
        entities=tuple(
            EntityMention(id=e["id"], span=Span(*e["span"]), entity_type=e["type"],
                          surface=e.get("surface", ""))
            for e in d.get("entities", ())
        ),
        triggers=tuple(
            TriggerMention(id=t["id"], span=Span(*t["span"]), subtype=t["subtype"],
                           tense=t.get("tense", "unspecified"),
                           polarity=t.get("polarity", "positive"),
                           modality=t.get("modality", "asserted"))
            for t in d.get("triggers", ())
        ),
        arguments=tuple(
            ArgumentLink(trigger_id=a["trigger"], entity_id=a["entity"], role=a["role"])
            for a in d.get("arguments", ())
        ),
    )


def to_json(s: SentenceAnnotation) -> str:
    return json.dumps(to_dict(s), ensure_ascii=False)


def from_json(line: str) -> SentenceAnnotation:
    return from_dict(json.loads(line))


def read_jsonl(path: str | Path) -> list[SentenceAnnotation]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                docs.append(from_json(line))
    return docs


def iter_jsonl(path: str | Path) -> Iterator[SentenceAnnotation]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield from_json(line)


def write_jsonl(docs: Iterable[SentenceAnnotation], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(to_json(doc) + "\n")
