"""IOB2 label codecs for trigger sequences.

One label per token: 'B-<subtype>' opens a trigger mention, 'I-<subtype>'
continues it, 'O' is outside. With 119 subtypes the alphabet has 239 labels;
'O' sits at the last index so downstream models can rely on a fixed map.
"""

from __future__ import annotations

from .model import SentenceAnnotation, Span, TriggerMention
from .ontology import Ontology

OUTSIDE = "O"


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    pass


def trigger_label_alphabet(o: Ontology) -> tuple[str, ...]:
    """B-x, I-x per subtype in ontology order, then 'O' at the last index."""
    labels: list[str] = []
    for s in o.subtypes:
        labels.append(f"B-{s.id}")
        labels.append(f"I-{s.id}")
    labels.append(OUTSIDE)
    return tuple(labels)


def iob_encode_triggers(s: SentenceAnnotation) -> list[str]:
    """Label every token; rejects overlapping or out-of-bounds triggers."""
    n = len(s.tokens)
    labels = [OUTSIDE] * n
    placed: list[TriggerMention] = []
    for t in sorted(s.triggers, key=lambda t: (t.span.start_token, t.span.end_token)):
        if t.span.end_token >= n:
            raise EncodeError(f"trigger {t.id!r} span {t.span.to_json()} exceeds {n} tokens")
        for prev in placed:
            if prev.span.overlaps(t.span):
                raise EncodeError(
                    f"overlapping triggers {prev.id!r} and {t.id!r} cannot be IOB-encoded"
                )
        placed.append(t)
        labels[t.span.start_token] = f"B-{t.subtype}"
        for i in range(t.span.start_token + 1, t.span.end_token + 1):
            labels[i] = f"I-{t.subtype}"
    return labels


def iob_decode_triggers(labels: list[str], o: Ontology) -> list[TriggerMention]:
    """Turn a label sequence back into trigger mentions (spans + subtypes).

    An I-x with no open B-x of the same subtype is repaired by treating it
    as B-x, so any sequence over the alphabet decodes deterministically.
    """
    alphabet = set(trigger_label_alphabet(o))
    mentions: list[TriggerMention] = []
    open_subtype: str | None = None
    open_start = 0

    def close(end: int) -> None:
        nonlocal open_subtype
        if open_subtype is not None:
            mentions.append(
                TriggerMention(
                    id=f"t{len(mentions)}",
                    span=Span(open_start, end),
                    subtype=open_subtype,
                )
            )
            open_subtype = None

    for i, label in enumerate(labels):
        if label not in alphabet:
            raise DecodeError(f"unknown label {label!r} at position {i}")
        if label == OUTSIDE:
            close(i - 1)
            continue
        kind, subtype = label.split("-", 1)
        if kind == "B" or subtype != open_subtype:
            close(i - 1)
            open_subtype = subtype
            open_start = i
    close(len(labels) - 1)
    return mentions
