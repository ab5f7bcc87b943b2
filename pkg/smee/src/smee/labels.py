"""Fixed label index maps and the IOB decoder used at prediction time.

Trigger alphabet: B-/I- per subtype in schema order, then O; with 119
subtypes that is 239 labels and O sits at index 238. Role alphabet: the 21
roles in ordinal order plus 'no-role' at index 21.
"""

from __future__ import annotations

from .schema import Schema

OUTSIDE = "O"
NO_ROLE = "no-role"


def trigger_labels(schema: Schema) -> list[str]:
    out: list[str] = []
    for s in schema.subtypes:
        out.append(f"B-{s}")
        out.append(f"I-{s}")
    out.append(OUTSIDE)
    return out


def trigger_label_index(schema: Schema) -> dict[str, int]:
    return {label: i for i, label in enumerate(trigger_labels(schema))}


def role_labels(schema: Schema) -> list[str]:
    return list(schema.roles) + [NO_ROLE]


def role_label_index(schema: Schema) -> dict[str, int]:
    return {label: i for i, label in enumerate(role_labels(schema))}


def decode_iob(labels: list[str]) -> list[tuple[int, int, str]]:
    """Maximal B-I runs become (start, end, subtype) spans; an I-x without an
    open x-mention is treated as B-x (same repair the workbench applies)."""
    spans = []
    open_subtype = None
    open_start = 0
    for i, label in enumerate(labels):
        if label == OUTSIDE:
            if open_subtype is not None:
                spans.append((open_start, i - 1, open_subtype))
                open_subtype = None
            continue
        kind, subtype = label.split("-", 1)
        if kind == "B" or subtype != open_subtype:
            if open_subtype is not None:
                spans.append((open_start, i - 1, open_subtype))
            open_subtype = subtype
            open_start = i
    if open_subtype is not None:
        spans.append((open_start, len(labels) - 1, open_subtype))
    return spans


def encode_iob(n_tokens: int, triggers: list[dict]) -> list[str]:
    """Gold labels for training; triggers beyond the window are the caller's
    problem (they were truncated already)."""
    labels = [OUTSIDE] * n_tokens
    for t in triggers:
        start, end = t["span"]
        labels[start] = f"B-{t['subtype']}"
        for i in range(start + 1, end + 1):
            labels[i] = f"I-{t['subtype']}"
    return labels
