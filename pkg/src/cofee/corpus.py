"""Corpus ingestion (CSV tables), export (CSV / JSONL), and dataset statistics."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .model import (
    SentenceAnnotation,
    annotate_text,
    to_json,
    validate_annotation,
)
from .ontology import Ontology

EXPORT_CSV_COLUMNS = [
    "doc_id", "sentence", "trigger_id", "trigger_text", "trigger_start",
    "trigger_end", "type", "subtype", "tense", "polarity", "modality",
    "entity_id", "entity_text", "entity_start", "entity_end", "entity_type",
    "role",
]


class ImportError_(ValueError):
    """Malformed import table (missing column, duplicate id)."""


def import_table(
    source: str | Path | io.TextIOBase,
    mapping: dict[str, str],
    language: str = "und",
) -> list[SentenceAnnotation]:
    """Read a delimited table into annotation skeletons, one document per row.

    `mapping` names the columns to use: {"text": <column>} is required;
    optional keys "id" and "language" pick those fields per row, otherwise
    ids are row indexes ("row-0", "row-1", ...).
    """
    if "text" not in mapping:
        raise ImportError_("mapping must name a 'text' column")
    if isinstance(source, (str, Path)):
        fh = open(source, encoding="utf-8-sig", newline="")
        close = True
    else:
        fh, close = source, False
    try:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for key, column in mapping.items():
            if column not in header:
                raise ImportError_(f"mapped column {column!r} (for {key!r}) not in header {header}")
        docs: list[SentenceAnnotation] = []
        seen: set[str] = set()
        for i, row in enumerate(reader):
            doc_id = row[mapping["id"]] if "id" in mapping else f"row-{i}"
            if doc_id in seen:
                raise ImportError_(f"duplicate document id {doc_id!r}")
            seen.add(doc_id)
            lang = row[mapping["language"]] if "language" in mapping else language
            docs.append(annotate_text(doc_id, row[mapping["text"]], language=lang))
        return docs
    finally:
        if close:
            fh.close()


def export_annotations(
    docs: Sequence[SentenceAnnotation],
    format: str = "jsonl",
    ontology: Ontology | None = None,
) -> str:
    """Serialize a corpus; JSONL round-trips losslessly, CSV is flat.

    The CSV form emits one row per (trigger, argument) link plus one row
    per argument-less trigger, with entity columns left empty. When an
    ontology is supplied, documents are validated first and the first
    violation aborts the export.
    """
    if ontology is not None:
        for doc in docs:
            violations = validate_annotation(doc, ontology)
            if violations:
                raise ValueError(f"document {doc.doc_id!r} is invalid: {violations[0]}")
    if format == "jsonl":
        return "".join(to_json(d) + "\n" for d in docs)
    if format != "csv":
        raise ValueError(f"unknown export format {format!r}")

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(EXPORT_CSV_COLUMNS)
    for doc in docs:
        links_by_trigger: dict[str, list] = {t.id: [] for t in doc.triggers}
        for a in doc.arguments:
            links_by_trigger.setdefault(a.trigger_id, []).append(a)
        for t in doc.triggers:
            base = [
                doc.doc_id, doc.text, t.id, doc.span_text(t.span),
                t.span.start_token, t.span.end_token, t.subtype.split(".", 1)[0],
                t.subtype, t.tense, t.polarity, t.modality,
            ]
            links = links_by_trigger.get(t.id, [])
            if not links:
                writer.writerow(base + [""] * 6)
                continue
            for a in links:
                e = doc.entity(a.entity_id)
                writer.writerow(
                    base
                    + [e.id, doc.span_text(e.span), e.span.start_token,
                       e.span.end_token, e.entity_type, a.role]
                )
    return buf.getvalue()


@dataclass
class DatasetStats:
    n_sentences: int = 0
    n_words: int = 0
    n_entity_mentions: int = 0
    n_triggers: int = 0
    n_arguments: int = 0
    triggers_by_tense: dict[str, int] = field(default_factory=dict)
    triggers_by_polarity: dict[str, int] = field(default_factory=dict)
    triggers_by_modality: dict[str, int] = field(default_factory=dict)
    per_subtype_trigger_counts: dict[str, int] = field(default_factory=dict)

    def add(self, other: "DatasetStats") -> "DatasetStats":
        """Map-wise sum, so shard statistics merge into corpus statistics."""
        def merged(a: dict[str, int], b: dict[str, int]) -> dict[str, int]:
            out = dict(a)
            for k, v in b.items():
                out[k] = out.get(k, 0) + v
            return out

        return DatasetStats(
            n_sentences=self.n_sentences + other.n_sentences,
            n_words=self.n_words + other.n_words,
            n_entity_mentions=self.n_entity_mentions + other.n_entity_mentions,
            n_triggers=self.n_triggers + other.n_triggers,
            n_arguments=self.n_arguments + other.n_arguments,
            triggers_by_tense=merged(self.triggers_by_tense, other.triggers_by_tense),
            triggers_by_polarity=merged(self.triggers_by_polarity, other.triggers_by_polarity),
            triggers_by_modality=merged(self.triggers_by_modality, other.triggers_by_modality),
            per_subtype_trigger_counts=merged(
                self.per_subtype_trigger_counts, other.per_subtype_trigger_counts
            ),
        )

    def to_dict(self) -> dict:
        return {
            "n_sentences": self.n_sentences,
            "n_words": self.n_words,
            "n_entity_mentions": self.n_entity_mentions,
            "n_triggers": self.n_triggers,
            "n_arguments": self.n_arguments,
            "triggers_by_tense": dict(sorted(self.triggers_by_tense.items())),
            "triggers_by_polarity": dict(sorted(self.triggers_by_polarity.items())),
            "triggers_by_modality": dict(sorted(self.triggers_by_modality.items())),
            "per_subtype_trigger_counts": dict(
                sorted(self.per_subtype_trigger_counts.items())
            ),
        }


def compute_stats(docs: Iterable[SentenceAnnotation]) -> DatasetStats:
    stats = DatasetStats()
    for doc in docs:
        stats.n_sentences += 1
        stats.n_words += len(doc.tokens)
        stats.n_entity_mentions += len(doc.entities)
        stats.n_triggers += len(doc.triggers)
        stats.n_arguments += len(doc.arguments)
        for t in doc.triggers:
            stats.triggers_by_tense[t.tense] = stats.triggers_by_tense.get(t.tense, 0) + 1
            stats.triggers_by_polarity[t.polarity] = (
                stats.triggers_by_polarity.get(t.polarity, 0) + 1
            )
            stats.triggers_by_modality[t.modality] = (
                stats.triggers_by_modality.get(t.modality, 0) + 1
            )
            stats.per_subtype_trigger_counts[t.subtype] = (
                stats.per_subtype_trigger_counts.get(t.subtype, 0) + 1
            )
    return stats
