"""Keyword/phrase event detection and corpus coverage analytics.

Matching is exact surface match after NFKC + lowercasing; no stemming.
Entries are stored in tokenized-normalized form so multi-word phrases
("initial public offering", "covid-19") line up with tokenizer output.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .model import Span
from .ontology import Ontology
from .tokenizer import DEFAULT_PROFILE, tokenize, token_texts

MAX_PHRASE_TOKENS = 5

PROVENANCES = ("seed", "expanded", "custom")


class LexiconError(ValueError):
    pass


def normalize_phrase(phrase: str) -> str:
    """NFKC, lowercase, tokenize, and re-join with single spaces."""
    text = unicodedata.normalize("NFKC", phrase).lower()
    return " ".join(token_texts(text, tokenize(text)))


@dataclass(frozen=True)
class Lexicon:
    """Immutable phrase -> event subtypes mapping with per-pair provenance."""

    entries: dict[str, frozenset[str]]
    provenance: dict[tuple[str, str], str]
    max_tokens: int = MAX_PHRASE_TOKENS

    def subtypes_for(self, phrase: str) -> frozenset[str]:
        return self.entries.get(normalize_phrase(phrase), frozenset())

    def __contains__(self, phrase: str) -> bool:
        return normalize_phrase(phrase) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def with_entry(self, phrase: str, subtype: str, provenance: str = "custom") -> "Lexicon":
        """Return a new lexicon with one more (phrase, subtype) pair."""
        key = normalize_phrase(phrase)
        if not key:
            raise LexiconError("empty phrase")
        entries = dict(self.entries)
        entries[key] = entries.get(key, frozenset()) | {subtype}
        prov = dict(self.provenance)
        prov.setdefault((key, subtype), provenance)
        return Lexicon(entries=entries, provenance=prov, max_tokens=self.max_tokens)


def build_lexicon(
    rows: Iterable[tuple[str, str, str]], ontology: Ontology | None = None
) -> Lexicon:
    """Assemble a lexicon from (phrase, subtype, provenance) triples."""
    entries: dict[str, set[str]] = {}
    provenance: dict[tuple[str, str], str] = {}
    for phrase, subtype, prov in rows:
        key = normalize_phrase(phrase)
        if not key:
            raise LexiconError(f"empty phrase for subtype {subtype!r}")
        if len(key.split(" ")) > MAX_PHRASE_TOKENS:
            raise LexiconError(f"phrase {phrase!r} exceeds {MAX_PHRASE_TOKENS} tokens")
        if ontology is not None and not ontology.has_subtype(subtype):
            raise LexiconError(f"unknown event subtype {subtype!r} for phrase {phrase!r}")
        entries.setdefault(key, set()).add(subtype)
        provenance.setdefault((key, subtype), prov)
    return Lexicon(
        entries={k: frozenset(v) for k, v in entries.items()}, provenance=provenance
    )


def _resolve_subtype(o: Ontology, type_name: str, subtype_name: str) -> str:
    """Map CSV (type, subtype) names to a subtype id; tolerant of display names."""
    def slug(name: str) -> str:
        return "-".join(unicodedata.normalize("NFKC", name).lower().split())

    candidate = f"{slug(type_name)}.{slug(subtype_name)}"
    if o.has_subtype(candidate):
        return candidate
    if o.has_subtype(subtype_name):
        return subtype_name
    try:
        return o.subtype_by_code(subtype_name).id
    except Exception:
        pass
    by_display = {
        (s.parent, s.display_name.lower()): s.id for s in o.subtypes
    }
    hit = by_display.get((slug(type_name), subtype_name.strip().lower()))
    if hit:
        return hit
    raise LexiconError(f"unknown event subtype {subtype_name!r} (type {type_name!r})")


def load_lexicon(source: str | Path, ontology: Ontology) -> Lexicon:
    """Load a lexicon CSV with columns type,subtype,phrase,provenance."""
    rows: list[tuple[str, str, str]] = []
    with open(source, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"type", "subtype", "phrase"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise LexiconError(f"lexicon CSV must have columns {sorted(required)}")
        for row in reader:
            subtype = _resolve_subtype(ontology, row["type"], row["subtype"])
            rows.append((row["phrase"], subtype, row.get("provenance") or "seed"))
    return build_lexicon(rows, ontology)


def bundled_lexicon_path() -> Path:
    from importlib import resources

    return Path(resources.files("cofee").joinpath("data/table9.lexicon.csv"))  # type: ignore[arg-type]


# -- matching ----------------------------------------------------------------


@dataclass(frozen=True)
class MatchHit:
    span: Span
    phrase: str
    subtypes: frozenset[str]


def match(tokens: Sequence[str], lex: Lexicon) -> list[MatchHit]:
    """Longest-match-first left-to-right scan over windows of up to 5 tokens.

    A matched window consumes its tokens, suppressing shorter sub-phrase
    hits inside it; hits come back ordered by start token.
    """
    normalized = [normalize_phrase(t) for t in tokens]
    hits: list[MatchHit] = []
    n = len(tokens)
    pos = 0
    while pos < n:
        matched = 0
        for length in range(min(lex.max_tokens, n - pos), 0, -1):
            window = normalized[pos : pos + length]
            if any(not t for t in window):
                continue  # windows crossing empty-normalized tokens cannot match
            phrase = " ".join(window)
            subtypes = lex.entries.get(phrase)
            if subtypes:
                hits.append(
                    MatchHit(span=Span(pos, pos + length - 1), phrase=phrase, subtypes=subtypes)
                )
                matched = length
                break
        pos += matched or 1
    return hits


# -- coverage ----------------------------------------------------------------


@dataclass(frozen=True)
class CoverageReport:
    total_records: int
    covered_records: int
    per_subtype_record_counts: dict[str, int]
    per_subtype_occurrence_counts: dict[str, int]

    @property
    def coverage(self) -> float:
        return self.covered_records / self.total_records

    def to_dict(self) -> dict:
        return {
            "total_records": self.total_records,
            "covered_records": self.covered_records,
            "coverage": self.coverage,
            "per_subtype_record_counts": dict(sorted(self.per_subtype_record_counts.items())),
            "per_subtype_occurrence_counts": dict(
                sorted(self.per_subtype_occurrence_counts.items())
            ),
        }

    @staticmethod
    def merge(reports: Iterable["CoverageReport"]) -> "CoverageReport":
        """Sum shard reports (coverage is re-derived from the pooled counts)."""
        total = covered = 0
        records: dict[str, int] = {}
        occurrences: dict[str, int] = {}
        for r in reports:
            total += r.total_records
            covered += r.covered_records
            for k, v in r.per_subtype_record_counts.items():
                records[k] = records.get(k, 0) + v
            for k, v in r.per_subtype_occurrence_counts.items():
                occurrences[k] = occurrences.get(k, 0) + v
        if total == 0:
            raise LexiconError("cannot merge empty coverage reports")
        return CoverageReport(total, covered, records, occurrences)


def coverage(corpus: Iterable[str], lex: Lexicon) -> CoverageReport:
    """Share of records with at least one lexicon hit, with per-subtype detail.

    Record counts use set semantics (a record counts once per subtype no
    matter how many hits); occurrence counts tally every hit.
    """
    total = covered = 0
    records: dict[str, int] = {}
    occurrences: dict[str, int] = {}
    for text in corpus:
        total += 1
        tokens = token_texts(text, tokenize(text, DEFAULT_PROFILE))
        hits = match(tokens, lex)
        if hits:
            covered += 1
        seen: set[str] = set()
        for hit in hits:
            for subtype in hit.subtypes:
                seen.add(subtype)
                occurrences[subtype] = occurrences.get(subtype, 0) + 1
        for subtype in seen:
            records[subtype] = records.get(subtype, 0) + 1
    if total == 0:
        raise LexiconError("empty corpus")
    return CoverageReport(total, covered, records, occurrences)


# -- expansion ---------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    phrase: str
    subtype: str
    source_seed: str


@dataclass(frozen=True)
class ExpansionResult:
    candidates: tuple[Candidate, ...]
    failures: tuple[tuple[str, str], ...]  # (seed phrase, error)


def expand_lexicon(
    seed: Lexicon,
    neighbors: Callable[[str, int], Sequence[str]],
    k: int,
    lemmatizer: Callable[[str], str] | None = None,
) -> ExpansionResult:
    """Query a similarity provider for up to `k` neighbors per seed phrase.

    Output is a review list only, never merged back automatically. Provider
    failures are collected per phrase without aborting the batch.
    """
    lemma = lemmatizer or (lambda s: s)
    candidates: list[Candidate] = []
    failures: list[tuple[str, str]] = []
    emitted: set[tuple[str, str]] = set()
    for phrase in sorted(seed.entries):
        try:
            found = list(neighbors(phrase, k))[:k]
        except Exception as exc:  # provider contract: isolate per-phrase faults
            failures.append((phrase, str(exc)))
            continue
        for subtype in sorted(seed.entries[phrase]):
            for neighbor in found:
                norm = normalize_phrase(lemma(neighbor))
                if not norm or len(norm.split(" ")) > seed.max_tokens:
                    continue
                if subtype in seed.entries.get(norm, frozenset()):
                    continue  # already a seed entry for this subtype
                key = (norm, subtype)
                if key in emitted:
                    continue
                emitted.add(key)
                candidates.append(Candidate(phrase=norm, subtype=subtype, source_seed=phrase))
    return ExpansionResult(candidates=tuple(candidates), failures=tuple(failures))
