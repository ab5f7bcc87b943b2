"""Event-extraction workbench: schema engine, annotation tooling, lexicon
matcher, exact span scoring, and a multi-user annotation service."""

from .ontology import (
    ArgumentRole,
    EntityType,
    EventSubtype,
    EventType,
    Ontology,
    RoleSlot,
    load_ontology,
    parse_ontology,
    serialize_ontology,
)
from .model import (
    ArgumentLink,
    EntityMention,
    SentenceAnnotation,
    Span,
    TriggerMention,
    Violation,
    annotate_text,
    role_label,
    validate_annotation,
)
from .tokenizer import Token, tokenize
from .iob import iob_decode_triggers, iob_encode_triggers, trigger_label_alphabet
from .lexicon import Lexicon, MatchHit, coverage, expand_lexicon, load_lexicon, match
from .evaluation import (
    PRF,
    score_argument_classification,
    score_argument_identification,
    score_triggers,
    stratified_split,
)
from .corpus import DatasetStats, compute_stats, export_annotations, import_table

__version__ = "0.1.0"

__all__ = [
    "ArgumentLink",
    "ArgumentRole",
    "DatasetStats",
    "EntityMention",
    "EntityType",
    "EventSubtype",
    "EventType",
    "Lexicon",
    "MatchHit",
    "Ontology",
    "PRF",
    "RoleSlot",
    "SentenceAnnotation",
    "Span",
    "Token",
    "TriggerMention",
    "Violation",
    "annotate_text",
    "compute_stats",
    "coverage",
    "expand_lexicon",
    "export_annotations",
    "import_table",
    "iob_decode_triggers",
    "iob_encode_triggers",
    "load_lexicon",
    "load_ontology",
    "match",
    "parse_ontology",
    "role_label",
    "score_argument_classification",
    "score_argument_identification",
    "score_triggers",
    "serialize_ontology",
    "stratified_split",
    "tokenize",
    "trigger_label_alphabet",
    "validate_annotation",
]
