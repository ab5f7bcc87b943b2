from __future__ import annotations

import random

import pytest

from cofee.lexicon import bundled_lexicon_path, load_lexicon
from cofee.model import (
    ArgumentLink,
    EntityMention,
    SentenceAnnotation,
    Span,
    TriggerMention,
    annotate_text,
)
from cofee.ontology import load_ontology

CHOLERA_TEXT = (
    "A cholera outbreak has since April 27 killed at least 115 people "
    "and left another 8,500 ill across Yemen."
)


@pytest.fixture(scope="session")
def ontology():
    return load_ontology()


@pytest.fixture(scope="session")
def bundled_lexicon(ontology):
    return load_lexicon(bundled_lexicon_path(), ontology)


def build_cholera_doc() -> SentenceAnnotation:
    """The worked outbreak/killed/ill example, fully annotated.

    Tokens: A(0) cholera(1) outbreak(2) has(3) since(4) April(5) 27(6)
    killed(7) at(8) least(9) 115(10) people(11) and(12) left(13)
    another(14) 8,500(15) ill(16) across(17) Yemen(18) .(19)
    """
    base = annotate_text("wiki-cholera", CHOLERA_TEXT, language="en")
    entities = (
        EntityMention("e1", Span(0, 1), "disease", "A cholera"),
        EntityMention("e2", Span(4, 6), "time", "since April 27"),
        EntityMention("e3", Span(10, 10), "numeric", "115"),
        EntityMention("e4", Span(11, 11), "person", "people"),
        EntityMention("e5", Span(14, 14), "person", "another"),
        EntityMention("e6", Span(15, 15), "numeric", "8,500"),
        EntityMention("e7", Span(18, 18), "geo-political-entity", "Yemen"),
    )
    triggers = (
        TriggerMention("t1", Span(2, 2), "environment.epidemics", tense="present"),
        TriggerMention("t2", Span(7, 7), "life.death", tense="past"),
        TriggerMention("t3", Span(16, 16), "life.injury", tense="present"),
    )
    arguments = (
        ArgumentLink("t1", "e1", "source"),
        ArgumentLink("t1", "e2", "time"),
        ArgumentLink("t1", "e3", "number-of-deaths"),
        ArgumentLink("t1", "e4", "target"),
        ArgumentLink("t1", "e5", "target"),
        ArgumentLink("t1", "e6", "number-of-injuries"),
        ArgumentLink("t1", "e7", "place"),
        ArgumentLink("t2", "e2", "time"),
        ArgumentLink("t2", "e3", "number-of-participants"),
        ArgumentLink("t2", "e4", "participant"),
        ArgumentLink("t2", "e7", "place"),
        ArgumentLink("t3", "e2", "time"),
        ArgumentLink("t3", "e5", "participant"),
        ArgumentLink("t3", "e6", "number-of-participants"),
        ArgumentLink("t3", "e7", "place"),
    )
    return SentenceAnnotation(
        doc_id=base.doc_id, text=base.text, language="en", tokens=base.tokens,
        entities=entities, triggers=triggers, arguments=arguments,
    )


@pytest.fixture()
def cholera_doc():
    return build_cholera_doc()


# -- random data generators ---------------------------------------------------


def random_trigger_set(
    rng: random.Random, n_tokens: int, subtypes: list[str], max_triggers: int = 4
) -> list[TriggerMention]:
    """Non-overlapping triggers over an n-token sentence."""
    triggers: list[TriggerMention] = []
    taken: list[Span] = []
    for i in range(rng.randint(0, max_triggers)):
        for _ in range(10):  # rejection sampling
            start = rng.randrange(n_tokens)
            end = min(n_tokens - 1, start + rng.choice((0, 0, 0, 1, 2)))
            span = Span(start, end)
            if not any(span.overlaps(t) for t in taken):
                taken.append(span)
                triggers.append(
                    TriggerMention(f"t{i}", span, rng.choice(subtypes))
                )
                break
    return triggers


def random_scored_doc(
    rng: random.Random, doc_id: str, subtypes: list[str]
) -> tuple[SentenceAnnotation, SentenceAnnotation]:
    """A (gold, pred) pair over the same text, with overlapping content so
    true positives, misses, and spurious predictions all occur."""
    n_tokens = rng.randint(3, 12)
    text = " ".join(f"w{i}" for i in range(n_tokens))
    roles = ["time", "place", "participant", "source", "target"]

    def build(tag: str) -> SentenceAnnotation:
        doc = annotate_text(doc_id, text)
        triggers = []
        entities = []
        arguments = []
        for i in range(rng.randint(0, 3)):
            s = rng.randrange(n_tokens)
            triggers.append(
                TriggerMention(f"{tag}t{i}", Span(s, s), rng.choice(subtypes))
            )
        for i in range(rng.randint(0, 3)):
            s = rng.randrange(n_tokens)
            entities.append(EntityMention(f"{tag}e{i}", Span(s, s), "person"))
        for t in triggers:
            for e in entities:
                if rng.random() < 0.5 and not any(
                    a.trigger_id == t.id and a.entity_id == e.id for a in arguments
                ):
                    arguments.append(ArgumentLink(t.id, e.id, rng.choice(roles)))
        return SentenceAnnotation(
            doc_id=doc.doc_id, text=text, tokens=doc.tokens,
            entities=tuple(entities), triggers=tuple(triggers),
            arguments=tuple(arguments),
        )

    return build("g"), build("p")


def synthetic_split_corpus(
    rng: random.Random, n_docs: int, subtypes: list[str]
) -> list[SentenceAnnotation]:
    """Corpus with a skewed subtype distribution and mild co-occurrence."""
    weighted = []
    for i, s in enumerate(subtypes):
        weighted.extend([s] * (1 + (i % 7)))
    docs = []
    for i in range(n_docs):
        doc = annotate_text(f"d{i:05d}", "w0 w1 w2 w3 w4 w5")
        n_triggers = rng.choice((1, 1, 1, 2))
        chosen: list[str] = []
        for _ in range(n_triggers):
            chosen.append(rng.choice(weighted))
        triggers = tuple(
            TriggerMention(f"t{j}", Span(j, j), s) for j, s in enumerate(chosen)
        )
        docs.append(
            SentenceAnnotation(
                doc_id=doc.doc_id, text=doc.text, tokens=doc.tokens, triggers=triggers
            )
        )
    return docs
