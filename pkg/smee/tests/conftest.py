from __future__ import annotations

import random

import pytest

from smee.schema import bundled_schema_path, load_schema


@pytest.fixture(scope="session")
def schema():
    return load_schema(bundled_schema_path())


def offsets(words):
    toks, pos = [], 0
    for w in words:
        toks.append({"s": pos, "e": pos + len(w)})
        pos += len(w) + 1
    return toks


def make_doc(doc_id, words, triggers=(), entities=(), arguments=()):
    return {
        "doc_id": doc_id,
        "language": "en",
        "text": " ".join(words),
        "tokens": offsets(words),
        "entities": list(entities),
        "triggers": list(triggers),
        "arguments": list(arguments),
    }


def synthetic_corpus(schema, n=50, seed=0):
    """Memorizable corpus: one trigger word per subtype, one deterministic
    (role, entity type) per subtype, single-token spans."""
    rng = random.Random(seed)
    subtypes = list(schema.subtypes[:10])
    role_of = {}
    for s in subtypes:
        cands = sorted(
            (r, sorted(t)[0])
            for (sub, r), t in schema.slot_entity_types.items()
            if sub == s
        )
        role_of[s] = cands[0]
    docs = []
    for i in range(n):
        s = rng.choice(subtypes)
        role, etype = role_of[s]
        idx = subtypes.index(s)
        words = ["the", f"trig{idx}", "hit", f"ent{idx}", "today"]
        docs.append(
            make_doc(
                f"d{i}", words,
                triggers=[{"id": "t1", "span": [1, 1], "subtype": s, "tense": "past",
                           "polarity": "positive", "modality": "asserted"}],
                entities=[{"id": "e1", "span": [3, 3], "type": etype,
                           "surface": words[3]}],
                arguments=[{"trigger": "t1", "entity": "e1", "role": role}],
            )
        )
    return docs
