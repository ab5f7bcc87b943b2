"""Inference: argmax-decode trigger labels per token, then classify the role
of every (predicted trigger, gold entity) pair; slot-invalid roles fall back
to no-role so the output always validates against the schema."""

from __future__ import annotations

import torch

from .config import ModelConfig
from .encoding import Vocab, encode_batch
from .labels import NO_ROLE, decode_iob, role_labels, trigger_labels
from .model import EventTagger
from .schema import Schema


def predict(
    model: EventTagger,
    docs: list[dict],
    vocab: Vocab,
    config: ModelConfig,
    schema: Schema,
) -> list[dict]:
    model.eval()
    trig_alpha = trigger_labels(schema)
    role_alpha = role_labels(schema)
    out_docs: list[dict] = []
    with torch.no_grad():
        for doc in docs:
            out_docs.append(_predict_doc(model, doc, vocab, config, schema,
                                          trig_alpha, role_alpha))
    return out_docs


def _predict_doc(model, doc, vocab, config, schema, trig_alpha, role_alpha) -> dict:
    batch = encode_batch([doc], vocab, config, schema, pairs_from_gold=False)
    trigger_logits, _, _ = model(batch)
    n = int(batch.mask[0].sum())
    label_ids = trigger_logits[0, :n].argmax(dim=-1).tolist()
    spans = decode_iob([trig_alpha[i] for i in label_ids])
    triggers = [
        {"id": f"pt{i}", "span": [s, e], "subtype": subtype,
         "tense": "unspecified", "polarity": "positive", "modality": "asserted"}
        for i, (s, e, subtype) in enumerate(spans)
    ]

    entities = [e for e in doc.get("entities", ()) if e["span"][1] < n]
    arguments = []
    if triggers and entities:
        probe = dict(doc)
        probe["triggers"] = triggers
        probe["arguments"] = []
        pair_batch = encode_batch([probe], vocab, config, schema)
        _, _, role_logits = model(pair_batch)
        role_ids = role_logits.argmax(dim=-1).tolist()
        trigger_by_span = {tuple(t["span"]): t for t in triggers}
        for pair, rid in zip(pair_batch.pairs, role_ids):
            role = role_alpha[rid]
            if role == NO_ROLE:
                continue
            trigger = trigger_by_span[pair.trigger_span]
            allowed = schema.slot_entity_types.get((trigger["subtype"], role))
            if allowed is None:
                continue  # slot-invalid role: repaired to no-role
            entity = next(e for e in entities if e["id"] == pair.entity_id)
            if entity["type"] not in allowed:
                continue
            arguments.append(
                {"trigger": trigger["id"], "entity": pair.entity_id, "role": role}
            )

    out = dict(doc)
    out["triggers"] = triggers
    out["arguments"] = arguments
    return out
