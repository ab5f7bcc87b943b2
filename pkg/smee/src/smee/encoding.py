"""Corpus -> tensor encoding: token ids, trigger label matrix, and per-pair
position-feature sequences for the argument path.

Sentences are padded/truncated to `max_len`; annotations falling beyond the
window are dropped with a warning. Position features are relative distances
k - position(x), clipped to [-max_len, max_len] and offset by max_len so ids
are non-negative (table size 2*max_len + 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import torch

from .config import ModelConfig
from .corpus import doc_words
from .labels import NO_ROLE, encode_iob, role_label_index, trigger_label_index
from .schema import Schema

log = logging.getLogger(__name__)

PAD, UNK = "<pad>", "<unk>"


@dataclass(frozen=True)
class Vocab:
    index: dict[str, int]

    def __len__(self) -> int:
        return len(self.index)

    def id(self, word: str) -> int:
        return self.index.get(word.lower(), self.index[UNK])


def build_vocab(docs: list[dict]) -> Vocab:
    index = {PAD: 0, UNK: 1}
    for doc in docs:
        for word in doc_words(doc):
            index.setdefault(word.lower(), len(index))
    return Vocab(index)


@dataclass
class Pair:
    """One (trigger, entity) candidate inside a batched sentence."""

    sent: int
    trigger_span: tuple[int, int]
    entity_span: tuple[int, int]
    entity_id: str
    role_id: int


@dataclass
class EncodedBatch:
    token_ids: torch.Tensor        # B x L
    mask: torch.Tensor             # B x L, True on real tokens
    trigger_labels: torch.Tensor   # B x L, 239 classes, pads -100
    pf_trigger: torch.Tensor       # P x L
    pf_entity: torch.Tensor        # P x L
    pair_sent: torch.Tensor        # P
    role_labels: torch.Tensor      # P
    pairs: list[Pair] = field(default_factory=list)

    @property
    def n_sentences(self) -> int:
        return int(self.token_ids.shape[0])

    @property
    def n_pairs(self) -> int:
        return int(self.pf_trigger.shape[0])


def pf_ids(position: int, n_tokens: int, max_len: int) -> list[int]:
    """Clipped, offset relative distances from every token to `position`."""
    ids = []
    for k in range(max_len):
        if k < n_tokens:
            d = max(-max_len, min(max_len, k - position))
        else:
            d = 0  # pads carry the neutral distance
        ids.append(d + max_len)
    return ids


def encode_batch(
    docs: list[dict],
    vocab: Vocab,
    config: ModelConfig,
    schema: Schema,
    pairs_from_gold: bool = True,
) -> EncodedBatch:
    if len(vocab) <= 2:
        raise ValueError("empty vocabulary")
    L = config.max_len
    trig_index = trigger_label_index(schema)
    role_index = role_label_index(schema)

    token_rows, mask_rows, label_rows = [], [], []
    pf_t_rows, pf_e_rows, pair_sents, role_ids = [], [], [], []
    pairs: list[Pair] = []

    for si, doc in enumerate(docs):
        words = doc_words(doc)[:L]
        n = len(words)
        if len(doc.get("tokens", [])) > L:
            log.warning("doc %s truncated to %d tokens", doc.get("doc_id"), L)
        ids = [vocab.id(w) for w in words] + [0] * (L - n)
        token_rows.append(ids)
        mask_rows.append([True] * n + [False] * (L - n))

        kept_triggers = [
            t for t in doc.get("triggers", ()) if t["span"][1] < n
        ]
        dropped = len(doc.get("triggers", ())) - len(kept_triggers)
        if dropped:
            log.warning("doc %s: %d trigger(s) beyond the window dropped",
                        doc.get("doc_id"), dropped)
        labels = encode_iob(n, kept_triggers)
        label_rows.append(
            [trig_index[l] for l in labels] + [-100] * (L - n)
        )

        if not pairs_from_gold:
            continue
        entities = [e for e in doc.get("entities", ()) if e["span"][1] < n]
        role_of = {
            (a["trigger"], a["entity"]): a["role"] for a in doc.get("arguments", ())
        }
        for t in kept_triggers:
            for e in entities:
                role = role_of.get((t["id"], e["id"]), NO_ROLE)
                pf_t_rows.append(pf_ids(t["span"][0], n, L))
                pf_e_rows.append(pf_ids(e["span"][0], n, L))
                pair_sents.append(si)
                role_ids.append(role_index[role])
                pairs.append(Pair(si, tuple(t["span"]), tuple(e["span"]),
                                  e["id"], role_index[role]))

    def tensor(rows, dtype=torch.long):
        if rows:
            return torch.tensor(rows, dtype=dtype)
        width = L if dtype is torch.long else L
        return torch.empty((0, width), dtype=dtype)

    return EncodedBatch(
        token_ids=tensor(token_rows),
        mask=torch.tensor(mask_rows, dtype=torch.bool) if mask_rows
        else torch.empty((0, L), dtype=torch.bool),
        trigger_labels=tensor(label_rows),
        pf_trigger=tensor(pf_t_rows),
        pf_entity=tensor(pf_e_rows),
        pair_sent=torch.tensor(pair_sents, dtype=torch.long) if pair_sents
        else torch.empty((0,), dtype=torch.long),
        role_labels=torch.tensor(role_ids, dtype=torch.long) if role_ids
        else torch.empty((0,), dtype=torch.long),
        pairs=pairs,
    )
