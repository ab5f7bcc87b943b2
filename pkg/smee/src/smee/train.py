"""Training loop: Adam over shuffled mini-batches, equal-weight sum of the
trigger and role cross-entropies, reproducible under a fixed seed."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from .config import ModelConfig, TrainConfig
from .corpus import doc_words
from .encoding import Vocab, build_vocab, encode_batch
from .labels import role_labels, trigger_labels
from .model import EventTagger
from .schema import Schema


class DivergenceError(RuntimeError):
    """Loss went NaN; carries the epoch/step where it happened."""


@dataclass
class TrainResult:
    model: EventTagger
    vocab: Vocab
    loss_curve: list[float]


def load_embeddings(path: str | Path, vocab: Vocab, dim: int) -> torch.Tensor:
    """Text table, one 'word v1 .. vD' line per word; unknown rows stay random."""
    table = torch.randn(len(vocab), dim) * 0.1
    table[0] = 0.0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) != dim + 1:
                continue
            word = parts[0].lower()
            if word in vocab.index:
                table[vocab.index[word]] = torch.tensor([float(x) for x in parts[1:]])
    return table


def train(
    docs: list[dict],
    schema: Schema,
    model_config: ModelConfig | None = None,
    train_config: TrainConfig | None = None,
    embeddings_path: str | Path | None = None,
) -> TrainResult:
    model_config = model_config or ModelConfig()
    train_config = train_config or TrainConfig()
    torch.manual_seed(train_config.seed)
    rng = random.Random(train_config.seed)

    vocab = build_vocab(docs)
    pretrained = None
    if embeddings_path is not None:
        pretrained = load_embeddings(embeddings_path, vocab, model_config.word_embedding_dim)
    model = EventTagger(
        vocab_size=len(vocab),
        n_trigger_labels=len(trigger_labels(schema)),
        n_role_labels=len(role_labels(schema)),
        config=model_config,
        pretrained_embeddings=pretrained,
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=train_config.lr)
    ce = nn.CrossEntropyLoss(ignore_index=-100)

    def batch_loss(batch) -> torch.Tensor:
        trigger_logits, _, role_logits = model(batch)
        loss = ce(
            trigger_logits.reshape(-1, trigger_logits.shape[-1]),
            batch.trigger_labels.reshape(-1),
        )
        if batch.n_pairs:
            loss = loss + ce(role_logits, batch.role_labels)
        return loss

    full_batch = encode_batch(docs, vocab, model_config, schema)
    order = list(range(len(docs)))
    curve: list[float] = []
    for epoch in range(train_config.epochs):
        rng.shuffle(order)
        model.train()
        for step, start in enumerate(range(0, len(order), model_config.batch_size)):
            chunk = [docs[i] for i in order[start : start + model_config.batch_size]]
            loss = batch_loss(encode_batch(chunk, vocab, model_config, schema))
            if torch.isnan(loss):
                raise DivergenceError(
                    f"loss is NaN at epoch {epoch}, batch {step} "
                    f"(lr={train_config.lr}, seed={train_config.seed})"
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        # the recorded curve is a dropout-free pass over the whole set, so it
        # is a pure function of (data, parameters)
        model.eval()
        with torch.no_grad():
            epoch_loss = float(batch_loss(full_batch))
        if torch.isnan(torch.tensor(epoch_loss)):
            raise DivergenceError(
                f"loss is NaN after epoch {epoch} "
                f"(lr={train_config.lr}, seed={train_config.seed})"
            )
        curve.append(epoch_loss)
    return TrainResult(model=model, vocab=vocab, loss_curve=curve)


def save_model(result: TrainResult, model_config: ModelConfig, path: str | Path) -> None:
    torch.save(
        {
            "state_dict": result.model.state_dict(),
            "vocab": result.vocab.index,
            "model_config": model_config.__dict__,
        },
        path,
    )


def load_model(path: str | Path, schema: Schema) -> tuple[EventTagger, Vocab, ModelConfig]:
    payload = torch.load(path, weights_only=True)
    config = ModelConfig(**payload["model_config"])
    vocab = Vocab(payload["vocab"])
    model = EventTagger(
        vocab_size=len(vocab),
        n_trigger_labels=len(trigger_labels(schema)),
        n_role_labels=len(role_labels(schema)),
        config=config,
    )
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, vocab, config
