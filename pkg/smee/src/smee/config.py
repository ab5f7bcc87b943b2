"""Model and training configuration with the published defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

ABLATIONS = ("full", "no_lstm", "no_cnn")


@dataclass(frozen=True)
class ModelConfig:
    word_embedding_dim: int = 200
    pf_dim: int = 10
    lstm_hidden: int = 64
    dropout: float = 0.5
    batch_size: int = 32
    cnn_filters: int = 64
    cnn_window: int = 3
    hidden_trigger: int = 384
    hidden_arg_id: int = 128
    hidden_arg_cls: int = 128
    max_len: int = 50
    ablation: str = "full"

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name == "ablation":
                continue
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.ablation not in ABLATIONS:
            raise ValueError(f"ablation must be one of {ABLATIONS}")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    lr: float = 1e-3
    seed: int = 0


def load_config(path: str | Path) -> tuple[ModelConfig, TrainConfig]:
    """JSON config whose keys mirror the ModelConfig/TrainConfig field names."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    model_keys = {f.name for f in fields(ModelConfig)}
    train_keys = {f.name for f in fields(TrainConfig)}
    unknown = set(raw) - model_keys - train_keys
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    model = ModelConfig(**{k: v for k, v in raw.items() if k in model_keys})
    train = TrainConfig(**{k: v for k, v in raw.items() if k in train_keys})
    return model, train
