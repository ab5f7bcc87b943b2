"""`smee` command line: train and predict over canonical JSONL corpora.

Typical pipeline:
    cofee split --in gold.jsonl --seed 7 --frac 0.15 --train tr.jsonl --test te.jsonl
    smee train   --data tr.jsonl --config config.json --model-out model.pt
    smee predict --model model.pt --data te.jsonl --out pred.jsonl
    cofee score  --gold te.jsonl --pred pred.jsonl --report scores.json
"""

from __future__ import annotations

import sys

import click

from .config import ModelConfig, TrainConfig, load_config
from .corpus import read_jsonl, write_jsonl
from .predict import predict
from .schema import bundled_schema_path, load_schema
from .train import load_model, save_model, train


def _schema(path):
    return load_schema(path or bundled_schema_path())


@click.group()
def main() -> None:
    """Toy-scale neural event tagger."""


@main.command("train")
@click.option("--data", "data_path", type=click.Path(exists=True), required=True)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None,
              help="Ontology file; defaults to the workbench's bundled one.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True), default=None)
@click.option("--model-out", "model_out", type=click.Path(), required=True)
@click.option("--epochs", type=int, default=None)
@click.option("--seed", type=int, default=None)
def train_cmd(data_path, ontology_path, config_path, embeddings_path, model_out,
              epochs, seed) -> None:
    if config_path:
        model_config, train_config = load_config(config_path)
    else:
        model_config, train_config = ModelConfig(), TrainConfig()
    if epochs is not None:
        train_config = TrainConfig(epochs=epochs, lr=train_config.lr,
                                   seed=train_config.seed)
    if seed is not None:
        train_config = TrainConfig(epochs=train_config.epochs, lr=train_config.lr,
                                   seed=seed)
    schema = _schema(ontology_path)
    docs = read_jsonl(data_path)
    result = train(docs, schema, model_config, train_config,
                   embeddings_path=embeddings_path)
    save_model(result, model_config, model_out)
    click.echo(f"trained {train_config.epochs} epochs; "
               f"final loss {result.loss_curve[-1]:.4f}; wrote {model_out}")


@main.command("predict")
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--data", "data_path", type=click.Path(exists=True), required=True)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(), required=True)
def predict_cmd(model_path, data_path, ontology_path, out_path) -> None:
    schema = _schema(ontology_path)
    model, vocab, config = load_model(model_path, schema)
    docs = read_jsonl(data_path)
    write_jsonl(predict(model, docs, vocab, config, schema), out_path)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    sys.exit(main())
