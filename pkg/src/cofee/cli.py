"""`cofee` command line: match, coverage, score, split, stats, serve.

Corpus inputs are either canonical JSONL documents or plain text with one
record per line; the reader sniffs the format.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import corpus as corpus_io
from .evaluation import ARG_MATCH_MODES, score_all, stratified_split
from .lexicon import bundled_lexicon_path, coverage as coverage_op, load_lexicon, match as match_op
from .model import read_jsonl, write_jsonl
from .ontology import bundled_ontology_path, load_ontology
from .tokenizer import token_texts, tokenize


def _read_corpus_texts(path: Path) -> list[tuple[str, str]]:
    """Yield (record id, text) pairs from JSONL documents or raw lines."""
    records: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            if line.startswith("{"):
                try:
                    obj = json.loads(line)
                    records.append((str(obj.get("doc_id", i)), obj["text"]))
                    continue
                except (json.JSONDecodeError, KeyError):
                    pass
            records.append((str(i), line))
    return records


@click.group()
def main() -> None:
    """Event-extraction workbench."""


@main.command("match")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None,
              help="Lexicon CSV; defaults to the bundled keyword table.")
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def match_cmd(lexicon_path, ontology_path, corpus_path, out_path) -> None:
    """Scan a corpus for lexicon hits; writes one JSON line per record."""
    o = load_ontology(ontology_path)
    lex = load_lexicon(lexicon_path or bundled_lexicon_path(), o)
    with open(out_path, "w", encoding="utf-8") as out:
        for record_id, text in _read_corpus_texts(Path(corpus_path)):
            tokens = token_texts(text, tokenize(text))
            hits = match_op(tokens, lex)
            out.write(json.dumps({
                "record": record_id,
                "hits": [
                    {"span": h.span.to_json(), "phrase": h.phrase,
                     "subtypes": sorted(h.subtypes)}
                    for h in hits
                ],
            }, ensure_ascii=False) + "\n")
    click.echo(f"wrote {out_path}")


@main.command("coverage")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--report", "report_path", type=click.Path(), required=True)
def coverage_cmd(lexicon_path, ontology_path, corpus_path, report_path) -> None:
    """Fraction of records with at least one lexicon hit, with per-subtype detail."""
    o = load_ontology(ontology_path)
    lex = load_lexicon(lexicon_path or bundled_lexicon_path(), o)
    texts = [text for _, text in _read_corpus_texts(Path(corpus_path))]
    report = coverage_op(texts, lex)
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, ensure_ascii=False, indent=2, sort_keys=False)
        fh.write("\n")
    click.echo(f"coverage {report.coverage:.4f} ({report.covered_records}/{report.total_records})")


@main.command("score")
@click.option("--gold", "gold_path", type=click.Path(exists=True), required=True)
@click.option("--pred", "pred_path", type=click.Path(exists=True), required=True)
@click.option("--report", "report_path", type=click.Path(), required=True)
@click.option("--arg-match", type=click.Choice(ARG_MATCH_MODES), default="subtype-span",
              show_default=True)
def score_cmd(gold_path, pred_path, report_path, arg_match) -> None:
    """Micro-averaged P/R/F1 for triggers and arguments."""
    gold = read_jsonl(gold_path)
    pred = read_jsonl(pred_path)
    results = score_all(gold, pred, mode=arg_match)
    payload = [prf.to_dict(task) for task, prf in results.items()]
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    for row in payload:
        click.echo(
            f"{row['task']}: P={row['p']:.4f} R={row['r']:.4f} F1={row['f1']:.4f}"
            f" (tp={row['tp']} pred={row['n_pred']} gold={row['n_gold']})"
        )


@main.command("split")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--frac", type=float, default=0.15, show_default=True)
@click.option("--train", "train_path", type=click.Path(), required=True)
@click.option("--test", "test_path", type=click.Path(), required=True)
def split_cmd(in_path, seed, frac, train_path, test_path) -> None:
    """Stratified train/test split over event subtypes."""
    docs = read_jsonl(in_path)
    train, test = stratified_split(docs, seed=seed, frac=frac)
    write_jsonl(train, train_path)
    write_jsonl(test, test_path)
    click.echo(f"train {len(train)} / test {len(test)}")


@main.command("stats")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def stats_cmd(in_path, out_path) -> None:
    """Dataset statistics for a canonical JSONL corpus."""
    stats = corpus_io.compute_stats(read_jsonl(in_path))
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(stats.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    click.echo(f"{stats.n_sentences} sentences, {stats.n_triggers} triggers")


@main.command("export")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def export_cmd(in_path, fmt, out_path) -> None:
    """Re-serialize a JSONL corpus to CSV (one row per trigger-argument link)."""
    docs = read_jsonl(in_path)
    payload = corpus_io.export_annotations(docs, format=fmt)
    Path(out_path).write_text(payload, encoding="utf-8")
    click.echo(f"wrote {out_path}")


@main.command("ontology")
@click.option("--path", "path", type=click.Path(exists=True), default=None,
              help="Ontology file; defaults to the bundled one.")
def ontology_cmd(path) -> None:
    """Validate an ontology file and print its element counts."""
    o = load_ontology(path)
    click.echo(f"version {o.version}: {len(o.event_types)} event types, "
               f"{len(o.subtypes)} subtypes, {len(o.roles)} roles, "
               f"{len(o.entity_types)} entity types, {len(o.role_slots)} slots")
    click.echo(f"(bundled file: {bundled_ontology_path()})")


@main.command("serve")
@click.option("--bind", default=None, help="host:port; defaults to $COFEE_BIND")
def serve_cmd(bind) -> None:
    """Run the annotation service (configured via COFEE_* env vars)."""
    import uvicorn

    from .service.api import app_from_env

    bind = bind or os.environ.get("COFEE_BIND", "127.0.0.1:8570")
    host, _, port = bind.partition(":")
    app = app_from_env()
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8570), log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
