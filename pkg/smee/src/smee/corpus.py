"""Canonical JSONL corpus records (the workbench wire format), as plain dicts.

Shape per line: {"doc_id", "language", "text", "tokens": [{"s","e"}],
"entities": [{"id","span","type","surface"}], "triggers": [{"id","span",
"subtype","tense","polarity","modality"}], "arguments": [{"trigger",
"entity","role"}]}; spans are [start_token, end_token], end inclusive.
"""

from __future__ import annotations

import json
from pathlib import Path


def read_jsonl(path: str | Path) -> list[dict]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                docs.append(json.loads(line))
    return docs


def write_jsonl(docs: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")


def doc_words(doc: dict) -> list[str]:
    text = doc["text"]
    return [text[t["s"]:t["e"]] for t in doc.get("tokens", [])]
