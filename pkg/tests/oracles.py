"""Independent brute-force reference implementations.

Everything here is written from the contracts alone and deliberately avoids
the production code paths it checks; golden files under fixtures/ were
produced from these routines and reviewed by hand.
"""

from __future__ import annotations

import unicodedata


def iob_decode_oracle(labels: list[str]) -> list[tuple[int, int, str]]:
    """Hand-specified IOB2 reading: a mention starts at B-x or at an I-x that
    does not continue an open x-mention, and runs through following I-x."""
    mentions = []
    i = 0
    n = len(labels)
    while i < n:
        label = labels[i]
        if label == "O":
            i += 1
            continue
        subtype = label[2:]
        j = i + 1
        while j < n and labels[j] == f"I-{subtype}":
            j += 1
        mentions.append((i, j - 1, subtype))
        i = j
    return mentions


def normalize_oracle(token: str) -> str:
    return unicodedata.normalize("NFKC", token).lower()


def match_oracle(
    tokens: list[str], entries: dict[str, frozenset[str]], max_len: int = 5
) -> list[tuple[int, int, str]]:
    """All-windows enumeration followed by longest-match suppression:
    left to right, at each uncovered position keep the longest matching
    window and skip everything it covers."""
    norm = [normalize_oracle(t) for t in tokens]
    by_start: dict[int, list[int]] = {}
    for start in range(len(tokens)):
        for length in range(1, min(max_len, len(tokens) - start) + 1):
            phrase = " ".join(norm[start : start + length])
            if phrase in entries:
                by_start.setdefault(start, []).append(length)
    hits = []
    cursor = 0
    for start in sorted(by_start):
        if start < cursor:
            continue
        length = max(by_start[start])
        phrase = " ".join(norm[start : start + length])
        hits.append((start, start + length - 1, phrase))
        cursor = start + length
    return hits


def coverage_oracle(
    token_lists: list[list[str]], entries: dict[str, frozenset[str]]
) -> dict:
    """Record-level coverage recomputed from the match oracle."""
    total = len(token_lists)
    covered = 0
    record_counts: dict[str, int] = {}
    occurrence_counts: dict[str, int] = {}
    for tokens in token_lists:
        hits = match_oracle(tokens, entries)
        if hits:
            covered += 1
        seen = set()
        for start, end, phrase in hits:
            for subtype in entries[phrase]:
                seen.add(subtype)
                occurrence_counts[subtype] = occurrence_counts.get(subtype, 0) + 1
        for subtype in seen:
            record_counts[subtype] = record_counts.get(subtype, 0) + 1
    return {
        "total_records": total,
        "covered_records": covered,
        "coverage": covered / total,
        "per_subtype_record_counts": dict(sorted(record_counts.items())),
        "per_subtype_occurrence_counts": dict(sorted(occurrence_counts.items())),
    }


def prf_oracle(gold_keys: list, pred_keys: list) -> tuple[int, int, int, float, float, float]:
    """Greedy multiset intersection: each gold item consumed at most once."""
    remaining = list(gold_keys)
    tp = 0
    for key in pred_keys:
        if key in remaining:
            remaining.remove(key)
            tp += 1
    n_pred, n_gold = len(pred_keys), len(gold_keys)
    p = tp / n_pred if n_pred else 0.0
    r = tp / n_gold if n_gold else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return tp, n_pred, n_gold, p, r, f1


def cosine_rank_oracle(
    query: str, vectors: dict[str, list[float]], k: int
) -> list[str]:
    """Top-k neighbors by cosine similarity, brute force, ties by word."""
    if query not in vectors:
        raise KeyError(query)
    q = vectors[query]

    def cosine(a: list[float], b: list[float]) -> float:
        dot = sum(x * y for x, y in zip(a, b))
        na = sum(x * x for x in a) ** 0.5
        nb = sum(x * x for x in b) ** 0.5
        return dot / (na * nb) if na and nb else 0.0

    scored = sorted(
        ((cosine(q, v), w) for w, v in vectors.items() if w != query),
        key=lambda t: (-t[0], t[1]),
    )
    return [w for _, w in scored[:k]]
